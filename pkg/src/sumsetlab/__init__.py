"""sumsetlab: desk-scale almost-periodicity of convolutions, Bohr sets and
progressions in sumsets, with brute-force oracles for every construction."""

from .bohr import (
    BohrDescriptor,
    ChangReduction,
    chang_reduce,
    find_ap_in_bohr,
    find_subspace_in_bohr,
    large_spectrum,
    materialize,
    size_bound_check,
)
from .errors import CapExceededError, GroupMismatchError, HypothesisError
from .fourier import (
    GroupFunction,
    Spectrum,
    convolution_power,
    convolve,
    inverse,
    lp_translate_distance,
    spectral_l1_norm,
    transform,
)
from .freiman import (
    EmbeddingCertificate,
    choose_xi,
    doubling_stats,
    embed_many,
    embed_pair,
    intset,
    iterated_combination,
    plunnecke_quantities,
    sumset,
    verify_k_isomorphism,
)
from .groups import (
    Character,
    GroupElement,
    GroupSpec,
    character_distance,
    cyclic,
    enumerate_dual,
    enumerate_group,
    parse_group,
    vector,
)
from .pipelines import (
    ConstantsConfig,
    almost_period_bohr,
    bogolyubov_bohr,
    bootstrap_strong_lp,
    bound_table,
    brute_force_almost_periods,
    find_progression_dense,
    find_progression_small_doubling,
    finite_field_translate,
    longest_ap_oracle,
)
from .sampling import (
    Decomposition,
    SampleReport,
    SamplingTask,
    fourier_sample,
    measure_failure_rate,
    physical_sample,
    sample_approximant,
)
from .witness import ProgressionWitness

__version__ = "0.1.0"
