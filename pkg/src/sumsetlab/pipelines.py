"""End-to-end constructions: almost-period Bohr sets for convolutions, Bohr
sets of almost-periods via spectral bootstrapping, progression/subspace
extraction in sumsets, Bogolyubov containment, and the brute-force oracles
everything is validated against.

Every pipeline is deterministic given (seed, constants); randomized stages
derive per-attempt seeds from the caller's seed.  Witnesses are always
re-verified by exact membership before being returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import bohr as bohr_mod
from . import fourier, freiman
from .bohr import BohrDescriptor, ChangReduction, SubspaceWitness
from .errors import HypothesisError
from .fourier import GroupFunction, lp_translate_distance, spectral_l1_norm, transform
from .groups import (
    GroupSpec,
    as_indices,
    cyclic,
    negate_indices,
    next_prime,
    sumset_indices,
)
from .sampling import derive_seed, fourier_sample
from .witness import ProgressionWitness

#: Default retry budget before a pipeline starts shrinking its progression.
DEFAULT_RETRIES = 3


@dataclass(frozen=True)
class ConstantsConfig:
    """The otherwise-unnamed absolute constants, pinned to calibrated defaults.

    c_sample scales the sample count k = ceil(c_sample * p / eps^2); c_p
    scales exponent choices; c_eps scales epsilon choices (default 1/e);
    c_chang scales the reported Chang rank bound; c_bohr_radius scales the
    Bohr radius used for sampled spectra (default 1/3).
    """

    c_sample: float = 4.0
    c_p: float = 1.0
    c_eps: float = math.exp(-1)
    c_chang: float = 1.0
    c_bohr_radius: float = 1.0 / 3.0

    def __post_init__(self) -> None:
        for name, value in self.to_json().items():
            if value <= 0:
                raise ValueError(f"constant {name} must be positive, got {value}")

    def to_json(self) -> dict:
        return {
            "c_sample": self.c_sample,
            "c_p": self.c_p,
            "c_eps": self.c_eps,
            "c_chang": self.c_chang,
            "c_bohr_radius": self.c_bohr_radius,
        }

    @classmethod
    def from_mapping(cls, overrides: dict) -> "ConstantsConfig":
        known = cls().to_json()
        bad = set(overrides) - set(known)
        if bad:
            raise ValueError(f"unknown constants: {sorted(bad)}")
        known.update({k: float(v) for k, v in overrides.items()})
        return cls(**known)


DEFAULT_CONSTANTS = ConstantsConfig()


@dataclass(frozen=True)
class PeriodicityReport:
    """A Bohr set of verified L^p almost-periods of a function."""

    descriptor: BohrDescriptor
    p: float
    epsilon: float
    reference_name: str
    reference_value: float
    max_distance: float
    passed: bool
    bohr_size: int
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "descriptor": self.descriptor.to_json(),
            "rank": self.descriptor.rank,
            "radius": float(self.descriptor.delta),
            "p": float(self.p),
            "epsilon": float(self.epsilon),
            "reference": {"name": self.reference_name, "value": float(self.reference_value)},
            "max_distance": float(self.max_distance),
            "passed": bool(self.passed),
            "bohr_size": int(self.bohr_size),
            "details": self.details,
        }


def _verify_translates(f: GroupFunction, members: np.ndarray, p: float, threshold: float) -> tuple[float, bool]:
    group = f.group
    worst = 0.0
    ok = True
    for t in members:
        d = lp_translate_distance(f, group.coords_of(int(t)), p)
        if d > worst:
            worst = d
        if d > threshold:
            ok = False
    return worst, ok


def brute_force_almost_periods(
    f: GroupFunction, p: float, epsilon: float, reference: float | str
) -> tuple[np.ndarray, float]:
    """Exact almost-period set {t : ||f(.+t) - f||_p <= eps * reference}.

    ``reference`` is a number, or one of the selectors ``"spectral-l1"``
    (||fhat||_1) and ``"p-half-sqrt"`` (||f||_{p/2}^{1/2}).  Always contains
    0 and is symmetric.
    """
    ref = resolve_reference(f, p, reference)
    threshold = epsilon * ref
    group = f.group
    hits = []
    for t in range(group.order):
        if lp_translate_distance(f, group.coords_of(t), p) <= threshold:
            hits.append(t)
    return np.asarray(hits, dtype=np.int64), threshold


def resolve_reference(f: GroupFunction, p: float, reference: float | str) -> float:
    if isinstance(reference, str):
        if reference == "spectral-l1":
            return spectral_l1_norm(transform(f))
        if reference == "p-half-sqrt":
            return f.lp_norm(p / 2.0) ** 0.5
        raise ValueError(f"unknown reference selector {reference!r}")
    return float(reference)


def almost_period_bohr(
    f: GroupFunction,
    p: float,
    epsilon: float,
    seed: int,
    cfg: ConstantsConfig = DEFAULT_CONSTANTS,
) -> PeriodicityReport:
    """Bohr set of L^p almost-periods of f, relative to ||fhat||_1.

    Samples characters at accuracy eps/3, takes the Bohr set of the sampled
    frequencies at radius c_bohr_radius * eps, and verifies the translate
    inequality exhaustively over its members.
    """
    if f.is_zero():
        raise ValueError("almost-period construction needs a nonzero function")
    if not (0 < epsilon < 1):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    sample = fourier_sample(f, p, epsilon / 3.0, seed, c_sample=cfg.c_sample)
    radius = min(2.0, cfg.c_bohr_radius * epsilon)
    freqs = [c.frequency for c in sample.characters]
    descriptor = BohrDescriptor(f.group, tuple(freqs), radius)
    members = bohr_mod.materialize(descriptor)
    ref = sample.report.details["spectral_l1"]
    threshold = epsilon * ref
    worst, ok = _verify_translates(f, members, p, threshold)
    return PeriodicityReport(
        descriptor,
        p,
        epsilon,
        "spectral-l1",
        ref,
        worst,
        ok,
        int(members.size),
        details={
            "k": sample.report.k,
            "sample_error": sample.report.lp_error,
            "sample_target": epsilon / 3.0,
            "seed": seed,
            "constants": cfg.to_json(),
        },
    )


def _covering_translate(group: GroupSpec, support_mask: np.ndarray, offsets: Sequence[int]) -> int | None:
    """First x (canonical order) with x + offsets inside the support."""
    mask = np.ones(group.order, dtype=bool)
    for t in offsets:
        mask &= group.translate_values(support_mask, group.coords_of(int(t))).astype(bool)
        if not mask.any():
            return None
    return int(np.argmax(mask))


def _prime_window(n: int) -> int:
    """Least prime in [4n, 8n]."""
    p = next_prime(4 * n - 1)
    if p > 8 * n:
        raise HypothesisError(f"no prime in [{4 * n}, {8 * n}]")
    return p


@dataclass(frozen=True)
class DenseProgressionReport:
    witness: ProgressionWitness
    periodicity: PeriodicityReport
    oracle_length: int | None
    stats: dict

    def to_json(self) -> dict:
        return {
            "witness": self.witness.to_json(),
            "periodicity": self.periodicity.to_json(),
            "oracle_length": self.oracle_length,
            "stats": self.stats,
        }


def _truncate_centered(length: int, cap: int) -> int:
    """Largest odd length <= min(length, cap), at least 1."""
    m = min(length, cap)
    if m % 2 == 0:
        m -= 1
    return max(1, m)


def _centered_offsets(step: int, length: int, n: int) -> list[int]:
    half = (length - 1) // 2
    return [(j * step) % n for j in range(-half, half + 1)]


def _lift_centered_ap(x: int, step: int, length: int, n: int, lo: int, hi: int) -> list[int]:
    """Lift {x + j*step mod n} to integers in [lo, hi]; must form an integer AP."""
    half = (length - 1) // 2
    values = [(x + j * step) % n for j in range(-half, half + 1)]
    for v in values:
        if not (lo <= v <= hi):
            raise AssertionError("progression element escapes the embedding window")
    diffs = {values[i + 1] - values[i] for i in range(len(values) - 1)}
    if len(values) > 1 and len(diffs) != 1:
        raise AssertionError("lifted progression is not an arithmetic progression")
    return values


def find_progression_dense(
    a: Iterable[int],
    b: Iterable[int],
    n: int,
    seed: int,
    cfg: ConstantsConfig = DEFAULT_CONSTANTS,
    retries: int = DEFAULT_RETRIES,
    compare_oracle: bool = False,
) -> DenseProgressionReport:
    """Integer progression inside A+B for dense A, B in {1..n}.

    Embeds into Z/N' for the least prime N' in [4n, 8n], builds the
    almost-period Bohr set of 1_A * 1_B (eps = c_eps * sqrt(alpha*beta),
    p = max(2, c_p * sqrt(alpha*beta*log N'))), extracts a centered
    progression capped at e^p, and scans for a translate x with
    1_A*1_B(x + t) > 0 for every t.  On scan failure: fresh seeds, then
    geometric shrinking (always terminates; {0} certifies a single point).
    """
    a = freiman.intset(a)
    b = freiman.intset(b)
    if a[0] < 1 or a[-1] > n or b[0] < 1 or b[-1] > n:
        raise ValueError("A and B must be subsets of {1..n}")
    n_prime = _prime_window(n)
    group = cyclic(n_prime)
    a_idx = as_indices(group, a)
    b_idx = as_indices(group, b)
    alpha = a_idx.size / n_prime
    beta = b_idx.size / n_prime
    epsilon = min(0.999, cfg.c_eps * math.sqrt(alpha * beta))
    p = max(2.0, cfg.c_p * math.sqrt(alpha * beta * math.log(n_prime)))
    cap = n_prime if p > 30 else max(1, math.floor(math.exp(p)))
    f = fourier.convolve(GroupFunction.indicator(group, a_idx), GroupFunction.indicator(group, b_idx))
    support = np.zeros(n_prime, dtype=bool)
    support[sumset_indices(group, a_idx, b_idx)] = True
    int_sumset = set(freiman.sumset(a, b))

    attempts = 0
    shrink_steps = 0
    found = None
    periodicity = None
    ap = None
    for attempt in range(retries + 1):
        attempts += 1
        periodicity = almost_period_bohr(f, p, epsilon, derive_seed(seed, attempt), cfg)
        ap = bohr_mod.find_ap_in_bohr(periodicity.descriptor)
        length = _truncate_centered(ap.length, cap)
        offsets = _centered_offsets(ap.step, length, n_prime)
        x = _covering_translate(group, support, offsets)
        if x is not None:
            found = (x, ap.step, length)
            break
    if found is None:
        assert ap is not None
        length = _truncate_centered(ap.length, cap)
        while found is None:
            shrink_steps += 1
            length = _truncate_centered(max(1, length // 2), cap)
            offsets = _centered_offsets(ap.step, length, n_prime)
            x = _covering_translate(group, support, offsets)
            if x is not None:
                found = (x, ap.step, length)
            elif length == 1:
                raise HypothesisError("no covering translate found even for a single point")

    x, step, length = found
    values = _lift_centered_ap(x, step, length, n_prime, 2, 2 * n)
    int_step = values[1] - values[0] if length > 1 else 0
    if int_step < 0:
        values = list(reversed(values))
        int_step = -int_step
    verified = all(v in int_sumset for v in values)
    witness = ProgressionWitness("int", values[0], length, step=int_step, verified=verified)
    oracle_len = None
    if compare_oracle:
        oracle_len = longest_ap_oracle(freiman.sumset(a, b)).length
    assert periodicity is not None
    stats = {
        "n": n,
        "n_prime": n_prime,
        "alpha": alpha,
        "beta": beta,
        "epsilon": epsilon,
        "p": p,
        "length_cap": cap,
        "found_length": int(ap.length) if ap is not None else None,
        "attempts": attempts,
        "shrink_steps": shrink_steps,
        "constants": cfg.to_json(),
        "seed": seed,
    }
    return DenseProgressionReport(witness, periodicity, oracle_len, stats)


@dataclass(frozen=True)
class BootstrapReport:
    """Bohr set of strong L^p almost-periods of mu_A * 1_B, via smoothing,
    the 1/e-large spectrum of the almost-period set's measure, and greedy
    rank reduction."""

    periodicity: PeriodicityReport
    chang: ChangReduction
    k_fold: int
    delta: float
    x_size: int
    tau: float
    k_a: float
    k_b: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.periodicity.passed

    def to_json(self) -> dict:
        return {
            "periodicity": self.periodicity.to_json(),
            "chang": self.chang.to_json(),
            "k_fold": self.k_fold,
            "delta": self.delta,
            "x_size": self.x_size,
            "tau": self.tau,
            "K_A": self.k_a,
            "K_B": self.k_b,
            "details": self.details,
        }


def bootstrap_strong_lp(
    group: GroupSpec,
    a_support,
    b_support,
    p: float,
    epsilon: float,
    x_set="oracle",
    seed: int = 0,
    cfg: ConstantsConfig = DEFAULT_CONSTANTS,
) -> BootstrapReport:
    """Bohr set T with ||mu_A*1_B(.+t) - mu_A*1_B||_p <= eps ||mu_A*1_B||_{p/2}^{1/2} on T.

    Requires eps <= 1/sqrt(K_B).  The seed set X of almost-periods defaults
    to the brute-force (eps/3)-almost-period set of mu_A * 1_B; the measure
    mu_X is smoothed by a k-fold self-convolution with k = ceil(log(2/delta)),
    delta = eps / (5 sqrt(K_A)); its 1/e-large spectrum is rank-reduced by a
    greedy dissociated basis, and the final inequality is verified
    exhaustively over the reduced Bohr set.
    """
    a_idx = as_indices(group, a_support)
    b_idx = as_indices(group, b_support)
    if a_idx.size == 0 or b_idx.size == 0:
        raise ValueError("A and B must be nonempty")
    ab = sumset_indices(group, a_idx, b_idx)
    k_a = ab.size / a_idx.size
    k_b = ab.size / b_idx.size
    if epsilon > 1.0 / math.sqrt(k_b) + 1e-12:
        raise HypothesisError(f"epsilon {epsilon} exceeds 1/sqrt(K_B) = {1.0 / math.sqrt(k_b)}")
    f = fourier.convolve(GroupFunction.measure(group, a_idx), GroupFunction.indicator(group, b_idx))
    ref = resolve_reference(f, p, "p-half-sqrt")

    # Holder chain sanity: ||f||_{p/2} >= ||f||_1 / mu(A+B)^{1-2/p}.
    mu_ab = ab.size / group.order
    lhs = f.lp_norm(p / 2.0)
    rhs = f.lp_norm(1.0) / mu_ab ** (1.0 - 2.0 / p)
    if lhs < rhs - 1e-9:
        raise AssertionError(f"Holder chain violated: {lhs} < {rhs}")

    if isinstance(x_set, str) and x_set == "oracle":
        x_idx, _ = brute_force_almost_periods(f, p, epsilon / 3.0, ref)
    else:
        x_idx = as_indices(group, x_set)
    if x_idx.size == 0:
        raise ValueError("almost-period seed set X is empty")

    delta = epsilon / (5.0 * math.sqrt(k_a))
    k_fold = max(1, math.ceil(math.log(2.0 / delta)))
    mu_x = GroupFunction.measure(group, x_idx)
    smoothed = fourier.convolution_power(mu_x, k_fold)
    smoothing_error = (fourier.convolve(f, smoothed) - f).lp_norm(p)

    spectrum = bohr_mod.large_spectrum(mu_x, 1.0 / math.e)
    coeffs = transform(mu_x).coeffs
    weights = [abs(coeffs[c.index]) for c in spectrum]
    tau = x_idx.size / group.order
    chang = bohr_mod.chang_reduce(
        group, spectrum, delta, tau, weights=weights, threshold=1.0 / math.e, c_chang=cfg.c_chang
    )
    members = bohr_mod.materialize(chang.reduced)
    threshold = epsilon * ref
    worst, ok = _verify_translates(f, members, p, threshold)
    periodicity = PeriodicityReport(
        chang.reduced,
        p,
        epsilon,
        "p-half-sqrt",
        ref,
        worst,
        ok,
        int(members.size),
        details={"seed": seed, "constants": cfg.to_json()},
    )
    return BootstrapReport(
        periodicity,
        chang,
        k_fold,
        delta,
        int(x_idx.size),
        float(tau),
        float(k_a),
        float(k_b),
        details={
            "smoothing_error": smoothing_error,
            "holder_lhs": lhs,
            "holder_rhs": rhs,
            "spectrum_size": len(spectrum),
            "implied_radius_constant": (delta / max(1, chang.reduced.rank)) / epsilon * math.sqrt(k_a),
        },
    )


@dataclass(frozen=True)
class DoublingProgressionReport:
    witness: ProgressionWitness
    bootstrap: BootstrapReport
    certificate: freiman.EmbeddingCertificate
    stats: dict

    def to_json(self) -> dict:
        return {
            "witness": self.witness.to_json(),
            "bootstrap": self.bootstrap.to_json(),
            "certificate": self.certificate.to_json(),
            "stats": self.stats,
        }


def find_progression_small_doubling(
    a: Iterable[int],
    b: Iterable[int],
    seed: int,
    cfg: ConstantsConfig = DEFAULT_CONSTANTS,
    retries: int = DEFAULT_RETRIES,
) -> DoublingProgressionReport:
    """Integer progression inside A+B under a small-doubling hypothesis.

    Embeds (A, B) into Z/N (N the least prime above |2A-2A+2B-2B|) through
    the two-set model lemma with k = 2, normalizes so both band subsets and
    the map fix 0, runs the spectral bootstrap on the images with
    eps = c_eps / sqrt(K_B) and p = max(2, c_p sqrt(log N / (K_B log^3 2K_A))),
    extracts a progression capped at e^p, finds a covering translate, and
    pulls the progression back through the inverse isomorphism (2-isomorphisms
    preserve progressions).  The returned witness is verified inside A+B.
    """
    a = freiman.intset(a)
    b = freiman.intset(b)
    stats_swap = False
    if len(b) < len(a):  # ensure K_B <= K_A, i.e. |B| >= |A|
        a, b = b, a
        stats_swap = True
    diff = freiman.iterated_combination(a, b, 2)
    n = next_prime(len(diff))
    cert = freiman.embed_pair(a, b, 2, n)
    a_sub, b_sub = cert.a_subset, cert.b_subset
    a0, b0 = a_sub[0], b_sub[0]
    phi_a = {x - a0: (cert.phi[x] - cert.phi[a0]) % n for x in a_sub}
    phi_b = {y - b0: (cert.phi[y] - cert.phi[b0]) % n for y in b_sub}
    group = cyclic(n)
    img_a = as_indices(group, list(phi_a.values()))
    img_b = as_indices(group, list(phi_b.values()))
    if img_a.size != len(a_sub) or img_b.size != len(b_sub):
        raise AssertionError("embedding map is not injective on the selected bands")
    img_sum = sumset_indices(group, img_a, img_b)
    k_a = img_sum.size / img_a.size
    k_b = img_sum.size / img_b.size
    epsilon = cfg.c_eps / math.sqrt(k_b)
    p = max(2.0, cfg.c_p * math.sqrt(math.log(n) / (k_b * math.log(2 * k_a) ** 3)))
    cap = n if p > 30 else max(1, math.floor(math.exp(p)))

    # psi-inverse: image residue -> integer sum in (A_sub - a0) + (B_sub - b0).
    psi_inv: dict[int, int] = {}
    for x, px in phi_a.items():
        for y, py in phi_b.items():
            key = (px + py) % n
            prior = psi_inv.get(key)
            if prior is not None and prior != x + y:
                raise AssertionError("embedding images collide; certificate invalid")
            psi_inv[key] = x + y
    support = np.zeros(n, dtype=bool)
    support[img_sum] = True
    int_sumset = set(freiman.sumset(a, b))

    attempts = 0
    shrink_steps = 0
    found = None
    boot = None
    ap = None
    for attempt in range(retries + 1):
        attempts += 1
        boot = bootstrap_strong_lp(group, img_a, img_b, p, epsilon, "oracle", derive_seed(seed, attempt), cfg)
        ap = bohr_mod.find_ap_in_bohr(boot.periodicity.descriptor)
        length = _truncate_centered(ap.length, cap)
        offsets = _centered_offsets(ap.step, length, n)
        x = _covering_translate(group, support, offsets)
        if x is not None:
            found = (x, ap.step, length)
            break
    if found is None:
        assert ap is not None
        length = _truncate_centered(ap.length, cap)
        while found is None:
            shrink_steps += 1
            length = _truncate_centered(max(1, length // 2), cap)
            offsets = _centered_offsets(ap.step, length, n)
            x = _covering_translate(group, support, offsets)
            if x is not None:
                found = (x, ap.step, length)
            elif length == 1:
                raise HypothesisError("no covering translate found even for a single point")

    x, step, length = found
    half = (length - 1) // 2
    residues = [(x + j * step) % n for j in range(-half, half + 1)]
    ints = [psi_inv[r] + a0 + b0 for r in residues]
    if length > 1:
        diffs = {ints[i + 1] - ints[i] for i in range(len(ints) - 1)}
        if len(diffs) != 1:
            raise AssertionError("pulled-back progression is not arithmetic")
        int_step = ints[1] - ints[0]
        if int_step < 0:
            ints = list(reversed(ints))
            int_step = -int_step
    else:
        int_step = 0
    verified = all(v in int_sumset for v in ints)
    witness = ProgressionWitness("int", ints[0], length, step=int_step, verified=verified)
    assert boot is not None
    stats = {
        "swapped": stats_swap,
        "modulus": n,
        "diffset_size": len(diff),
        "image_K_A": k_a,
        "image_K_B": k_b,
        "epsilon": epsilon,
        "p": p,
        "length_cap": cap,
        "attempts": attempts,
        "shrink_steps": shrink_steps,
        "constants": cfg.to_json(),
        "seed": seed,
    }
    return DoublingProgressionReport(witness, boot, cert, stats)


@dataclass(frozen=True)
class FiniteFieldReport:
    witness: ProgressionWitness
    subspace: SubspaceWitness
    stats: dict
    periodicity: PeriodicityReport | None = None
    bootstrap: BootstrapReport | None = None

    def to_json(self) -> dict:
        out = {
            "witness": self.witness.to_json(),
            "subspace": self.subspace.to_json(),
            "stats": self.stats,
        }
        if self.periodicity is not None:
            out["periodicity"] = self.periodicity.to_json()
        if self.bootstrap is not None:
            out["bootstrap"] = self.bootstrap.to_json()
        return out


def _shrink_for_exactness(group: GroupSpec, radius: float) -> float:
    limit = 2.0 * math.sin(math.pi / group.modulus)
    return min(radius, 0.999 * limit)


def _subspace_witness_scan(
    group: GroupSpec,
    support: np.ndarray,
    subspace: SubspaceWitness,
    cap: int,
) -> tuple[int, tuple[tuple[int, ...], ...]]:
    """Find x with x + span(basis) inside the support.

    The full annihilator subspace is tried first (the scan verifies
    containment directly, so the counting cap is not a validity
    constraint); on failure the basis is cut to the e^p cap and then
    shrunk a dimension at a time.  Always terminates: dimension 0 is the
    single point {0}.
    """
    basis = list(subspace.basis)
    dim_cap = 0 if cap < group.modulus else int(math.floor(math.log(cap) / math.log(group.modulus)))
    tried_full = False
    while True:
        trial = SubspaceWitness(group, tuple(basis), len(basis), True, False)
        offsets = [int(i) for i in trial.span_indices()]
        x = _covering_translate(group, support, offsets)
        if x is not None:
            return x, tuple(basis)
        if not basis:
            raise HypothesisError("no covering translate found even for a single point")
        if not tried_full and len(basis) > dim_cap:
            basis = basis[:dim_cap]
            tried_full = True
        else:
            basis = basis[:-1]


def finite_field_translate(
    group: GroupSpec,
    a_support,
    b_support,
    variant: str = "green",
    seed: int = 0,
    cfg: ConstantsConfig = DEFAULT_CONSTANTS,
    subset=None,
    retries: int = DEFAULT_RETRIES,
) -> FiniteFieldReport:
    """Subspace translate inside A+B in F_p^n.

    ``green`` samples the spectrum of 1_A*1_B directly; ``improved`` and
    ``subset`` run the doubling-sensitive spectral bootstrap.  In every case
    the Bohr set is replaced by the exact annihilator subspace, the subspace
    is capped at e^p points, and a covering translate is found by scanning.
    ``subset`` additionally verifies a caller-supplied subset of the final
    subspace (default: the whole subspace).
    """
    if group.kind != "vector":
        raise HypothesisError("finite-field pipelines need a vector-space group")
    if variant not in ("green", "improved", "subset"):
        raise ValueError(f"unknown variant {variant!r}")
    a_idx = as_indices(group, a_support)
    b_idx = as_indices(group, b_support)
    if a_idx.size == 0 or b_idx.size == 0:
        raise ValueError("A and B must be nonempty")
    alpha = a_idx.size / group.order
    beta = b_idx.size / group.order
    ab = sumset_indices(group, a_idx, b_idx)
    support = np.zeros(group.order, dtype=bool)
    support[ab] = True

    periodicity = None
    bootstrap = None
    attempts = 0
    if variant == "green":
        epsilon = min(0.999, cfg.c_eps * math.sqrt(alpha * beta))
        p = max(2.0, cfg.c_p * math.sqrt(alpha * beta * math.log(group.order)))
        f = fourier.convolve(GroupFunction.indicator(group, a_idx), GroupFunction.indicator(group, b_idx))
        last = None
        for attempt in range(retries + 1):
            attempts += 1
            periodicity = almost_period_bohr(f, p, epsilon, derive_seed(seed, attempt), cfg)
            last = periodicity
            if periodicity.passed:
                break
        assert last is not None
        descriptor = replace(last.descriptor, delta=_shrink_for_exactness(group, last.descriptor.delta))
    else:
        k_b = ab.size / b_idx.size
        k_a = ab.size / a_idx.size
        epsilon = cfg.c_eps / math.sqrt(k_b)
        p = max(2.0, cfg.c_p * math.sqrt(math.log(group.order) / (k_b * math.log(2 * k_a) ** 3)))
        bootstrap = bootstrap_strong_lp(group, a_idx, b_idx, p, epsilon, "oracle", derive_seed(seed, 0), cfg)
        attempts = 1
        descriptor = replace(
            bootstrap.periodicity.descriptor,
            delta=_shrink_for_exactness(group, bootstrap.periodicity.descriptor.delta),
        )
    subspace = bohr_mod.find_subspace_in_bohr(descriptor)
    cap = group.order if p > 30 else max(1, math.floor(math.exp(p)))
    x, basis = _subspace_witness_scan(group, support, subspace, cap)

    ab_set = set(int(i) for i in ab)
    if variant == "subset":
        final = SubspaceWitness(group, basis, len(basis), True, False)
        span = [int(i) for i in final.span_indices()]
        if subset is None:
            offs = span
        else:
            offs = [int(i) for i in as_indices(group, subset)]
            span_set = set(span)
            if not all(o in span_set for o in offs):
                raise HypothesisError("supplied subset is not contained in the extracted subspace")
            x2 = _covering_translate(group, support, offs)
            if x2 is None:
                raise HypothesisError("no covering translate for the supplied subset")
            x = x2
        verified = all(_add_index(group, x, o) in ab_set for o in offs)
        witness = ProgressionWitness(
            group.literal,
            group.coords_of(x),
            len(offs),
            offsets=tuple(group.coords_of(o) for o in offs),
            verified=verified,
        )
        codim = group.dim - len(basis)
        size_bound = math.exp(cfg.c_eps * alpha * math.log(2.0 / beta) ** -3 * codim)
    else:
        final = SubspaceWitness(group, basis, len(basis), True, False)
        span = [int(i) for i in final.span_indices()]
        verified = all(_add_index(group, x, o) in ab_set for o in span)
        witness = ProgressionWitness(
            group.literal,
            group.coords_of(x),
            len(span),
            basis=basis,
            verified=verified,
        )
        size_bound = None
    stats = {
        "variant": variant,
        "alpha": alpha,
        "beta": beta,
        "epsilon": epsilon,
        "p": p,
        "dimension": len(basis),
        "attempts": attempts,
        "subset_size_bound": size_bound,
        "constants": cfg.to_json(),
        "seed": seed,
    }
    return FiniteFieldReport(witness, subspace, stats, periodicity, bootstrap)


def _add_index(group: GroupSpec, i: int, j: int) -> int:
    return group.index_of(group.add(group.coords_of(i), group.coords_of(j)))


@dataclass(frozen=True)
class BogolyubovReport:
    descriptor: BohrDescriptor
    bootstrap: BootstrapReport
    confirmed: bool
    members: int
    deduction_max: float
    stats: dict

    def to_json(self) -> dict:
        return {
            "descriptor": self.descriptor.to_json(),
            "bootstrap": self.bootstrap.to_json(),
            "confirmed": self.confirmed,
            "members": self.members,
            "deduction_max": self.deduction_max,
            "stats": self.stats,
        }


def bogolyubov_bohr(
    group: GroupSpec,
    a_support,
    seed: int = 0,
    cfg: ConstantsConfig = DEFAULT_CONSTANTS,
) -> BogolyubovReport:
    """Bohr set inside 2A-2A, via the bootstrap with B = A-A, eps = 1/2,
    p = max(2, c_p log 2K).  Every member t is checked directly against the
    deduction inequality |mu_{-A}*mu_A*1_{A-A}(t) - 1| < 1 and confirmed in
    2A-2A by exact membership."""
    a_idx = as_indices(group, a_support)
    if a_idx.size == 0:
        raise ValueError("A must be nonempty")
    neg_a = negate_indices(group, a_idx)
    a_minus_a = sumset_indices(group, a_idx, neg_a)
    two_a = sumset_indices(group, a_idx, a_idx)
    k = two_a.size / a_idx.size
    p = max(2.0, cfg.c_p * math.log(2.0 * k))
    boot = bootstrap_strong_lp(group, a_idx, a_minus_a, p, 0.5, "oracle", seed, cfg)
    members = bohr_mod.materialize(boot.periodicity.descriptor)
    two_a_two_a = sumset_indices(group, two_a, negate_indices(group, two_a))
    target = set(int(i) for i in two_a_two_a)
    conv = fourier.convolve(
        fourier.convolve(GroupFunction.measure(group, neg_a), GroupFunction.measure(group, a_idx)),
        GroupFunction.indicator(group, a_minus_a),
    )
    worst = 0.0
    confirmed = True
    for t in members:
        dev = abs(conv.values[int(t)] - 1.0)
        worst = max(worst, float(dev))
        if dev >= 1.0 or int(t) not in target:
            confirmed = False
    alpha = a_idx.size / group.order
    stats = {
        "alpha": alpha,
        "K": k,
        "p": p,
        "radius": boot.periodicity.descriptor.delta,
        "rank": boot.periodicity.descriptor.rank,
        "implied_radius_constant": boot.periodicity.descriptor.delta / math.sqrt(alpha),
        "rank_shape": math.log(1.0 / alpha) ** 4 if alpha < 1 else None,
        "seed": seed,
        "constants": cfg.to_json(),
    }
    return BogolyubovReport(
        boot.periodicity.descriptor, boot, confirmed, int(members.size), worst, stats
    )


@dataclass(frozen=True)
class ApRecord:
    base: int
    step: int
    length: int

    def to_json(self) -> dict:
        return {"base": self.base, "step": self.step, "length": self.length}


def longest_ap_oracle(values: Iterable[int], modulus: int | None = None, budget: int = 10**7) -> ApRecord:
    """Exhaustive longest arithmetic progression in a set.

    Integers: O(|S|^2) dynamic program over (endpoint, step).  In Z/N the
    progression {x + j*u mod N} is scanned over every step u.  Ties prefer
    the smallest step, then the smallest base.
    """
    if modulus is None:
        s = freiman.intset(values)
        if len(s) ** 2 > budget:
            raise ValueError(f"oracle budget exceeded: |S|^2 = {len(s) ** 2} > {budget}")
        if len(s) == 1:
            return ApRecord(s[0], 0, 1)
        best = (1, 0, s[0])  # (length, step, base) with max length, min step, min base
        table: list[dict[int, int]] = [dict() for _ in s]
        for j in range(len(s)):
            for i in range(j):
                step = s[j] - s[i]
                length = table[i].get(step, 1) + 1
                table[j][step] = length
                base = s[j] - (length - 1) * step
                cand = (length, step, base)
                if (-cand[0], cand[1], cand[2]) < (-best[0], best[1], best[2]):
                    best = cand
        return ApRecord(best[2], best[1], best[0])

    n = int(modulus)
    if n * n > budget:
        raise ValueError(f"oracle budget exceeded: N^2 = {n * n} > {budget}")
    member = np.zeros(n, dtype=bool)
    member[as_indices(cyclic(n), values)] = True
    count = int(member.sum())
    if count == 0:
        raise ValueError("empty set")
    if count == n:
        return ApRecord(0, 1, n)
    best = (1, 0, int(np.argmax(member)))
    positions = np.arange(n, dtype=np.int64)
    for u in range(1, n):
        cycle = (positions * u) % n
        seq = member[cycle]
        holes = np.nonzero(~seq)[0]
        gaps = np.diff(np.concatenate([holes, [holes[0] + n]]))
        runs = gaps - 1
        top = int(runs.max())
        if top > best[0]:
            starts = holes[runs == top] + 1
            base = min(int((int(st) % n) * u % n) for st in starts)
            best = (top, u, base)
    return ApRecord(best[2], best[1], best[0])


def _bound_formulas(alpha, beta, log_n, k_a, k_b, c, exp, log, sqrt):
    out = {}
    out["green"] = exp(c * sqrt(alpha * beta * log_n) - log(log_n))
    out["improved"] = exp(c * sqrt(alpha * log_n / log(2.0 / beta) ** 3) - log(log_n / beta))
    if k_a is not None and k_b is not None:
        # |A| = alpha N and |A+B| = K_A |A|, so both logs shift log N additively.
        log_sumset = log(k_a * alpha) + log_n
        log_a2 = log(2.0 * alpha) + log_n
        out["small_doubling"] = exp(
            c * sqrt(log_sumset / (k_b * log(2.0 * k_a) ** 3)) - log(2.0 * k_a * log_a2)
        )
        eps = 0.5
        p = max(2.0, c * log(2.0 * k_a))
        delta = c * eps * sqrt(alpha / beta) * k_b ** (-1.0 / p)
        rank = c * p * log(1.0 / delta) ** 2 / eps**2 * log(2.0 * k_a) + c * log(1.0 / alpha)
        out["bootstrap_bohr"] = {"delta": delta, "rank": rank, "radius": delta / rank}
    return out


def bound_table(
    alpha: float,
    beta: float,
    n: float | None = None,
    k_a: float | None = None,
    k_b: float | None = None,
    c: float = 1.0,
    evaluator: str = "float",
    log_n: float | None = None,
) -> dict:
    """Displayed progression-length bounds (natural logs throughout).

    ``green``: exp(c sqrt(alpha beta log N) - log log N);
    ``improved``: exp(c sqrt(alpha log N / log^3(2/beta)) - log(log N / beta));
    ``small_doubling`` (needs K_A, K_B; |A| = alpha N, |A+B| = K_A |A|);
    ``bootstrap_bohr``: the rank/radius shape of the generic bootstrap.

    N can be given directly or as ``log_n`` (natural log), which keeps the
    improved-versus-green crossover regime reachable beyond float range.
    The ``mpmath`` evaluator recomputes everything at 50 digits as an
    independent cross-check.
    """
    if min(alpha, beta) <= 0 or alpha > 1 or beta > 1:
        raise ValueError("need 0 < alpha, beta <= 1")
    if (n is None) == (log_n is None):
        raise ValueError("give exactly one of n and log_n")
    if log_n is None:
        if n <= math.e:
            raise ValueError("need N > e")
        log_n = math.log(n)
    elif log_n <= 1:
        raise ValueError("need log N > 1")
    if evaluator == "float":
        return _bound_formulas(alpha, beta, log_n, k_a, k_b, c, math.exp, math.log, math.sqrt)
    if evaluator == "mpmath":
        import mpmath

        with mpmath.workdps(50):
            raw = _bound_formulas(
                mpmath.mpf(alpha),
                mpmath.mpf(beta),
                mpmath.mpf(log_n),
                None if k_a is None else mpmath.mpf(k_a),
                None if k_b is None else mpmath.mpf(k_b),
                mpmath.mpf(c),
                mpmath.exp,
                mpmath.log,
                mpmath.sqrt,
            )

            def conv(v):
                return {k2: float(v2) for k2, v2 in v.items()} if isinstance(v, dict) else float(v)

            return {k2: conv(v) for k2, v in raw.items()}
    raise ValueError(f"unknown evaluator {evaluator!r}")


def crossover_table(
    alphas: Sequence[float],
    betas: Sequence[float],
    n: float | None = None,
    c: float = 1.0,
    log_n: float | None = None,
) -> list[dict]:
    """Grid comparison of the two density bounds; flags where improved > green."""
    rows = []
    for alpha in alphas:
        for beta in betas:
            row = bound_table(alpha, beta, n, c=c, log_n=log_n)
            rows.append(
                {
                    "alpha": alpha,
                    "beta": beta,
                    "green": row["green"],
                    "improved": row["improved"],
                    "improved_exceeds": row["improved"] > row["green"],
                }
            )
    return rows
