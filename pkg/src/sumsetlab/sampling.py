"""Random-sampling approximation of weighted sums of functions in L^p.

Given ``f = sum_j lambda_j g_j`` with ``||g_j||_p <= 1``, an average of
``k ~ c*p/eps^2`` parts drawn with probability ``|lambda_j| / ||lambda||_1``
approximates ``f / ||lambda||_1`` within ``eps`` in L^p with high probability.
Three front ends are provided: a generic decomposition sampler, the Fourier
specialization (parts are characters, weights are Fourier coefficients) and
the physical-space expansion of ``1_A * 1_B`` into translates ``1_{y+B}``.

All sampling is reproducible: draws go through one inverse-CDF helper fed by
a PCG64 generator keyed on the caller's seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import fourier
from .errors import GroupMismatchError
from .fourier import GroupFunction, Spectrum
from .groups import Character, GroupSpec, as_indices

#: Calibrated default for the constant in k = ceil(c * p / eps^2).
DEFAULT_C_SAMPLE = 4.0

#: Stable identifier of the random source, recorded in reports.
RNG_ID = "numpy-pcg64"


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def derive_seed(seed: int, *key: int) -> int:
    """Stable per-subtask seed derived from a base seed and an integer key path."""
    ss = np.random.SeedSequence((int(seed),) + tuple(int(k) for k in key))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_size(p: float, epsilon: float, c_sample: float = DEFAULT_C_SAMPLE) -> int:
    return int(math.ceil(c_sample * p / epsilon**2))


def _draw_indices(probs: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k iid indices with the given probabilities, via inverse CDF."""
    cum = np.cumsum(probs)
    cum[-1] = 1.0
    return np.searchsorted(cum, rng.random(k), side="right").astype(np.int64)


def _validate_params(p: float, epsilon: float) -> None:
    if p < 2:
        raise ValueError(f"sampling requires p >= 2, got {p}")
    if not (0 < epsilon < 1):
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")


def _directions(weights: np.ndarray) -> np.ndarray:
    """Unit directions lambda/|lambda| with the convention 0 -> 0."""
    out = np.zeros_like(weights)
    nz = weights != 0
    out[nz] = weights[nz] / np.abs(weights[nz])
    return out


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Weighted parts ``f = sum_j weights[j] * parts[j]`` on one group."""

    group: GroupSpec
    weights: np.ndarray
    parts_matrix: np.ndarray  # shape (num_parts, order)

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.complex128)
        m = np.asarray(self.parts_matrix, dtype=np.complex128)
        if w.ndim != 1 or m.shape != (w.size, self.group.order):
            raise ValueError("weights and parts have inconsistent shapes")
        if w.size == 0:
            raise ValueError("decomposition needs at least one part")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "parts_matrix", m)

    @classmethod
    def from_parts(cls, weights: Sequence[complex], parts: Sequence[GroupFunction]) -> "Decomposition":
        if not parts:
            raise ValueError("decomposition needs at least one part")
        group = parts[0].group
        for g in parts:
            if g.group != group:
                raise GroupMismatchError("decomposition parts live on different groups")
        return cls(group, np.asarray(weights, dtype=np.complex128), np.stack([g.values for g in parts]))

    @property
    def l1(self) -> float:
        return float(np.sum(np.abs(self.weights)))

    def combined(self) -> GroupFunction:
        return GroupFunction(self.group, self.weights @ self.parts_matrix)

    def check_part_norms(self, p: float, tol: float = 1e-9) -> None:
        norms = np.mean(np.abs(self.parts_matrix) ** p, axis=1) ** (1.0 / p)
        worst = float(np.max(norms))
        if worst > 1.0 + tol:
            raise ValueError(f"part L^{p} norms must be <= 1; found {worst}")


@dataclass(frozen=True)
class SampleReport:
    """Outcome of one sampling run; fully reproducible from (indices, decomposition)."""

    k: int
    indices: tuple[int, ...]
    approximant: GroupFunction
    lp_error: float
    epsilon: float
    p: float
    seed: int
    rng_id: str = RNG_ID
    details: dict = field(default_factory=dict)

    @property
    def succeeded(self) -> bool:
        return self.lp_error <= self.epsilon

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "sigma": [int(i) for i in self.indices],
            "epsilon": float(self.epsilon),
            "p": float(self.p),
            "lp_error": float(self.lp_error),
            "seed": int(self.seed),
            "rng_id": self.rng_id,
        }


def sample_approximant(
    decomposition: Decomposition,
    p: float,
    epsilon: float,
    seed: int,
    k: int | None = None,
    c_sample: float = DEFAULT_C_SAMPLE,
) -> SampleReport:
    """Draw k parts by weight and average them against ``f / ||lambda||_1``."""
    _validate_params(p, epsilon)
    decomposition.check_part_norms(p)
    l1 = decomposition.l1
    if l1 == 0:
        raise ValueError("all decomposition weights are zero")
    if k is None:
        k = sample_size(p, epsilon, c_sample)
    probs = np.abs(decomposition.weights) / l1
    sigma = _draw_indices(probs, k, make_rng(seed))
    dirs = _directions(decomposition.weights)
    coeff = np.bincount(sigma, minlength=decomposition.weights.size).astype(np.complex128)
    coeff *= dirs / k
    approx = GroupFunction(decomposition.group, coeff @ decomposition.parts_matrix)
    target = GroupFunction(decomposition.group, decomposition.combined().values / l1)
    err = (target - approx).lp_norm(p)
    return SampleReport(k, tuple(int(i) for i in sigma), approx, err, epsilon, p, seed)


@dataclass(frozen=True)
class FourierSample:
    """A sampling run against the Fourier expansion of f."""

    report: SampleReport
    characters: tuple[Character, ...]
    coefficients: tuple[complex, ...]  # unit coefficients, one per draw


def fourier_sample(
    f: GroupFunction,
    p: float,
    epsilon: float,
    seed: int,
    k: int | None = None,
    c_sample: float = DEFAULT_C_SAMPLE,
) -> FourierSample:
    """Sample characters with probability |fhat(gamma)| / ||fhat||_1.

    Parts are characters (unit L^p norm automatically); the approximant is
    compared against ``f / ||fhat||_1``.  The spectrum of the approximant is
    assembled at the sampled frequencies and inverted, so no dense parts
    matrix is ever built.
    """
    _validate_params(p, epsilon)
    if f.is_zero():
        raise ValueError("cannot Fourier-sample the zero function")
    group = f.group
    spec = fourier.transform(f)
    l1 = float(np.sum(np.abs(spec.coeffs)))
    if k is None:
        k = sample_size(p, epsilon, c_sample)
    probs = np.abs(spec.coeffs) / l1
    sigma = _draw_indices(probs, k, make_rng(seed))
    dirs = _directions(spec.coeffs)
    coeff = np.bincount(sigma, minlength=group.order).astype(np.complex128)
    coeff *= dirs / k
    approx = fourier.inverse(Spectrum(group, coeff))
    target = GroupFunction(group, f.values / l1)
    err = (target - approx).lp_norm(p)
    report = SampleReport(
        k,
        tuple(int(i) for i in sigma),
        approx,
        err,
        epsilon,
        p,
        seed,
        details={"spectral_l1": l1},
    )
    chars = tuple(Character(group, group.coords_of(int(i))) for i in sigma)
    coeffs = tuple(complex(dirs[int(i)]) for i in sigma)
    return FourierSample(report, chars, coeffs)


def physical_sample(
    group: GroupSpec,
    a_support,
    b_support,
    p: float,
    epsilon: float,
    seed: int,
    k: int | None = None,
    c_sample: float = DEFAULT_C_SAMPLE,
) -> SampleReport:
    """Sample the expansion ``1_A*1_B = sum_{y in A} (1/|G|) 1_{y+B}``.

    Parts are translates ``1_{y+B}`` pre-normalized by ``mu_G(B)^(1/p)`` so
    the unit-norm hypothesis holds exactly; draws are then uniform over A.
    The target ``f / ||lambda||_1`` equals ``mu_A * 1_B / mu_G(B)^(1/p)``.
    """
    _validate_params(p, epsilon)
    a_idx = as_indices(group, a_support)
    b_idx = as_indices(group, b_support)
    if a_idx.size == 0:
        raise ValueError("A must be nonempty")
    if b_idx.size == 0:
        raise ValueError("B must be nonempty")
    if k is None:
        k = sample_size(p, epsilon, c_sample)
    part_norm = (b_idx.size / group.order) ** (1.0 / p)  # ||1_{y+B}||_p
    b_vals = np.zeros(group.order, dtype=np.complex128)
    b_vals[b_idx] = 1.0 / part_norm
    probs = np.full(a_idx.size, 1.0 / a_idx.size)
    sigma = _draw_indices(probs, k, make_rng(seed))
    counts = np.bincount(sigma, minlength=a_idx.size)
    approx_vals = np.zeros(group.order, dtype=np.complex128)
    for j in np.nonzero(counts)[0]:
        y = group.coords_of(int(a_idx[j]))
        # part g_y(x) = 1_{y+B}(x) / mu(B)^{1/p}; 1_{y+B}(x) = 1_B(x - y).
        approx_vals += counts[j] * group.translate_values(b_vals, group.neg(y))
    approx = GroupFunction(group, approx_vals / k)
    f = fourier.convolve(GroupFunction.indicator(group, a_idx), GroupFunction.indicator(group, b_idx))
    l1 = (a_idx.size / group.order) * part_norm
    target = GroupFunction(group, f.values / l1)
    err = (target - approx).lp_norm(p)
    return SampleReport(
        k,
        tuple(int(i) for i in sigma),
        approx,
        err,
        epsilon,
        p,
        seed,
        details={"part_norm": part_norm, "weight_l1": l1},
    )


@dataclass(frozen=True)
class SamplingTask:
    """Serializable description of a sampling run, rerunnable with fresh seeds."""

    mode: str  # "fourier" | "physical" | "decomposition"
    p: float
    epsilon: float
    group: GroupSpec | None = None
    function: GroupFunction | None = None
    a_support: tuple | None = None
    b_support: tuple | None = None
    decomposition: Decomposition | None = None
    c_sample: float = DEFAULT_C_SAMPLE

    def run(self, seed: int) -> SampleReport:
        if self.mode == "fourier":
            assert self.function is not None
            return fourier_sample(self.function, self.p, self.epsilon, seed, c_sample=self.c_sample).report
        if self.mode == "physical":
            assert self.group is not None and self.a_support is not None and self.b_support is not None
            return physical_sample(
                self.group, self.a_support, self.b_support, self.p, self.epsilon, seed, c_sample=self.c_sample
            )
        if self.mode == "decomposition":
            assert self.decomposition is not None
            return sample_approximant(self.decomposition, self.p, self.epsilon, seed, c_sample=self.c_sample)
        raise ValueError(f"unknown sampling mode {self.mode!r}")


@dataclass(frozen=True)
class FailureRateReport:
    trials: int
    failures: int
    failure_rate: float
    k: int
    epsilon: float
    p: float
    seed: int
    rng_id: str = RNG_ID

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "failures": self.failures,
            "failure_rate": self.failure_rate,
            "k": self.k,
            "epsilon": float(self.epsilon),
            "p": float(self.p),
            "seed": int(self.seed),
            "rng_id": self.rng_id,
        }


def measure_failure_rate(task: SamplingTask, trials: int, seed: int) -> FailureRateReport:
    """Fraction of independent reruns whose L^p error exceeds epsilon."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    failures = 0
    k = 0
    for i in range(trials):
        report = task.run(derive_seed(seed, i))
        k = report.k
        if report.lp_error > task.epsilon:
            failures += 1
    return FailureRateReport(trials, failures, failures / trials, k, task.epsilon, task.p, seed)
