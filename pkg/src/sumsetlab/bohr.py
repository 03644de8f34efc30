"""Bohr sets: materialization, size/progression guarantees, subspace
extraction in vector spaces, and Chang-style rank reduction of a large
spectrum via a greedy dissociated basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import fourier
from .errors import CapExceededError, HypothesisError
from .groups import (
    ENUMERATION_CAP,
    Character,
    Coords,
    GroupElement,
    GroupSpec,
    is_prime,
)
from .witness import ProgressionWitness

#: Exhaustive dissociativity checks enumerate 3^rank sign patterns.
DISSOCIATIVITY_RANK_CAP = 14


def _canonical_frequencies(group: GroupSpec, frequencies: Iterable) -> tuple[Coords, ...]:
    """Deduped non-principal frequencies in canonical order."""
    seen: dict[int, Coords] = {}
    for freq in frequencies:
        coords = freq.frequency if isinstance(freq, Character) else group.reduce(freq)
        idx = group.index_of(coords)
        if idx != 0:
            seen[idx] = group.reduce(coords)
    return tuple(seen[i] for i in sorted(seen))


@dataclass(frozen=True, eq=False)
class BohrDescriptor:
    """``{x : |gamma(x) - 1| <= delta for all gamma in frequencies}``.

    The principal character is stripped on construction (it never constrains
    membership and would corrupt rank-based radius splitting); ``rank`` is
    the number of remaining frequencies.
    """

    group: GroupSpec
    frequencies: tuple[Coords, ...]
    delta: float
    _members: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if not (0.0 <= self.delta <= 2.0):
            raise ValueError(f"delta must lie in [0, 2], got {self.delta}")
        object.__setattr__(self, "frequencies", _canonical_frequencies(self.group, self.frequencies))

    @property
    def rank(self) -> int:
        return len(self.frequencies)

    def characters(self) -> tuple[Character, ...]:
        return tuple(Character(self.group, f) for f in self.frequencies)

    def max_distance_table(self) -> np.ndarray:
        """``max_gamma |gamma(x) - 1|`` over all x; zeros when rank is 0."""
        out = np.zeros(self.group.order)
        for freq in self.frequencies:
            np.maximum(out, Character(self.group, freq).distance_table(), out=out)
        return out

    def contains(self, x: GroupElement) -> bool:
        return all(Character(self.group, f).distance(x) <= self.delta for f in self.frequencies)

    def to_json(self) -> dict:
        freqs = [list(f) if isinstance(f, tuple) else f for f in self.frequencies]
        return {"group": self.group.literal, "frequencies": freqs, "delta": float(self.delta)}


def materialize(descriptor: BohrDescriptor, cap: int | None = None) -> np.ndarray:
    """Exact member indices, by scanning every x; cached on the descriptor."""
    if descriptor._members is not None:
        return descriptor._members
    limit = ENUMERATION_CAP if cap is None else cap
    if descriptor.group.order > limit:
        raise CapExceededError(f"group order {descriptor.group.order} exceeds cap {limit}")
    members = np.nonzero(descriptor.max_distance_table() <= descriptor.delta)[0]
    members.flags.writeable = False
    object.__setattr__(descriptor, "_members", members)
    return members


@dataclass(frozen=True)
class SizeBoundCheck:
    actual: int
    bound: float
    passed: bool

    def to_json(self) -> dict:
        return {"actual": self.actual, "bound": self.bound, "passed": self.passed}


def size_bound_check(descriptor: BohrDescriptor) -> SizeBoundCheck:
    """Compare |T| against the classical lower bound (delta/2pi)^d |G|."""
    actual = int(materialize(descriptor).size)
    bound = (descriptor.delta / (2 * math.pi)) ** descriptor.rank * descriptor.group.order
    return SizeBoundCheck(actual, bound, actual >= bound)


def ap_length_guarantee(descriptor: BohrDescriptor) -> int:
    """``max(1, floor(delta * N^(1/d) / 2pi))`` for prime cyclic groups."""
    n = descriptor.group.order
    if descriptor.rank == 0:
        return n
    return max(1, math.floor(descriptor.delta * n ** (1.0 / descriptor.rank) / (2 * math.pi)))


def find_ap_in_bohr(descriptor: BohrDescriptor) -> ProgressionWitness:
    """Longest zero-centered progression {j*u : |j| <= L} inside the Bohr set.

    Scans every step u, takes L = floor(delta / max_gamma |gamma(u) - 1|)
    (membership then follows from the phase triangle inequality), and keeps
    the best u.  Requires a cyclic group of prime order.
    """
    group = descriptor.group
    if group.kind != "cyclic" or not is_prime(group.modulus):
        raise HypothesisError("progression extraction needs a cyclic group of prime order")
    n = group.modulus
    if descriptor.rank == 0:
        witness = ProgressionWitness(group.literal, 0, n, step=1, verified=True)
        return witness
    dist = descriptor.max_distance_table()
    half_max = (n - 1) // 2
    steps = np.arange(1, n, dtype=np.int64)
    lengths = np.minimum(np.floor(descriptor.delta / dist[1:]).astype(np.int64), half_max)
    best = int(np.argmax(lengths))
    u, half = int(steps[best]), int(lengths[best])
    base = (-half * u) % n
    witness = ProgressionWitness(group.literal, base, 2 * half + 1, step=u)
    members = set(int(m) for m in materialize(descriptor))
    ok = all((j * u) % n in members for j in range(-half, half + 1))
    return ProgressionWitness(group.literal, base, 2 * half + 1, step=u, verified=ok)


@dataclass(frozen=True)
class SubspaceWitness:
    """Basis of the annihilator subspace contained in a small-radius Bohr set."""

    group: GroupSpec
    basis: tuple[tuple[int, ...], ...]
    dimension: int
    verified: bool
    enumerated: bool  # True when verification enumerated the whole span

    def span_indices(self) -> np.ndarray:
        group = self.group
        pts = np.zeros((1, group.dim), dtype=np.int64)
        for b in self.basis:
            vec = np.asarray(b, dtype=np.int64)
            pts = np.concatenate([(pts + s * vec) % group.modulus for s in range(group.modulus)])
        powers = group.modulus ** np.arange(group.dim - 1, -1, -1, dtype=np.int64)
        return np.unique(pts @ powers)

    def to_json(self) -> dict:
        return {
            "group": self.group.literal,
            "basis": [list(b) for b in self.basis],
            "dimension": self.dimension,
            "verified": self.verified,
        }


def _rref_mod_p(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p; returns (rref, pivot columns)."""
    m = mat.copy() % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i, c] % p:
                pivot = i
                break
        if pivot is None:
            continue
        m[[r, pivot]] = m[[pivot, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m % p, pivots


def kernel_basis_mod_p(mat: np.ndarray, p: int, dim: int) -> list[tuple[int, ...]]:
    """Basis of {x : mat @ x = 0 mod p}; identity basis when mat has no rows."""
    if mat.size == 0:
        eye = np.eye(dim, dtype=np.int64)
        return [tuple(int(v) for v in row) for row in eye]
    rref, pivots = _rref_mod_p(np.asarray(mat, dtype=np.int64), p)
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for c in free:
        vec = np.zeros(dim, dtype=np.int64)
        vec[c] = 1
        for r, pc in enumerate(pivots):
            vec[pc] = (-int(rref[r, c])) % p
        basis.append(tuple(int(v) for v in vec))
    return basis


def find_subspace_in_bohr(descriptor: BohrDescriptor, enumerate_cap: int = 4096) -> SubspaceWitness:
    """Annihilator subspace of the frequencies, for radii forcing gamma(x) = 1.

    Requires ``delta < |e^(2 pi i / p) - 1|`` so that the Bohr condition is
    an exact annihilation condition.
    """
    group = descriptor.group
    if group.kind != "vector":
        raise HypothesisError("subspace extraction needs a vector-space group")
    p = group.modulus
    threshold = 2.0 * math.sin(math.pi / p)
    if descriptor.delta >= threshold:
        raise HypothesisError(
            f"radius {descriptor.delta} is too large for exactness; shrink below {threshold}"
        )
    rows = np.asarray([list(f) for f in descriptor.frequencies], dtype=np.int64)
    basis = kernel_basis_mod_p(rows, p, group.dim)
    witness = SubspaceWitness(group, tuple(basis), len(basis), False, False)
    # Exact check: all basis vectors annihilate all rows; by bilinearity the
    # whole span does.  Enumerate the span too when it is small enough.
    if basis and rows.size:
        exact_ok = not np.any((rows @ np.asarray(basis, dtype=np.int64).T) % p)
    else:
        exact_ok = True
    enumerated = False
    if p ** len(basis) <= enumerate_cap:
        span = witness.span_indices()
        members = set(int(m) for m in materialize(descriptor))
        exact_ok = exact_ok and all(int(s) in members for s in span)
        enumerated = True
    return SubspaceWitness(group, tuple(basis), len(basis), bool(exact_ok), enumerated)


def large_spectrum(f: fourier.GroupFunction, theta: float) -> tuple[Character, ...]:
    """Characters where ``|fhat| >= theta``, in canonical order."""
    if theta <= 0:
        raise ValueError(f"threshold must be positive, got {theta}")
    coeffs = fourier.transform(f).coeffs
    idx = np.nonzero(np.abs(coeffs) >= theta)[0]
    return tuple(Character(f.group, f.group.coords_of(int(i))) for i in idx)


class _SignedSpan:
    """All {-1,0,1}-combinations of an evolving frequency set, exactly."""

    def __init__(self, group: GroupSpec) -> None:
        self.group = group
        if group.kind == "cyclic":
            self._vals = np.zeros(1, dtype=np.int64)
        else:
            self._coords = np.zeros((1, group.dim), dtype=np.int64)
            self._keys = np.zeros(1, dtype=np.int64)

    def _key_of(self, coords: Coords) -> int:
        return self.group.index_of(coords)

    def contains(self, coords: Coords) -> bool:
        key = self._key_of(coords)
        if self.group.kind == "cyclic":
            pos = np.searchsorted(self._vals, key)
            return pos < self._vals.size and self._vals[pos] == key
        pos = np.searchsorted(self._keys, key)
        return pos < self._keys.size and self._keys[pos] == key

    def add(self, coords: Coords) -> None:
        g = self.group
        if g.kind == "cyclic":
            r = int(coords)
            merged = np.concatenate([self._vals, (self._vals + r) % g.modulus, (self._vals - r) % g.modulus])
            self._vals = np.unique(merged)
        else:
            vec = np.asarray(coords, dtype=np.int64)
            merged = np.concatenate(
                [self._coords, (self._coords + vec) % g.modulus, (self._coords - vec) % g.modulus]
            )
            powers = g.modulus ** np.arange(g.dim - 1, -1, -1, dtype=np.int64)
            keys = merged @ powers
            keys, first = np.unique(keys, return_index=True)
            self._coords = merged[first]
            self._keys = keys


def signed_combination_indices(group: GroupSpec, frequencies: Sequence[Coords]) -> np.ndarray:
    """Canonical indices of all 3^m signed combinations, aligned with the
    base-3 enumeration of sign vectors (index 0 is the all-zero combination).
    """
    if len(frequencies) > DISSOCIATIVITY_RANK_CAP:
        raise CapExceededError(
            f"dissociativity enumeration capped at rank {DISSOCIATIVITY_RANK_CAP}, got {len(frequencies)}"
        )
    if group.kind == "cyclic":
        vals = np.zeros(1, dtype=np.int64)
        for f in frequencies:
            r = int(f)
            vals = np.concatenate([vals, (vals + r) % group.modulus, (vals - r) % group.modulus])
        return vals
    coords = np.zeros((1, group.dim), dtype=np.int64)
    for f in frequencies:
        vec = np.asarray(f, dtype=np.int64)
        coords = np.concatenate([coords, (coords + vec) % group.modulus, (coords - vec) % group.modulus])
    powers = group.modulus ** np.arange(group.dim - 1, -1, -1, dtype=np.int64)
    return coords @ powers


def is_dissociated(group: GroupSpec, frequencies: Sequence[Coords]) -> bool:
    """Exhaustive check: only the all-zero sign vector sums to the identity."""
    vals = signed_combination_indices(group, frequencies)
    return int(np.count_nonzero(vals == 0)) == 1


@dataclass(frozen=True)
class ChangReduction:
    """Greedy dissociated basis of a large spectrum, with certificates."""

    group: GroupSpec
    threshold: float | None
    spectrum: tuple[Coords, ...]  # the input frequencies, canonical
    basis: tuple[Coords, ...]  # the dissociated subset, in acceptance order
    tau: float
    reduced: BohrDescriptor
    dissociated: bool
    spans_all: bool
    rank_bound: float  # reported, not asserted

    def to_json(self) -> dict:
        def enc(f):
            return list(f) if isinstance(f, tuple) else f

        return {
            "group": self.group.literal,
            "threshold": self.threshold,
            "spectrum": [enc(f) for f in self.spectrum],
            "basis": [enc(f) for f in self.basis],
            "tau": self.tau,
            "reduced": self.reduced.to_json(),
            "dissociated": self.dissociated,
            "spans_all": self.spans_all,
            "rank_bound": self.rank_bound,
        }


def chang_reduce(
    group: GroupSpec,
    spectrum: Iterable,
    delta: float,
    tau: float,
    weights: Sequence[float] | None = None,
    threshold: float | None = None,
    c_chang: float = 1.0,
    max_rank: int = DISSOCIATIVITY_RANK_CAP,
) -> ChangReduction:
    """Greedy dissociated basis Lambda of the spectrum, plus Bohr(Lambda, delta/|Lambda|).

    Candidates are visited in decreasing weight (ties by canonical order;
    canonical order when no weights are given); gamma joins Lambda iff
    Lambda + {gamma} stays dissociated, which is equivalent to gamma not
    already being a signed combination of Lambda.  Every rejected gamma is
    therefore a {-1,0,1}-combination of Lambda, which gives the containment
    Bohr(Lambda, delta/|Lambda|) <= Bohr(spectrum, delta) by the phase
    triangle inequality.  The rank bound c*log(1/tau) is reported only.
    """
    if not (0 < tau <= 1):
        raise ValueError(f"tau must lie in (0, 1], got {tau}")
    raw = list(spectrum)
    coords_list = []
    for item in raw:
        coords = item.frequency if isinstance(item, Character) else group.reduce(item)
        coords_list.append(coords)
    order_keys = []
    for pos, coords in enumerate(coords_list):
        idx = group.index_of(coords)
        w = float(weights[pos]) if weights is not None else 0.0
        order_keys.append((-w, idx, pos))
    seen: set[int] = set()
    candidates: list[Coords] = []
    for _, idx, pos in sorted(order_keys):
        if idx != 0 and idx not in seen:
            seen.add(idx)
            candidates.append(coords_list[pos])

    span = _SignedSpan(group)
    basis: list[Coords] = []
    for coords in candidates:
        if span.contains(coords):
            continue
        if len(basis) >= max_rank:
            raise CapExceededError(f"dissociated basis exceeded the rank cap {max_rank}")
        basis.append(coords)
        span.add(coords)

    canonical_spectrum = _canonical_frequencies(group, raw)
    dissociated = is_dissociated(group, basis)
    spans_all = all(span.contains(c) for c in canonical_spectrum)
    d = max(1, len(basis))
    reduced = BohrDescriptor(group, tuple(basis), delta / d if basis else delta)
    rank_bound = c_chang * math.log(1.0 / tau) if tau < 1 else 0.0
    return ChangReduction(
        group,
        threshold,
        canonical_spectrum,
        tuple(basis),
        float(tau),
        reduced,
        dissociated,
        spans_all,
        rank_bound,
    )
