"""Integer sumset arithmetic and the two-set model embedding into Z/N.

The embedding picks a real slope xi (an exact rational here) so that the map
``phi(a) = floor(xi * a) mod N`` restricts to a Freiman k-isomorphism on the
largest fractional-part bands of A and B.  All band and floor computations
use exact rational arithmetic; half-open band boundaries never wobble.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceededError, HypothesisError
from .sampling import make_rng

#: Cap on |X|*|Y| in exact sumset computations.
SUMSET_CAP = 10**7

#: Cap on exhaustively enumerated verification tuples.
TUPLE_CAP = 10**7

#: Cap on the number of excluded intervals swept when picking xi.
INTERVAL_CAP = 10**6

IntSet = tuple[int, ...]


def intset(values: Iterable[int]) -> IntSet:
    """Sorted deduplicated nonempty tuple of integers."""
    out = tuple(sorted({int(v) for v in values}))
    if not out:
        raise ValueError("integer sets must be nonempty")
    return out


def sumset(x: IntSet, y: IntSet, cap: int = SUMSET_CAP) -> IntSet:
    if len(x) * len(y) > cap:
        raise CapExceededError(f"sumset product size {len(x) * len(y)} exceeds cap {cap}")
    sums = np.unique(np.add.outer(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64)))
    return tuple(int(v) for v in sums)


def negated(x: IntSet) -> IntSet:
    return tuple(-v for v in reversed(x))


def iterated_sumset(x: IntSet, k: int, cap: int = SUMSET_CAP) -> IntSet:
    out = x
    for _ in range(k - 1):
        out = sumset(out, x, cap)
    return out


def iterated_combination(a: IntSet, b: IntSet, k: int, cap: int = SUMSET_CAP) -> IntSet:
    """The set kA - kA + kB - kB, by repeated exact sumsets."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    ka = iterated_sumset(intset(a), k, cap)
    kb = iterated_sumset(intset(b), k, cap)
    out = sumset(ka, negated(ka), cap)
    out = sumset(out, kb, cap)
    return sumset(out, negated(kb), cap)


@dataclass(frozen=True)
class DoublingStats:
    k_a: Fraction
    k_b: Fraction
    sumset_size: int

    def to_json(self) -> dict:
        return {
            "K_A": {"num": self.k_a.numerator, "den": self.k_a.denominator},
            "K_B": {"num": self.k_b.numerator, "den": self.k_b.denominator},
            "K_A_float": float(self.k_a),
            "K_B_float": float(self.k_b),
            "sumset_size": self.sumset_size,
        }


def doubling_stats(a: IntSet, b: IntSet) -> DoublingStats:
    """Doubling constants K_A = |A+B|/|A| and K_B = |A+B|/|B|, exactly."""
    a, b = intset(a), intset(b)
    s = len(sumset(a, b))
    return DoublingStats(Fraction(s, len(a)), Fraction(s, len(b)), s)


@dataclass(frozen=True)
class PlunneckeReport:
    actual: int
    k: Fraction
    bound: Fraction
    slack: Fraction

    def to_json(self) -> dict:
        return {
            "actual": self.actual,
            "K": float(self.k),
            "bound": float(self.bound),
            "slack": float(self.slack),
        }


def plunnecke_quantities(a: IntSet, b: IntSet, cap: int = SUMSET_CAP) -> PlunneckeReport:
    """Exact |2A-2A+2B-2B| against the K^11 |B| comparison bound."""
    a, b = intset(a), intset(b)
    actual = len(iterated_combination(a, b, 2, cap))
    k = Fraction(len(sumset(a, b, cap)), min(len(a), len(b)))
    bound = k**11 * len(b)
    return PlunneckeReport(actual, k, bound, bound - actual)


@dataclass(frozen=True)
class XiChoice:
    xi: Fraction
    modulus: int
    diffset_size: int
    interval_count: int
    total_excluded: Fraction
    gap: tuple[Fraction, Fraction]

    def to_json(self) -> dict:
        return {
            "xi": {"num": self.xi.numerator, "den": self.xi.denominator},
            "modulus": self.modulus,
            "diffset_size": self.diffset_size,
            "interval_count": self.interval_count,
            "total_excluded": float(self.total_excluded),
            "gap": [float(self.gap[0]), float(self.gap[1])],
        }


def _merge_intervals(intervals: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    merged: list[tuple[Fraction, Fraction]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def choose_xi_for_diffset(diffset: IntSet, n: int, cap: int = INTERVAL_CAP) -> XiChoice:
    """Deterministic xi in [0, n] avoiding the excluded intervals (d*n - 1, d*n + 1)/t.

    For every positive t in the difference set and every d in 0..t the open
    interval ((d*n - 1)/t, (d*n + 1)/t) is excluded; their total length is at
    most |diffset| - 1 < n, so a gap remains.  xi is the midpoint of the
    largest gap (ties: leftmost).
    """
    if n < len(diffset):
        raise HypothesisError(f"modulus {n} is below the difference-set size {len(diffset)}")
    positives = [t for t in diffset if t > 0]
    count = sum(t + 1 for t in positives)
    if count > cap:
        raise CapExceededError(f"{count} excluded intervals exceed cap {cap}")
    intervals = []
    top = Fraction(n)
    for t in positives:
        for d in range(t + 1):
            lo = Fraction(d * n - 1, t)
            hi = Fraction(d * n + 1, t)
            intervals.append((max(lo, Fraction(0)), min(hi, top)))
    merged = _merge_intervals(intervals)
    total = sum((hi - lo for lo, hi in merged), Fraction(0))
    edges = [Fraction(0)] + [e for lo, hi in merged for e in (lo, hi)] + [top]
    best_gap = None
    for i in range(0, len(edges), 2):
        lo, hi = edges[i], edges[i + 1]
        if best_gap is None or hi - lo > best_gap[1] - best_gap[0]:
            best_gap = (lo, hi)
    assert best_gap is not None and best_gap[1] > best_gap[0], "no gap left for xi"
    xi = (best_gap[0] + best_gap[1]) / 2
    return XiChoice(xi, n, len(diffset), len(intervals), total, best_gap)


def choose_xi(a: IntSet, b: IntSet, k: int, n: int, cap: int = SUMSET_CAP) -> XiChoice:
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    return choose_xi_for_diffset(iterated_combination(a, b, k, cap), n)


@dataclass(frozen=True)
class IsomorphismCheck:
    ok: bool
    exhaustive: bool
    tuples_checked: int
    counterexample: tuple | None = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "exhaustive": self.exhaustive,
            "tuples_checked": self.tuples_checked,
            "counterexample": self.counterexample,
        }


def _side_sums(phi: Mapping[int, int], subsets: Sequence[IntSet], k: int, n: int):
    """Yield (integer sum, phi sum mod n, tuple) over all multiset sides."""
    pools = [list(itertools.combinations_with_replacement(s, k)) for s in subsets]
    for combo in itertools.product(*pools):
        ints = sum(sum(part) for part in combo)
        phis = sum(sum(phi[v] for v in part) for part in combo) % n
        yield ints, phis, combo


def verify_freiman_isomorphism(
    phi: Mapping[int, int],
    subsets: Sequence[IntSet],
    k: int,
    n: int,
    cap: int = TUPLE_CAP,
    seed: int = 0,
    samples: int = 20000,
) -> IsomorphismCheck:
    """Check: equal k-fold sums <=> congruent phi-sums mod n, both directions.

    Tuples are enumerated as multisets (sums are order-independent); a side
    draws k elements from each subset.  The check groups sides by integer
    sum and by residue: each sum class must map to a single residue, and
    distinct sum classes to distinct residues.  Above the cap a seeded
    random sample of sides is used and the result is flagged probabilistic.
    """
    sizes = [math.comb(len(s) + k - 1, k) for s in subsets]
    total = math.prod(sizes)
    exhaustive = total <= cap
    sum_to_phi: dict[int, tuple[int, tuple]] = {}
    phi_to_sum: dict[int, tuple[int, tuple]] = {}
    checked = 0

    if exhaustive:
        sides = _side_sums(phi, subsets, k, n)
    else:
        rng = make_rng(seed)

        def _sampled():
            for _ in range(samples):
                combo = tuple(
                    tuple(sorted(s[i] for i in rng.integers(0, len(s), size=k))) for s in subsets
                )
                ints = sum(sum(part) for part in combo)
                phis = sum(sum(phi[v] for v in part) for part in combo) % n
                yield ints, phis, combo

        sides = _sampled()

    for ints, phis, combo in sides:
        checked += 1
        prior = sum_to_phi.get(ints)
        if prior is None:
            sum_to_phi[ints] = (phis, combo)
        elif prior[0] != phis:
            return IsomorphismCheck(False, exhaustive, checked, (prior[1], combo))
        holder = phi_to_sum.get(phis)
        if holder is None:
            phi_to_sum[phis] = (ints, combo)
        elif holder[0] != ints:
            return IsomorphismCheck(False, exhaustive, checked, (holder[1], combo))
    return IsomorphismCheck(True, exhaustive, checked)


def verify_k_isomorphism(
    phi: Mapping[int, int],
    a_sub: IntSet,
    b_sub: IntSet,
    k: int,
    n: int,
    cap: int = TUPLE_CAP,
    seed: int = 0,
) -> IsomorphismCheck:
    return verify_freiman_isomorphism(phi, [intset(a_sub), intset(b_sub)], k, n, cap, seed)


@dataclass(frozen=True)
class EmbeddingCertificate:
    """Model-embedding data: xi, selected bands, the map phi, verification."""

    xi: Fraction
    modulus: int
    k: int
    band_indices: tuple[int, ...]
    subsets: tuple[IntSet, ...]
    phi: dict[int, int]
    band_width: Fraction
    verified: bool | None  # None when verification was skipped
    exhaustive: bool
    check: IsomorphismCheck | None

    @property
    def a_subset(self) -> IntSet:
        return self.subsets[0]

    @property
    def b_subset(self) -> IntSet:
        return self.subsets[1]

    def psi(self, a: int, b: int) -> int:
        return (self.phi[a] + self.phi[b]) % self.modulus

    def to_json(self) -> dict:
        return {
            "xi": {"num": self.xi.numerator, "den": self.xi.denominator},
            "modulus": self.modulus,
            "k": self.k,
            "band_indices": list(self.band_indices),
            "subsets": [list(s) for s in self.subsets],
            "phi": {str(a): v for a, v in sorted(self.phi.items())},
            "band_width": {"num": self.band_width.numerator, "den": self.band_width.denominator},
            "verified": self.verified,
            "exhaustive": self.exhaustive,
        }


def _bands(values: IntSet, xi: Fraction, num_bands: int) -> dict[int, list[int]]:
    """Partition by fractional part: band j (1-based) is [(j-1)/m, j/m)."""
    out: dict[int, list[int]] = {}
    for a in values:
        frac = xi * a - math.floor(xi * a)
        j = int(frac * num_bands) + 1
        out.setdefault(j, []).append(a)
    return out


def embed_many(
    sets: Sequence[IntSet],
    k: int,
    n: int,
    xi: Fraction | None = None,
    verify: bool = True,
    cap: int = TUPLE_CAP,
) -> EmbeddingCertificate:
    """Embed m sets, keeping the largest band of each under bands of width 1/(m*k)."""
    sets = [intset(s) for s in sets]
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    m = len(sets)
    if xi is None:
        diff = sets[0]
        diff = iterated_sumset(diff, k)
        diff = sumset(diff, negated(diff))
        for s in sets[1:]:
            ks = iterated_sumset(s, k)
            diff = sumset(diff, ks)
            diff = sumset(diff, negated(ks))
        xi = choose_xi_for_diffset(diff, n).xi
    num_bands = m * k
    band_indices = []
    subsets = []
    for s in sets:
        bands = _bands(s, xi, num_bands)
        best_j = min(bands, key=lambda j: (-len(bands[j]), j))
        band_indices.append(best_j)
        subsets.append(intset(bands[best_j]))
    phi = {a: math.floor(xi * a) % n for s in subsets for a in s}
    check = None
    verified: bool | None = None
    exhaustive = False
    if verify:
        check = verify_freiman_isomorphism(phi, subsets, k, n, cap)
        verified = check.ok
        exhaustive = check.exhaustive
    return EmbeddingCertificate(
        xi,
        n,
        k,
        tuple(band_indices),
        tuple(subsets),
        phi,
        Fraction(1, num_bands),
        verified,
        exhaustive,
        check,
    )


def embed_pair(
    a: IntSet,
    b: IntSet,
    k: int,
    n: int,
    xi: Fraction | None = None,
    verify: bool = True,
    cap: int = TUPLE_CAP,
) -> EmbeddingCertificate:
    """Two-set model embedding; the selected bands have sizes >= |A|/2k, |B|/2k."""
    return embed_many([intset(a), intset(b)], k, n, xi, verify, cap)
