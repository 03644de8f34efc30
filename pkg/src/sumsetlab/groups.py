"""Finite abelian groups at desk scale: cyclic Z/N and vector spaces F_p^n.

Elements and characters are exact integer data; only character *values* touch
floating point, and those come from exact integer phases so that threshold
checks like ``|gamma(x) - 1| <= delta`` are reliable to ~1e-15.

Canonical element order is ascending residue for cyclic groups and
lexicographic coordinates for vector spaces; characters are ordered the same
way by their frequencies, so the principal character always has index 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import gmpy2
import numpy as np

from .errors import CapExceededError, GroupMismatchError

#: Cap on materialized group/dual size.  Configurable module-wide.
ENUMERATION_CAP = 2**24

Coords = int | tuple[int, ...]


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(int(n)))


def next_prime(n: int) -> int:
    """Least prime strictly greater than ``n``."""
    return int(gmpy2.next_prime(int(n)))


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group: ``cyclic(N)`` or ``vector(p, n)``.

    ``modulus`` is N for cyclic groups and the prime p for vector spaces;
    ``dim`` is 1 for cyclic groups and n for vector spaces.
    """

    kind: str
    modulus: int
    dim: int = 1

    def __post_init__(self) -> None:
        if self.kind == "cyclic":
            if self.modulus < 1:
                raise ValueError(f"cyclic modulus must be >= 1, got {self.modulus}")
            if self.dim != 1:
                raise ValueError("cyclic groups have dim == 1")
        elif self.kind == "vector":
            if not is_prime(self.modulus):
                raise ValueError(f"vector-space base must be prime, got {self.modulus}")
            if self.dim < 1:
                raise ValueError(f"vector dimension must be >= 1, got {self.dim}")
            if self.modulus**self.dim > ENUMERATION_CAP:
                raise CapExceededError(
                    f"vector group of order {self.modulus}**{self.dim} exceeds cap {ENUMERATION_CAP}"
                )
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @property
    def order(self) -> int:
        if self.kind == "cyclic":
            return self.modulus
        return self.modulus**self.dim

    @property
    def literal(self) -> str:
        """CLI/JSON literal, e.g. ``zN:97`` or ``vec:2^8``."""
        if self.kind == "cyclic":
            return f"zN:{self.modulus}"
        return f"vec:{self.modulus}^{self.dim}"

    # -- coordinate plumbing ------------------------------------------------

    def reduce(self, coords: Coords) -> Coords:
        if self.kind == "cyclic":
            return int(coords) % self.modulus
        vec = tuple(int(c) % self.modulus for c in coords)  # type: ignore[union-attr]
        if len(vec) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(vec)}")
        return vec

    def index_of(self, coords: Coords) -> int:
        coords = self.reduce(coords)
        if self.kind == "cyclic":
            return coords  # type: ignore[return-value]
        idx = 0
        for c in coords:  # type: ignore[union-attr]
            idx = idx * self.modulus + c
        return idx

    def coords_of(self, index: int) -> Coords:
        index = int(index) % self.order
        if self.kind == "cyclic":
            return index
        out = []
        for _ in range(self.dim):
            index, r = divmod(index, self.modulus)
            out.append(r)
        return tuple(reversed(out))

    def add(self, a: Coords, b: Coords) -> Coords:
        if self.kind == "cyclic":
            return (int(a) + int(b)) % self.modulus
        return tuple((x + y) % self.modulus for x, y in zip(self.reduce(a), self.reduce(b)))  # type: ignore[arg-type]

    def neg(self, a: Coords) -> Coords:
        if self.kind == "cyclic":
            return (-int(a)) % self.modulus
        return tuple((-x) % self.modulus for x in self.reduce(a))  # type: ignore[union-attr]

    def zero(self) -> "GroupElement":
        return GroupElement(self, 0 if self.kind == "cyclic" else (0,) * self.dim)

    def element(self, coords: Coords) -> "GroupElement":
        return GroupElement(self, coords)

    def character(self, frequency: Coords) -> "Character":
        return Character(self, frequency)

    # -- vectorized tables --------------------------------------------------

    def coords_matrix(self) -> np.ndarray:
        """All element coordinates in canonical order; shape (order, dim)."""
        return _coords_matrix(self)

    def pairing_table(self, frequency: Coords) -> np.ndarray:
        """Integer phases ``<frequency, x> mod M`` over all x in canonical order.

        M is N for cyclic groups and p for vector spaces; the character value
        at x is exp(2*pi*i*phase/M).
        """
        frequency = self.reduce(frequency)
        if self.kind == "cyclic":
            return (int(frequency) * np.arange(self.order, dtype=np.int64)) % self.modulus
        r = np.asarray(frequency, dtype=np.int64)
        return (self.coords_matrix() @ r) % self.modulus

    def translate_values(self, values: np.ndarray, t: Coords) -> np.ndarray:
        """Array g with g[x] = values[x + t] (canonical indexing)."""
        t = self.reduce(t)
        if self.kind == "cyclic":
            return np.roll(values, -int(t))
        arr = values.reshape((self.modulus,) * self.dim)
        shift = tuple(-int(c) for c in t)  # type: ignore[union-attr]
        return np.roll(arr, shift, axis=tuple(range(self.dim))).reshape(-1)

    def negation_permutation(self) -> np.ndarray:
        """Permutation perm with perm[x] = index(-x)."""
        return _negation_permutation(self)


@lru_cache(maxsize=64)
def _coords_matrix(group: GroupSpec) -> np.ndarray:
    if group.kind == "cyclic":
        return np.arange(group.order, dtype=np.int64).reshape(-1, 1)
    grids = np.unravel_index(np.arange(group.order), (group.modulus,) * group.dim)
    mat = np.stack(grids, axis=1).astype(np.int64)
    mat.flags.writeable = False
    return mat


@lru_cache(maxsize=64)
def _negation_permutation(group: GroupSpec) -> np.ndarray:
    if group.kind == "cyclic":
        perm = (-np.arange(group.order, dtype=np.int64)) % group.modulus
    else:
        neg = (-group.coords_matrix()) % group.modulus
        powers = group.modulus ** np.arange(group.dim - 1, -1, -1, dtype=np.int64)
        perm = neg @ powers
    perm.flags.writeable = False
    return perm


@dataclass(frozen=True)
class GroupElement:
    """A group member with canonical coordinates."""

    group: GroupSpec
    coords: Coords

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", self.group.reduce(self.coords))

    @property
    def index(self) -> int:
        return self.group.index_of(self.coords)

    def __add__(self, other: "GroupElement") -> "GroupElement":
        _require_same_group(self.group, other.group)
        return GroupElement(self.group, self.group.add(self.coords, other.coords))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, self.group.neg(self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def is_zero(self) -> bool:
        return self.index == 0


@dataclass(frozen=True)
class Character:
    """A character of the group, indexed by its frequency.

    For cyclic groups ``value(x) = exp(2*pi*i*r*x/N)``; for vector spaces
    ``value(x) = exp(2*pi*i*<r, x>/p)``.
    """

    group: GroupSpec
    frequency: Coords

    def __post_init__(self) -> None:
        object.__setattr__(self, "frequency", self.group.reduce(self.frequency))

    @property
    def index(self) -> int:
        return self.group.index_of(self.frequency)

    @property
    def is_principal(self) -> bool:
        return self.index == 0

    def _phase_of(self, x: GroupElement) -> int:
        _require_same_group(self.group, x.group)
        if self.group.kind == "cyclic":
            return (int(self.frequency) * int(x.coords)) % self.group.modulus
        return sum(r * c for r, c in zip(self.frequency, x.coords)) % self.group.modulus  # type: ignore[arg-type]

    def value(self, x: GroupElement) -> complex:
        m = self._phase_of(x)
        return complex(np.exp(2j * np.pi * m / self.group.modulus))

    def distance(self, x: GroupElement) -> float:
        """``|value(x) - 1|``, computed as 2|sin(pi*phase)| from the exact phase."""
        m = self._phase_of(x)
        return float(2.0 * abs(np.sin(np.pi * m / self.group.modulus)))

    def values_table(self) -> np.ndarray:
        phases = self.group.pairing_table(self.frequency)
        return np.exp(2j * np.pi * phases / self.group.modulus)

    def distance_table(self) -> np.ndarray:
        phases = self.group.pairing_table(self.frequency)
        return 2.0 * np.abs(np.sin(np.pi * phases / self.group.modulus))


def _require_same_group(g1: GroupSpec, g2: GroupSpec) -> None:
    if g1 != g2:
        raise GroupMismatchError(f"group mismatch: {g1.literal} vs {g2.literal}")


def cyclic(n: int) -> GroupSpec:
    return GroupSpec("cyclic", int(n))


def vector(p: int, n: int) -> GroupSpec:
    return GroupSpec("vector", int(p), int(n))


def parse_group(text: str) -> GroupSpec:
    """Parse a group literal: ``zN:97`` -> cyclic(97), ``vec:2^8`` -> vector(2, 8)."""
    text = text.strip()
    if text.startswith("zN:"):
        return cyclic(int(text[3:]))
    if text.startswith("vec:"):
        base, _, dim = text[4:].partition("^")
        if not dim:
            raise ValueError(f"bad vector literal {text!r}; expected vec:p^n")
        return vector(int(base), int(dim))
    raise ValueError(f"unrecognized group literal {text!r}")


def _check_cap(size: int, cap: int | None) -> None:
    limit = ENUMERATION_CAP if cap is None else cap
    if size > limit:
        raise CapExceededError(f"group of order {size} exceeds enumeration cap {limit}")


def enumerate_group(group: GroupSpec, cap: int | None = None) -> list[GroupElement]:
    """All elements exactly once, in canonical order."""
    _check_cap(group.order, cap)
    return [GroupElement(group, group.coords_of(i)) for i in range(group.order)]


def enumerate_dual(group: GroupSpec, cap: int | None = None) -> list[Character]:
    """All characters exactly once; the principal character comes first."""
    _check_cap(group.order, cap)
    return [Character(group, group.coords_of(i)) for i in range(group.order)]


def character_distance(char: Character, x: GroupElement) -> float:
    """``|gamma(x) - 1|`` for a character gamma and group element x."""
    return char.distance(x)


def as_indices(group: GroupSpec, support: Iterable) -> np.ndarray:
    """Normalize a set of elements to sorted unique canonical indices.

    Accepts GroupElement instances, coordinate tuples, or plain integers
    (residues for cyclic groups, canonical indices for vector spaces).
    """
    idx = []
    for item in support:
        if isinstance(item, GroupElement):
            _require_same_group(group, item.group)
            idx.append(item.index)
        elif isinstance(item, (tuple, list, np.ndarray)):
            idx.append(group.index_of(tuple(int(c) for c in item)))
        else:
            i = int(item)
            if group.kind == "cyclic":
                idx.append(i % group.modulus)
            else:
                idx.append(i % group.order)
    if not idx:
        return np.empty(0, dtype=np.int64)
    return np.unique(np.asarray(idx, dtype=np.int64))


def sumset_indices(group: GroupSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact sumset {x + y} as sorted indices."""
    if group.kind == "cyclic":
        sums = (np.asarray(a).reshape(-1, 1) + np.asarray(b).reshape(1, -1)) % group.modulus
        return np.unique(sums.reshape(-1))
    mat = group.coords_matrix()
    ca = mat[np.asarray(a, dtype=np.int64)]
    cb = mat[np.asarray(b, dtype=np.int64)]
    sums = (ca[:, None, :] + cb[None, :, :]) % group.modulus
    powers = group.modulus ** np.arange(group.dim - 1, -1, -1, dtype=np.int64)
    return np.unique(sums.reshape(-1, group.dim) @ powers)


def negate_indices(group: GroupSpec, a: np.ndarray) -> np.ndarray:
    perm = group.negation_permutation()
    return np.unique(perm[np.asarray(a, dtype=np.int64)])
