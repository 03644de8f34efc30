"""Fourier analysis on finite abelian groups under averaged normalization.

Conventions: the transform is ``fhat(gamma) = E_x f(x) conj(gamma(x))``,
inversion is ``f(x) = sum_gamma fhat(gamma) gamma(x)``, and convolution is
``f*g(x) = E_y f(y) g(x-y)``, so that ``transform(f*g) = transform(f) *
transform(g)`` pointwise and Parseval reads ``E|f|^2 = sum |fhat|^2``.

Two evaluation paths are provided: a fast one (numpy FFT, which handles all
orders including primes via Bluestein) and a direct O(|G|^2) summation used
as an independent reference.  ``DEFAULT_METHOD`` selects the module-wide
default; every operation also accepts an explicit ``method``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .groups import GroupElement, GroupSpec, as_indices, _require_same_group

#: Module-wide default evaluation path: "fast" or "direct".
DEFAULT_METHOD = "fast"


def _resolve_method(method: str | None) -> str:
    m = DEFAULT_METHOD if method in (None, "auto") else method
    if m not in ("fast", "direct"):
        raise ValueError(f"unknown method {method!r}; expected 'fast', 'direct' or 'auto'")
    return m


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """A complex-valued function on a group, stored densely in canonical order."""

    group: GroupSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values)
        if vals.shape != (self.group.order,):
            raise ValueError(f"expected {self.group.order} values, got shape {vals.shape}")
        object.__setattr__(self, "values", _freeze(vals))

    @classmethod
    def from_values(cls, group: GroupSpec, values: Iterable[complex]) -> "GroupFunction":
        return cls(group, np.asarray(list(values) if not isinstance(values, np.ndarray) else values))

    @classmethod
    def indicator(cls, group: GroupSpec, support: Iterable) -> "GroupFunction":
        vals = np.zeros(group.order, dtype=np.complex128)
        vals[as_indices(group, support)] = 1.0
        return cls(group, vals)

    @classmethod
    def measure(cls, group: GroupSpec, support: Iterable) -> "GroupFunction":
        """Normalized measure mu_A = 1_A / mu_G(A); has mean exactly 1."""
        idx = as_indices(group, support)
        if idx.size == 0:
            raise ValueError("cannot normalize the empty set")
        vals = np.zeros(group.order, dtype=np.complex128)
        vals[idx] = group.order / idx.size
        return cls(group, vals)

    @classmethod
    def constant(cls, group: GroupSpec, c: complex = 1.0) -> "GroupFunction":
        return cls(group, np.full(group.order, c, dtype=np.complex128))

    @property
    def support(self) -> np.ndarray:
        return np.nonzero(self.values)[0]

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def mean(self) -> complex:
        return complex(np.mean(self.values))

    def lp_norm(self, p: float) -> float:
        """Averaged L^p norm ``(E_x |f(x)|^p)^(1/p)``; p = inf gives the sup."""
        if math.isinf(p):
            return float(np.max(np.abs(self.values))) if self.values.size else 0.0
        if p < 1:
            raise ValueError(f"p must be >= 1, got {p}")
        return float(np.mean(np.abs(self.values) ** p) ** (1.0 / p))

    def translate(self, t) -> "GroupFunction":
        """The function x -> f(x + t)."""
        coords = t.coords if isinstance(t, GroupElement) else t
        if isinstance(t, GroupElement):
            _require_same_group(self.group, t.group)
        return GroupFunction(self.group, self.group.translate_values(self.values, coords))

    def __add__(self, other: "GroupFunction") -> "GroupFunction":
        _require_same_group(self.group, other.group)
        return GroupFunction(self.group, self.values + other.values)

    def __sub__(self, other: "GroupFunction") -> "GroupFunction":
        _require_same_group(self.group, other.group)
        return GroupFunction(self.group, self.values - other.values)

    def __mul__(self, scalar: complex) -> "GroupFunction":
        return GroupFunction(self.group, self.values * scalar)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {
            "group": self.group.literal,
            "values": [[float(v.real), float(v.imag)] for v in self.values],
        }


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients indexed by canonical character order."""

    group: GroupSpec
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs)
        if c.shape != (self.group.order,):
            raise ValueError(f"expected {self.group.order} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coeffs", _freeze(c))

    def to_json(self) -> dict:
        return {
            "group": self.group.literal,
            "coeffs": [[float(v.real), float(v.imag)] for v in self.coeffs],
        }


def transform(f: GroupFunction, method: str | None = None) -> Spectrum:
    """Fourier transform ``fhat(gamma) = E_x f(x) conj(gamma(x))``."""
    group = f.group
    if _resolve_method(method) == "fast":
        if group.kind == "cyclic":
            coeffs = np.fft.fft(f.values) / group.order
        else:
            shape = (group.modulus,) * group.dim
            coeffs = np.fft.fftn(f.values.reshape(shape)).reshape(-1) / group.order
        return Spectrum(group, coeffs)
    coeffs = np.empty(group.order, dtype=np.complex128)
    for j in range(group.order):
        table = group.character(group.coords_of(j)).values_table()
        coeffs[j] = np.vdot(table, f.values) / group.order
    return Spectrum(group, coeffs)


def inverse(s: Spectrum, method: str | None = None) -> GroupFunction:
    """Fourier inversion ``f(x) = sum_gamma coeffs[gamma] gamma(x)``."""
    group = s.group
    if _resolve_method(method) == "fast":
        if group.kind == "cyclic":
            vals = np.fft.ifft(s.coeffs) * group.order
        else:
            shape = (group.modulus,) * group.dim
            vals = np.fft.ifftn(s.coeffs.reshape(shape)).reshape(-1) * group.order
        return GroupFunction(group, vals)
    vals = np.zeros(group.order, dtype=np.complex128)
    for j in range(group.order):
        if s.coeffs[j] != 0:
            vals += s.coeffs[j] * group.character(group.coords_of(j)).values_table()
    return GroupFunction(group, vals)


def convolve(f: GroupFunction, g: GroupFunction, method: str | None = None) -> GroupFunction:
    """Averaged convolution ``f*g(x) = E_y f(y) g(x - y)``."""
    _require_same_group(f.group, g.group)
    group = f.group
    if _resolve_method(method) == "fast":
        fs = transform(f, "fast").coeffs * transform(g, "fast").coeffs
        return inverse(Spectrum(group, fs), "fast")
    acc = np.zeros(group.order, dtype=np.complex128)
    for y in f.support:
        coords_y = group.coords_of(int(y))
        # h[x] = g(x - y) is the translate of g by -y.
        acc += f.values[y] * group.translate_values(g.values, group.neg(coords_y))
    return GroupFunction(group, acc / group.order)


def convolution_power(f: GroupFunction, k: int, method: str | None = None) -> GroupFunction:
    """k-fold convolution f*f*...*f via pointwise k-th powers in Fourier space."""
    if k < 1:
        raise ValueError(f"convolution power needs k >= 1, got {k}")
    s = transform(f, method)
    return inverse(Spectrum(f.group, s.coeffs**k), method)


def spectral_l1_norm(s: Spectrum) -> float:
    return float(np.sum(np.abs(s.coeffs)))


def lp_translate_distance(f: GroupFunction, t, p: float) -> float:
    """``(E_x |f(x+t) - f(x)|^p)^(1/p)``; p = inf gives the sup over x."""
    return (f.translate(t) - f).lp_norm(p)


def indicator_json(group: GroupSpec, support: Iterable) -> dict:
    idx = as_indices(group, support)
    if group.kind == "cyclic":
        elems = [int(i) for i in idx]
    else:
        elems = [list(group.coords_of(int(i))) for i in idx]
    return {"group": group.literal, "support": elems}
