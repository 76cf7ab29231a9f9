"""Outward-rounded interval arithmetic on binary floats.

Every operation rounds to nearest and then widens each endpoint by one ulp
with :func:`math.nextafter`, so the result always contains the exact real
result.  The scalar :class:`Interval` is used for single evaluations; the
``v*`` functions operate on pairs of numpy arrays ``(lo, hi)`` and drive
the box subdivision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

_INF = math.inf


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _magpow(x: float, k: int, up: bool) -> float:
    """``x**k`` for ``x >= 0``, rounded outward at every multiplication."""
    r = x
    for _ in range(k - 1):
        r = _up(r * x) if up else max(_down(r * x), 0.0)
    return r


def float_down(q: Fraction) -> float:
    """Largest float not above the rational ``q``."""
    f = float(q)
    return _down(f) if Fraction(f) > q else f


def float_up(q: Fraction) -> float:
    f = float(q)
    return _up(f) if Fraction(f) < q else f


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @classmethod
    def from_rational(cls, q) -> "Interval":
        q = Fraction(q)
        return cls(float_down(q), float_up(q))

    @classmethod
    def parse(cls, lo: str | float, hi: str | float | None = None) -> "Interval":
        """Enclose the rationals written as decimal or ``p/q`` strings."""
        lo_q = Fraction(str(lo).strip())
        hi_q = lo_q if hi is None else Fraction(str(hi).strip())
        if lo_q > hi_q:
            raise ValueError(f"interval bounds out of order: {lo} > {hi}")
        return cls(float_down(lo_q), float_up(hi_q))

    @classmethod
    def sqrt2(cls) -> "Interval":
        return cls.point(2.0).sqrt()

    def _coerce(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        if isinstance(other, Fraction):
            return Interval.from_rational(other)
        return Interval.point(float(other))

    def __add__(self, other) -> "Interval":
        o = self._coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        o = self._coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other) -> "Interval":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Interval":
        o = self._coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(_down(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Interval":
        if k < 0:
            raise ValueError("negative powers are not supported")
        if k == 0:
            return Interval(1.0, 1.0)
        if k == 1:
            return self
        alo, ahi = abs(self.lo), abs(self.hi)
        if k % 2:
            lo = -_magpow(alo, k, True) if self.lo < 0 else _magpow(alo, k, False)
            hi = -_magpow(ahi, k, False) if self.hi < 0 else _magpow(ahi, k, True)
            return Interval(lo, hi)
        small = 0.0 if self.lo < 0 < self.hi else min(alo, ahi)
        return Interval(_magpow(small, k, False), _magpow(max(alo, ahi), k, True))

    def sqrt(self) -> "Interval":
        if self.hi < 0:
            raise ValueError("square root of a negative interval")
        lo = max(self.lo, 0.0)
        return Interval(max(_down(math.sqrt(lo)), 0.0), _up(math.sqrt(self.hi)))

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        x = Fraction(x)
        return Fraction(self.lo) <= x <= Fraction(self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def excludes_zero(self) -> bool:
        return self.lo > 0 or self.hi < 0

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))


# -- vectorized kernels on (lo, hi) array pairs -------------------------------


def _vdown(x):
    return np.nextafter(x, -np.inf)


def _vup(x):
    return np.nextafter(x, np.inf)


def vadd(a, b):
    return _vdown(a[0] + b[0]), _vup(a[1] + b[1])


def vmul(a, b):
    p1, p2, p3, p4 = a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]
    lo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    hi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return _vdown(lo), _vup(hi)


def vscale(c: Interval, a):
    """Interval constant times interval array."""
    if c.lo == c.hi:
        x = c.lo
        if x >= 0:
            return _vdown(x * a[0]), _vup(x * a[1])
        return _vdown(x * a[1]), _vup(x * a[0])
    return vmul((np.full_like(a[0], c.lo), np.full_like(a[0], c.hi)), a)


def _vmagpow(x, k: int, up: bool):
    r = x
    for _ in range(k - 1):
        r = _vup(r * x) if up else np.maximum(_vdown(r * x), 0.0)
    return r


def vpow(a, k: int):
    if k == 1:
        return a
    lo, hi = a
    alo, ahi = np.abs(lo), np.abs(hi)
    if k % 2:
        new_lo = np.where(lo < 0, -_vmagpow(alo, k, True), _vmagpow(alo, k, False))
        new_hi = np.where(hi < 0, -_vmagpow(ahi, k, False), _vmagpow(ahi, k, True))
        return new_lo, new_hi
    straddle = (lo < 0) & (hi > 0)
    small = np.where(straddle, 0.0, np.minimum(alo, ahi))
    return _vmagpow(small, k, False), _vmagpow(np.maximum(alo, ahi), k, True)
