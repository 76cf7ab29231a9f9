"""Explicit contraction of the real solutions of the cyclic system

    2 a1 = √2 (a2² + b2²),   2 a2 = √2 (a3² + b3²),   2 a3 = √2 (a1² + b1²)

to the origin.  Points are ordered ``(a1, b1, a2, b2, a3, b3)``.

Along the path the a-coordinates shrink linearly, ``a_i(t) = (1-t) a_i``,
and each b-coordinate is re-solved from the equation it appears in:

    b2(t)² = (1-t) (√2 a1 - (1-t) a2²)

(cyclically for b3 from a2, a3 and b1 from a3, a1).  Substituting back
shows every equation holds identically in t.  At a solution the right
side equals ``(1-t) (b2² + t a2²) >= 0``, so ``P(0) = P`` and ``P(1) = 0``.
The sign of each input b-coordinate is kept along the path.
"""

from __future__ import annotations

import math
from typing import Sequence

from .interval import Interval

SQRT2 = math.sqrt(2.0)

_EQUATIONS = ((0, 2, 3), (2, 4, 5), (4, 0, 1))  # (i, j, j+1): 2 a_i = √2 (a_j² + b_j²)
# b_j is solved from the equation whose right side holds (a_j, b_j)
_B_FROM = {3: (0, 2), 5: (2, 4), 1: (4, 0)}  # b index -> (a_i, a_j)


class NegativeRadicand(ValueError):
    pass


class NotOnVariety(ValueError):
    pass


def _check_point(p: Sequence[float]) -> tuple[float, ...]:
    p = tuple(float(x) for x in p)
    if len(p) != 6:
        raise ValueError("a point has six coordinates (a1, b1, a2, b2, a3, b3)")
    if not all(math.isfinite(x) for x in p):
        raise ValueError("coordinates must be finite")
    return p


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return t


def residuals(p: Sequence[float]) -> tuple[float, float, float]:
    """Floating-point values of the three equations at ``p``."""
    p = _check_point(p)
    return tuple(2 * p[i] - SQRT2 * (p[j] ** 2 + p[k] ** 2) for i, j, k in _EQUATIONS)


def residual_enclosure(box: Sequence[Interval]) -> tuple[Interval, Interval, Interval]:
    """Enclosures of the three equations over a box (exact √2)."""
    if len(box) != 6:
        raise ValueError("a box has six coordinates")
    s = Interval.sqrt2()
    return tuple(Interval.point(2.0) * box[i] - s * (box[j] ** 2 + box[k] ** 2) for i, j, k in _EQUATIONS)


def retract_path(p: Sequence[float], t: float, tol: float = 1e-9) -> tuple[float, ...]:
    """The point ``P(t)`` of the contraction started at ``p``.

    ``tol`` bounds both the residual accepted at ``p`` and how far below
    zero a radicand may fall to rounding before it is treated as an error.
    """
    p = _check_point(p)
    t = _check_t(t)
    worst = max(abs(r) for r in residuals(p))
    if worst > tol * max(1.0, max(abs(x) for x in p)):
        raise NotOnVariety(f"point is off the variety (residual {worst:.3g})")
    s = 1.0 - t
    out = [0.0] * 6
    for i in (0, 2, 4):
        out[i] = s * p[i]
    for b, (ai, aj) in _B_FROM.items():
        rad = SQRT2 * p[ai] - s * p[aj] ** 2
        if rad < -tol:
            raise NegativeRadicand(f"radicand {rad:.3g} for coordinate {b} is negative")
        out[b] = math.copysign(math.sqrt(s) * math.sqrt(max(rad, 0.0)), p[b])
    if t == 1.0:
        out = [0.0] * 6
    return tuple(out)


def retract_path_enclosure(p: Sequence[float], t: float) -> tuple[Interval, ...]:
    """Interval enclosure of the exact ``P(t)`` for the float point ``p``.

    Radicands are enclosed with an exact √2; an enclosure that is entirely
    negative raises :class:`NegativeRadicand`, one straddling zero is
    clipped at zero.
    """
    p = _check_point(p)
    t = _check_t(t)
    one_minus_t = Interval.point(1.0) - Interval.point(t)
    if t == 1.0:
        one_minus_t = Interval(0.0, 0.0)
    s2 = Interval.sqrt2()
    out: list[Interval] = [Interval(0.0, 0.0)] * 6
    for i in (0, 2, 4):
        out[i] = one_minus_t * Interval.point(p[i])
    root_s = one_minus_t.sqrt()
    for b, (ai, aj) in _B_FROM.items():
        rad = s2 * Interval.point(p[ai]) - one_minus_t * Interval.point(p[aj]) ** 2
        if rad.hi < 0:
            raise NegativeRadicand(f"radicand enclosure {rad} for coordinate {b} is negative")
        mag = root_s * rad.sqrt()
        out[b] = mag if math.copysign(1.0, p[b]) > 0 else -mag
    return tuple(out)


def path_residual_enclosure(p: Sequence[float], t: float) -> tuple[Interval, Interval, Interval]:
    return residual_enclosure(retract_path_enclosure(p, t))


def variety_point(b: Sequence[float], iterations: int = 200) -> tuple[float, ...]:
    """Solve the system for ``(a1, a2, a3)`` given ``(b1, b2, b3)`` by
    iterating ``a_i <- (a_j² + b_j²)/√2`` from zero.

    The map is a contraction near the origin, so this converges for small
    b; a ``ValueError`` is raised when it does not.
    """
    b1, b2, b3 = (float(x) for x in b)
    a1 = a2 = a3 = 0.0
    for _ in range(iterations):
        n1 = (a2 * a2 + b2 * b2) / SQRT2
        n2 = (a3 * a3 + b3 * b3) / SQRT2
        n3 = (a1 * a1 + b1 * b1) / SQRT2
        if (n1, n2, n3) == (a1, a2, a3):
            break
        a1, a2, a3 = n1, n2, n3
        if max(a1, a2, a3) > 2.0:
            raise ValueError("fixed-point iteration diverged; choose smaller b")
    p = (a1, b1, a2, b2, a3, b3)
    if max(abs(r) for r in residuals(p)) > 1e-12:
        raise ValueError("fixed-point iteration did not converge; choose smaller b")
    return p
