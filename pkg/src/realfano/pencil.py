"""Rigid isotopy classes of real pencils of quadrics.

A pencil ``λ0·q0 + λ1·q1`` is pulled back along the double cover
``S¹ → P¹``, ``θ ↦ (cos θ, sin θ)``.  The positive inertia index of the
resulting circle of forms is piecewise constant and jumps by ±1 at the two
lifts of every real root of the discriminant ``det(Q0 + t·Q1)``.  The
class of the pencil is the circular tuple of lengths of maximal runs of
upward jumps, read anticlockwise, up to rotation and reversal.

Orientation: the half-circle with ``λ0 > 0`` is traversed with
``t = λ1/λ0`` increasing, then the half-circle with ``λ0 < 0`` the same way.
No angle is ever represented numerically: a discontinuity is a root
descriptor together with a hemisphere sign, and every arc is sampled at an
exact rational point (or at ``λ0 = 0``, where the form is ``±Q1``).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import linalg
from . import polynomial as P


class PencilError(Exception):
    """Base class for pencil classification failures."""


class NotGeneric(PencilError):
    """The discriminant has a multiple root or drops degree."""


class InvariantViolation(PencilError):
    """An internal consistency check on the inertia profile failed."""


class Unsupported(PencilError):
    pass


@dataclass(frozen=True)
class SymmetricForm:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n < 2:
            raise ValueError("a symmetric form needs at least two variables")
        if any(len(r) != n for r in rows):
            raise ValueError("form matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"form matrix is not symmetric at ({i}, {j})")

    @property
    def n(self) -> int:
        return len(self.entries)

    def matrix(self) -> linalg.Matrix:
        return [list(r) for r in self.entries]

    @classmethod
    def diagonal(cls, values: Sequence) -> "SymmetricForm":
        n = len(values)
        return cls(tuple(tuple(Fraction(values[i]) if i == j else Fraction(0) for j in range(n)) for i in range(n)))


@dataclass(frozen=True)
class QuadricPencil:
    q0: SymmetricForm
    q1: SymmetricForm

    def __post_init__(self):
        if self.q0.n != self.q1.n:
            raise ValueError("both forms of a pencil must have the same size")

    @property
    def n(self) -> int:
        return self.q0.n

    @classmethod
    def from_matrices(cls, m0, m1) -> "QuadricPencil":
        return cls(SymmetricForm(tuple(map(tuple, m0))), SymmetricForm(tuple(map(tuple, m1))))

    def member(self, l0, l1) -> linalg.Matrix:
        """The form ``l0*q0 + l1*q1``."""
        return linalg.lincomb(Fraction(l0), self.q0.matrix(), Fraction(l1), self.q1.matrix())

    def congruent(self, a: linalg.Matrix) -> "QuadricPencil":
        return QuadricPencil.from_matrices(
            linalg.congruent(self.q0.matrix(), a), linalg.congruent(self.q1.matrix(), a)
        )

    def reparametrize(self, a, b, c, d) -> "QuadricPencil":
        """The pencil with basis ``(a*q0 + b*q1, c*q0 + d*q1)``."""
        return QuadricPencil.from_matrices(self.member(a, b), self.member(c, d))


@dataclass(frozen=True)
class PencilRoot:
    """A root of the binary discriminant form.

    ``lo == hi`` is an exact rational root of ``det(Q0 + t·Q1)``; ``lo < hi``
    an isolating open interval; ``at_infinity`` marks ``λ0 = 0``.
    """

    lo: Fraction | None
    hi: Fraction | None
    multiplicity: int = 1
    at_infinity: bool = False

    @property
    def exact(self) -> bool:
        return not self.at_infinity and self.lo == self.hi

    def to_json(self) -> dict:
        if self.at_infinity:
            return {"at_infinity": True, "multiplicity": self.multiplicity}
        return {"lo": str(self.lo), "hi": str(self.hi), "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class Discriminant:
    """``det(Q0 + t·Q1)`` plus the multiplicity of the root at ``λ0 = 0``."""

    poly: P.Poly
    n: int

    @property
    def infinity_multiplicity(self) -> int:
        if not self.poly:
            return self.n
        return self.n - P.degree(self.poly)


@dataclass(frozen=True)
class Discontinuity:
    root: PencilRoot
    hemisphere: int  # +1 for λ0 > 0, -1 for λ0 < 0
    jump: int


@dataclass(frozen=True)
class InertiaProfile:
    """Values of I⁺ on the arcs of S¹ and the jumps between them.

    ``arcs[i]`` is the arc that ends at ``discontinuities[i]``; the arc
    after the last discontinuity is ``arcs[0]`` again.
    """

    n: int
    arcs: tuple[int, ...]
    discontinuities: tuple[Discontinuity, ...]

    @property
    def jumps(self) -> tuple[int, ...]:
        return tuple(d.jump for d in self.discontinuities)


@dataclass(frozen=True)
class IsotopyClass:
    parts: tuple[int, ...] = field(default=())

    @property
    def k(self) -> int:
        return sum(self.parts)

    @property
    def is_empty_class(self) -> bool:
        return not self.parts

    def __str__(self) -> str:
        return "(0)" if not self.parts else "(" + ",".join(map(str, self.parts)) + ")"


class Topology(str, Enum):
    EMPTY = "Empty"
    TWO_COMPONENTS = "TwoComponents"
    AT_MOST_ONE_COMPONENT = "AtMostOneComponent"


def pencil_determinant(p: QuadricPencil) -> Discriminant:
    """Exact expansion of ``det(Q0 + t·Q1)`` by interpolation at ``n+1`` nodes."""
    n = p.n
    xs = [Fraction(i) for i in range(n + 1)]
    ys = [linalg.det(p.member(1, x)) for x in xs]
    return Discriminant(P.interpolate(xs, ys), n)


def validate_generic(p: QuadricPencil) -> bool:
    d = pencil_determinant(p)
    return P.degree(d.poly) == p.n and P.is_squarefree(d.poly)


def discriminant_roots(p: QuadricPencil) -> list[PencilRoot]:
    """All real roots of the binary discriminant, with multiplicities."""
    d = pencil_determinant(p)
    roots: list[PencilRoot] = []
    if not d.poly:
        return [PencilRoot(None, None, p.n, at_infinity=True)]
    for factor, mult in P.squarefree_decomposition(d.poly):
        for lo, hi in P.isolate_real_roots(factor):
            roots.append(PencilRoot(lo, hi, mult))
    roots.sort(key=lambda r: (r.lo, r.hi))
    if d.infinity_multiplicity:
        roots.append(PencilRoot(None, None, d.infinity_multiplicity, at_infinity=True))
    return roots


def inertia(m) -> tuple[int, int, int]:
    """Exact ``(n_plus, n_zero, n_minus)`` of a symmetric form or matrix."""
    if isinstance(m, SymmetricForm):
        m = m.matrix()
    return linalg.inertia(linalg.as_matrix(m))


def _positive_index(p: QuadricPencil, l0, l1) -> int:
    plus, zero, _ = linalg.inertia(p.member(l0, l1))
    if zero:
        raise InvariantViolation(f"arc sample ({l0}, {l1}) hits a degenerate form")
    return plus


def _arc_samples(intervals: list[tuple[Fraction, Fraction]]) -> list[Fraction]:
    """Rational points strictly between consecutive isolated roots."""
    # gaps between isolating intervals are root-free; a shared endpoint is
    # itself a non-root, and the midpoint formula returns it unchanged
    return [(hi + lo) / 2 for (_, hi), (lo, _) in zip(intervals, intervals[1:])]


def inertia_profile(p: QuadricPencil) -> InertiaProfile:
    d = pencil_determinant(p)
    if P.degree(d.poly) != p.n:
        raise NotGeneric(f"discriminant has a root of multiplicity {d.infinity_multiplicity} at λ0 = 0")
    for factor, mult in P.squarefree_decomposition(d.poly):
        if mult > 1 and P.isolate_real_roots(factor):
            raise NotGeneric(f"discriminant has a real root of multiplicity {mult}")
    # multiple non-real roots do not affect the jumps along S¹
    intervals = P.isolate_real_roots(P.poly_squarefree_part(d.poly))
    m = len(intervals)
    n = p.n
    if m == 0:
        return InertiaProfile(n, (_positive_index(p, 0, 1),), ())

    samples = _arc_samples(intervals)
    # anticlockwise arc values; arc i ends at discontinuity i
    upper = [_positive_index(p, 1, s) for s in samples]
    lower = [_positive_index(p, -1, -s) for s in samples]
    through_top = _positive_index(p, 0, 1)  # θ = π/2, form Q1
    through_bottom = _positive_index(p, 0, -1)  # θ = -π/2, form -Q1
    arcs = [through_bottom] + upper + [through_top] + lower

    roots = [PencilRoot(lo, hi) for lo, hi in intervals]
    disc = []
    for i in range(2 * m):
        before = arcs[i]
        after = arcs[(i + 1) % (2 * m)]
        jump = after - before
        if jump not in (1, -1):
            raise InvariantViolation(f"inertia jumps by {jump} at a simple root")
        disc.append(Discontinuity(roots[i % m], 1 if i < m else -1, jump))
    prof = InertiaProfile(n, tuple(arcs), tuple(disc))
    _check_profile(prof)
    return prof


def _check_profile(prof: InertiaProfile) -> None:
    jumps = prof.jumps
    m = len(jumps) // 2
    for i in range(m):
        if jumps[i] != -jumps[i + m]:
            raise InvariantViolation("antipodal discontinuities must jump in opposite directions")
    if sum(jumps) != 0:
        raise InvariantViolation("jumps around the circle must cancel")
    if any(not 0 <= v <= prof.n for v in prof.arcs):
        raise InvariantViolation("inertia value out of range")


def canonical_necklace(parts: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least rotation of ``parts`` or of its reversal."""
    seq = tuple(int(x) for x in parts)
    if not seq:
        raise ValueError("necklace must be nonempty")
    if any(x <= 0 for x in seq):
        raise ValueError("necklace parts must be positive")
    rev = seq[::-1]
    return min(s[i:] + s[:i] for s in (seq, rev) for i in range(len(s)))


def positive_runs(jumps: Sequence[int]) -> list[int]:
    """Lengths of maximal circular runs of ``+1`` entries."""
    L = len(jumps)
    if L == 0:
        return []
    if all(j > 0 for j in jumps):
        return [L]
    start = next(i for i in range(L) if jumps[i] < 0)
    runs, current = [], 0
    for k in range(1, L + 1):
        j = jumps[(start + k) % L]
        if j > 0:
            current += 1
        elif current:
            runs.append(current)
            current = 0
    if current:
        runs.append(current)
    return runs


_PYTHAGOREAN = ((3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29), (12, 35, 37), (9, 40, 41))


def _off_infinity(p: QuadricPencil) -> QuadricPencil:
    """Rotate the pencil coordinates by a rational angle so that a simple
    discriminant root at ``λ0 = 0`` moves into the affine chart.

    A rotation of ``(λ0, λ1)`` is an orientation-preserving map of S¹, so
    it does not change the class.
    """
    d = pencil_determinant(p)
    if d.infinity_multiplicity != 1:
        return p
    for a, b, c in _PYTHAGOREAN:
        cos, sin = Fraction(a, c), Fraction(b, c)
        q = p.reparametrize(cos, sin, -sin, cos)
        if pencil_determinant(q).infinity_multiplicity == 0:
            return q
    raise NotGeneric("could not move the root at λ0 = 0 into the affine chart")


def classify(p: QuadricPencil) -> IsotopyClass:
    prof = inertia_profile(_off_infinity(p))
    runs = positive_runs(prof.jumps)
    cls = IsotopyClass(canonical_necklace(runs) if runs else ())
    if p.n == 6:
        if cls.k % 2:
            raise InvariantViolation(f"odd number {cls.k} of positive discontinuities")
        if cls.parts and len(cls.parts) % 2 == 0:
            raise InvariantViolation(f"even number of parts in {cls}")
    return cls


def interpret(c: IsotopyClass, n: int) -> Topology:
    """What the class says about the real locus of the threefold in P⁵."""
    if n != 6:
        raise Unsupported("topological interpretation is only available for n = 6")
    if c.is_empty_class:
        return Topology.EMPTY
    if c.parts == (1, 1, 4):
        return Topology.TWO_COMPONENTS
    return Topology.AT_MOST_ONE_COMPONENT


def _parse_rational(x) -> Fraction:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise ValueError(f"rational entries must be strings 'p/q' or integers, got {x!r}")


def pencil_from_json(data: dict) -> QuadricPencil:
    try:
        n = int(data["n"])
        m0 = [[_parse_rational(x) for x in row] for row in data["q0"]]
        m1 = [[_parse_rational(x) for x in row] for row in data["q1"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed pencil document: {exc}") from exc
    pencil = QuadricPencil.from_matrices(m0, m1)
    if pencil.n != n:
        raise ValueError(f"declared n = {n} but matrices are {pencil.n}x{pencil.n}")
    return pencil


def pencil_to_json(p: QuadricPencil) -> dict:
    return {
        "n": p.n,
        "q0": [[str(x) for x in row] for row in p.q0.entries],
        "q1": [[str(x) for x in row] for row in p.q1.entries],
    }


def load_pencil(path: str | Path) -> QuadricPencil:
    with open(path, encoding="utf-8") as fh:
        return pencil_from_json(json.load(fh))


def classification_report(p: QuadricPencil) -> dict:
    """JSON-ready summary: class, k, verdict (n = 6 only) and real roots."""
    cls = classify(p)
    report = {
        "class": list(cls.parts) if cls.parts else [0],
        "k": cls.k,
        "discriminant_roots": [r.to_json() for r in discriminant_roots(p)],
    }
    report["verdict"] = interpret(cls, p.n).value if p.n == 6 else None
    return report


def random_congruence(rng: random.Random, n: int, span: int = 3) -> linalg.Matrix:
    """An invertible rational matrix with entries ``p/q``, ``|p| <= span``, ``1 <= q <= 3``."""
    while True:
        a = [[Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
        if linalg.det(a) != 0:
            return a


def random_generic_pencil(rng: random.Random, n: int = 6, congruence: bool = True) -> QuadricPencil:
    """A diagonal pencil with distinct root ratios, optionally moved by a
    random rational congruence.  Complex-conjugate root pairs are mixed in
    with 2x2 blocks ``[[a, b], [b, -a]]`` pencils."""
    while True:
        q0 = [[Fraction(0)] * n for _ in range(n)]
        q1 = [[Fraction(0)] * n for _ in range(n)]
        i = 0
        while i < n:
            if i + 1 < n and rng.random() < 0.25:
                # det(B0 + t B1) = -((a + t c)^2 + (b + t e)^2) has no real roots
                a, b = rng.randint(-5, 5), rng.randint(1, 5)
                c, e = rng.randint(-5, 5), rng.randint(-5, 5)
                q0[i][i], q0[i][i + 1], q0[i + 1][i], q0[i + 1][i + 1] = a, b, b, -a
                q1[i][i], q1[i][i + 1], q1[i + 1][i], q1[i + 1][i + 1] = c, e, e, -c
                i += 2
            else:
                q0[i][i] = Fraction(rng.choice((-1, 1)) * rng.randint(1, 9))
                q1[i][i] = Fraction(rng.randint(-9, 9))
                i += 1
        p = QuadricPencil.from_matrices(q0, q1)
        if not validate_generic(p):
            continue
        return p.congruent(random_congruence(rng, n)) if congruence else p
