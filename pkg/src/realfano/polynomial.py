"""Exact univariate polynomials over the rationals.

Polynomials are tuples of :class:`fractions.Fraction` coefficients, lowest
degree first, with no trailing zeros.  The zero polynomial is ``()``.
Real roots are isolated with Sturm sequences and bisection, so every
decision here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Poly = tuple[Fraction, ...]


def poly(coeffs: Iterable) -> Poly:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p: Poly) -> int:
    return len(p) - 1


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return poly((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def scale(p: Poly, c) -> Poly:
    return poly(c * a for a in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, scale(q, -1))


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return poly(out)


def derivative(p: Poly) -> Poly:
    return poly(i * p[i] for i in range(1, len(p)))


def evaluate(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for a in reversed(p):
        acc = acc * x + a
    return acc


def divmod_poly(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lead = q[-1]
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    while len(r) - 1 >= dq and r:
        shift = len(r) - 1 - dq
        c = r[-1] / lead
        quot[shift] = c
        for i, b in enumerate(q):
            r[i + shift] -= c * b
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return poly(quot), poly(r)


def monic(p: Poly) -> Poly:
    return scale(p, 1 / p[-1]) if p else p


def gcd(p: Poly, q: Poly) -> Poly:
    while q:
        p, q = q, divmod_poly(p, q)[1]
    return monic(p)


def is_squarefree(p: Poly) -> bool:
    return degree(gcd(p, derivative(p))) <= 0


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic squarefree factors with their multiplicities."""
    if degree(p) < 1:
        return []
    out = []
    a = gcd(p, derivative(p))
    b = divmod_poly(p, a)[0]
    c = divmod_poly(derivative(p), a)[0]
    d = sub(c, derivative(b))
    i = 1
    while degree(b) > 0:
        a = gcd(b, d)
        b = divmod_poly(b, a)[0]
        c = divmod_poly(d, a)[0]
        d = sub(c, derivative(b))
        if degree(a) > 0:
            out.append((monic(a), i))
        i += 1
    return out


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, derivative(p)]
    while seq[-1]:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(scale(r, -1))
    return seq


def sign_variations(values: Sequence) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_at(seq: list[Poly], x) -> int:
    return sign_variations([evaluate(s, x) for s in seq])


def cauchy_bound(p: Poly) -> Fraction:
    lead = abs(p[-1])
    return 1 + max((abs(a) / lead for a in p[:-1]), default=Fraction(0))


def isolate_real_roots(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the real roots of a squarefree polynomial.

    Each entry is either ``(r, r)`` for an exact rational root or an open
    interval ``(lo, hi)`` containing exactly one root, with ``p(lo)`` and
    ``p(hi)`` nonzero.  Entries are sorted and pairwise disjoint.
    """
    if degree(p) < 1:
        return []
    if not is_squarefree(p):
        raise ValueError("root isolation needs a squarefree polynomial")
    seq = sturm_sequence(p)
    bound = cauchy_bound(p)
    out: list[tuple[Fraction, Fraction]] = []
    # stack of open intervals (a, b) with p(a), p(b) != 0
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        count = _variations_at(seq, a) - _variations_at(seq, b)
        if count == 0:
            continue
        if count == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        if evaluate(p, m) != 0:
            stack.append((a, m))
            stack.append((m, b))
            continue
        out.append((m, m))
        delta = (b - a) / 4
        while True:
            lo, hi = m - delta, m + delta
            if (
                evaluate(p, lo) != 0
                and evaluate(p, hi) != 0
                and _variations_at(seq, lo) - _variations_at(seq, hi) == 1
            ):
                break
            delta /= 2
        stack.append((a, lo))
        stack.append((hi, b))
    out.sort()
    return out


def refine_root(p: Poly, interval: tuple[Fraction, Fraction], width) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of a squarefree ``p`` below ``width``."""
    lo, hi = interval
    if lo == hi:
        return interval
    slo = evaluate(p, lo) > 0
    while hi - lo > width:
        m = (lo + hi) / 2
        v = evaluate(p, m)
        if v == 0:
            return (m, m)
        if (v > 0) == slo:
            lo = m
        else:
            hi = m
    return (lo, hi)


def count_real_roots(p: Poly) -> int:
    return len(isolate_real_roots(poly_squarefree_part(p))) if degree(p) > 0 else 0


def poly_squarefree_part(p: Poly) -> Poly:
    return monic(divmod_poly(p, gcd(p, derivative(p)))[0])


def interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> Poly:
    """Exact Lagrange interpolation through distinct nodes."""
    result: Poly = ()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        basis: Poly = (Fraction(1),)
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = mul(basis, (-xj, Fraction(1)))
                denom *= xi - xj
        result = add(result, scale(basis, yi / denom))
    return result


def format_poly(p: Poly, var: str = "t") -> str:
    if not p:
        return "0"
    terms = []
    for i, a in enumerate(p):
        if a == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        coef = str(a)
        terms.append(coef if not mono else (mono if a == 1 else f"{coef}*{mono}"))
    return " + ".join(terms)
