"""Connected components of real solution sets by interval subdivision.

A system is a list of polynomials with interval coefficients, optionally
restricted to products of unit spheres (for projective models) whose
antipodal maps are identified.  Boxes are cells of a uniform dyadic grid
over the domain: refining one level bisects every coordinate once, always
along the widest normalized coordinate with ties going to the lowest
index, which amounts to cycling through the coordinates in order.  A box
is discarded when the outward-rounded enclosure of some polynomial (or
sphere constraint) excludes zero; whatever survives covers every real
solution in the domain.

Retained boxes are grouped into components by closed-box adjacency (grid
indices differing by at most one in every coordinate) plus antipodal
identification edges.  The count is an estimate of the number of
components of the solution set, not a certificate.
"""

from __future__ import annotations

import itertools
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from ._unionfind import roots, union_pairs, union_shifts
from .interval import Interval, vadd, vmul, vpow, vscale

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**7
_CHUNK = 1 << 16


class BudgetExceeded(RuntimeError):
    pass


class UnsupportedDimension(ValueError):
    pass


Term = tuple[Interval, tuple[int, ...]]


@dataclass(frozen=True)
class Polynomial:
    nvars: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        for _, exps in self.terms:
            if len(exps) != self.nvars:
                raise ValueError(f"exponent vector {exps} does not have length {self.nvars}")
            if any(e < 0 for e in exps):
                raise ValueError("exponents must be nonnegative")

    @classmethod
    def from_dict(cls, nvars: int, coeffs: dict) -> "Polynomial":
        """Build from ``{exponents: coefficient}``; coefficients may be
        rationals, floats taken as exact, or :class:`Interval`."""
        terms = []
        for exps, c in coeffs.items():
            if not isinstance(c, Interval):
                c = Interval.from_rational(Fraction(c))
            terms.append((c, tuple(exps)))
        return cls(nvars, tuple(terms))

    def evaluate_exact(self, point: Sequence) -> Fraction:
        """Exact value at a rational point, using coefficient midpoints
        only when a coefficient is a genuine interval (for testing)."""
        total = Fraction(0)
        for c, exps in self.terms:
            coef = Fraction(c.lo) if c.lo == c.hi else (Fraction(c.lo) + Fraction(c.hi)) / 2
            v = coef
            for x, e in zip(point, exps):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total


# -- Horner-style evaluation -------------------------------------------------
# A compiled node is either an Interval (constant) or (var, [(exp, child), ...])
# with exponents in decreasing order.


def _compile(terms: Sequence[Term], var: int, nvars: int):
    if not terms:
        return Interval(0.0, 0.0)
    if var == nvars or all(all(e == 0 for e in exps[var:]) for _, exps in terms):
        acc = Interval(0.0, 0.0)
        for c, _ in terms:
            acc = acc + c if (acc.lo, acc.hi) != (0.0, 0.0) else c
        return acc
    groups: dict[int, list[Term]] = {}
    for c, exps in terms:
        groups.setdefault(exps[var], []).append((c, exps))
    children = [(e, _compile(groups[e], var + 1, nvars)) for e in sorted(groups, reverse=True)]
    return (var, children)


def _add(a, b):
    if isinstance(a, Interval) and isinstance(b, Interval):
        return a + b
    if isinstance(a, Interval):
        a, b = b, a
    if isinstance(b, Interval):
        return vadd(a, (b.lo, b.hi))
    return vadd(a, b)


def _mul(a, b):
    if isinstance(a, Interval):
        a, b = b, a
    if isinstance(b, Interval):
        return vscale(b, a)
    return vmul(a, b)


def _eval_node(node, xs):
    if isinstance(node, Interval):
        return node
    var, children = node
    x = xs[var]
    acc = None
    prev = None
    for e, child in children:
        val = _eval_node(child, xs)
        if acc is None:
            acc = val
        else:
            acc = _add(_mul(acc, vpow(x, prev - e)), val)
        prev = e
    if prev:
        acc = _mul(acc, vpow(x, prev))
    return acc


class CompiledPolynomial:
    def __init__(self, p: Polynomial):
        self.poly = p
        self.tree = _compile(p.terms, 0, p.nvars)

    def enclose(self, lo: np.ndarray, hi: np.ndarray):
        """Enclosures over boxes given as ``(N, nvars)`` arrays of bounds."""
        xs = [(lo[:, k], hi[:, k]) for k in range(lo.shape[1])]
        val = _eval_node(self.tree, xs)
        if isinstance(val, Interval):
            n = lo.shape[0]
            return np.full(n, val.lo), np.full(n, val.hi)
        return val


def interval_eval(poly: Polynomial, box: Sequence[Interval]) -> Interval:
    if len(box) != poly.nvars:
        raise ValueError(f"box has {len(box)} coordinates, polynomial has {poly.nvars} variables")
    lo = np.array([[b.lo for b in box]], dtype=float)
    hi = np.array([[b.hi for b in box]], dtype=float)
    elo, ehi = CompiledPolynomial(poly).enclose(lo, hi)
    return Interval(float(elo[0]), float(ehi[0]))


# -- systems -----------------------------------------------------------------


@dataclass(frozen=True)
class PolynomialSystem:
    nvars: int
    polynomials: tuple[Polynomial, ...]
    domain: tuple[tuple[float, float], ...]
    spheres: tuple[tuple[int, ...], ...] = ()
    antipodal: tuple[tuple[int, ...], ...] = ()
    var_names: tuple[str, ...] = ()
    name: str = ""
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("nvars must be positive")
        if len(self.domain) != self.nvars:
            raise ValueError("domain needs one interval per variable")
        for lo, hi in self.domain:
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise ValueError(f"domain interval [{lo}, {hi}] must be bounded and nonempty")
        for p in self.polynomials:
            if p.nvars != self.nvars:
                raise ValueError("polynomial arity does not match the system")
        seen: set[int] = set()
        for g in self.spheres:
            if seen & set(g):
                raise ValueError("sphere groups must be disjoint")
            seen |= set(g)
            if any(not 0 <= k < self.nvars for k in g):
                raise ValueError(f"sphere group {g} references a missing variable")
        for g in self.antipodal:
            if any(not 0 <= k < self.nvars for k in g):
                raise ValueError(f"antipodal group {g} references a missing variable")
            for k in g:
                lo, hi = self.domain[k]
                if lo != -hi:
                    raise ValueError("antipodal coordinates need a domain symmetric about 0")

    def constraint_polynomials(self) -> list[Polynomial]:
        out = list(self.polynomials)
        for g in self.spheres:
            coeffs = {tuple(2 if i == k else 0 for i in range(self.nvars)): 1 for k in g}
            coeffs[(0,) * self.nvars] = -1
            out.append(Polynomial.from_dict(self.nvars, coeffs))
        return out


def _parse_bound(x, up: bool) -> float:
    iv = Interval.parse(x)
    return iv.hi if up else iv.lo


def system_from_json(data: dict) -> PolynomialSystem:
    try:
        nvars = int(data["nvars"])
        polys = []
        for poly in data["polys"]:
            terms = []
            for (clo, chi), exps in poly:
                terms.append((Interval.parse(clo, chi), tuple(int(e) for e in exps)))
            polys.append(Polynomial(nvars, tuple(terms)))
        domain = tuple((_parse_bound(lo, False), _parse_bound(hi, True)) for lo, hi in data["domain"])
        spheres = tuple(tuple(int(k) for k in g) for g in data.get("spheres", []))
        antipodal = tuple(tuple(int(k) for k in g) for g in data.get("antipodal", []))
        names = tuple(data.get("vars", [f"x{i}" for i in range(nvars)]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed system document: {exc}") from exc
    meta = {k: v for k, v in data.items() if k not in {"nvars", "polys", "domain", "spheres", "antipodal", "vars"}}
    return PolynomialSystem(
        nvars,
        tuple(polys),
        domain,
        spheres,
        antipodal,
        names,
        name=str(data.get("name", "")),
        meta=meta,
    )


def load_system(path: str | Path) -> PolynomialSystem:
    with open(path, encoding="utf-8") as fh:
        return system_from_json(json.load(fh))


# -- boxes and covers ----------------------------------------------------------


@dataclass(frozen=True)
class Box:
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    depth: int
    index: tuple[int, ...]

    @property
    def path(self) -> tuple[int, ...]:
        """Bisection choices (0 = lower half) in the order they were made."""
        bits = []
        for level in range(self.depth - 1, -1, -1):
            for i in self.index:
                bits.append((i >> level) & 1)
        return tuple(bits)

    def intervals(self) -> list[Interval]:
        return [Interval(a, b) for a, b in zip(self.lo, self.hi)]


def _edges(lo: float, hi: float, level: int, idx: np.ndarray) -> np.ndarray:
    """Grid coordinates ``lo + (hi - lo) * idx / 2**level``, pinned to ``hi``.

    Rounding is monotone in ``idx`` and coincides across levels (dyadic
    ratios are exact), so sibling cells tile their parent exactly.
    """
    n = 1 << level
    x = np.minimum(lo + (hi - lo) * (idx / n), hi)
    return np.where(idx >= n, hi, x)


@dataclass
class Cover:
    system: PolynomialSystem
    depth: int
    index: np.ndarray  # (N, nvars) int32 grid indices, lexicographically sorted

    @property
    def count(self) -> int:
        return int(self.index.shape[0])

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        return _box_bounds(self.system.domain, [self.depth] * self.system.nvars, self.index)

    def boxes(self) -> Iterator[Box]:
        lo, hi = self.bounds()
        for i in range(self.count):
            yield Box(tuple(lo[i].tolist()), tuple(hi[i].tolist()), self.depth, tuple(self.index[i].tolist()))

    def contains_point(self, point: Sequence[float]) -> bool:
        lo, hi = self.bounds()
        p = np.asarray(point, dtype=float)
        return bool(np.any(np.all((lo <= p) & (p <= hi), axis=1)))

    def region_keys(self, depth: int) -> set[tuple[int, ...]]:
        """Grid cells at a coarser ``depth`` that contain retained boxes."""
        shift = self.depth - depth
        if shift < 0:
            raise ValueError("can only coarsen a cover")
        return set(map(tuple, (self.index >> shift).tolist()))


def _box_bounds(domain, levels, idx):
    n = idx.shape[1]
    lo = np.empty(idx.shape, dtype=float)
    hi = np.empty(idx.shape, dtype=float)
    for k in range(n):
        a, b = domain[k]
        lo[:, k] = _edges(a, b, levels[k], idx[:, k])
        hi[:, k] = _edges(a, b, levels[k], idx[:, k] + 1)
    return lo, hi


def _is_separable(p: Polynomial) -> bool:
    return all(sum(1 for e in exps if e) <= 1 for _, exps in p.terms)


class _GenericEvaluator:
    def __init__(self, p: Polynomial):
        self.compiled = CompiledPolynomial(p)

    def update(self, k: int, lo: np.ndarray, hi: np.ndarray) -> None:
        pass

    def enclose(self, idx, edges):
        xs = [(edges[k][idx[:, k]], edges[k][idx[:, k] + 1]) for k in range(idx.shape[1])]
        val = _eval_node(self.compiled.tree, xs)
        if isinstance(val, Interval):
            return np.full(idx.shape[0], val.lo), np.full(idx.shape[0], val.hi)
        return val


class _SeparableEvaluator:
    """Sum of univariate parts, each tabulated once per grid cell."""

    def __init__(self, p: Polynomial):
        self.const = Interval(0.0, 0.0)
        parts: dict[int, dict] = {}
        for c, exps in p.terms:
            nz = [k for k, e in enumerate(exps) if e]
            if not nz:
                self.const = self.const + c
            else:
                k = nz[0]
                parts.setdefault(k, {})[(exps[k],)] = c
        self.parts = {k: CompiledPolynomial(Polynomial.from_dict(1, d)) for k, d in sorted(parts.items())}
        self.tables: dict[int, tuple[np.ndarray, np.ndarray]] = {}

    def update(self, k: int, lo: np.ndarray, hi: np.ndarray) -> None:
        if k in self.parts:
            self.tables[k] = self.parts[k].enclose(lo[:, None], hi[:, None])

    def enclose(self, idx, edges):
        acc = None
        for k, (tlo, thi) in self.tables.items():
            term = (tlo[idx[:, k]], thi[idx[:, k]])
            acc = term if acc is None else vadd(acc, term)
        if acc is None:
            return np.full(idx.shape[0], self.const.lo), np.full(idx.shape[0], self.const.hi)
        return vadd(acc, (self.const.lo, self.const.hi))


class _Refiner:
    """Level-by-level bisection; rows are re-sorted once per level."""

    def __init__(self, system: PolynomialSystem, budget: int, threads: int):
        self.system = system
        self.budget = budget
        self.threads = max(1, int(threads))
        self.evaluators = [
            _SeparableEvaluator(p) if _is_separable(p) else _GenericEvaluator(p)
            for p in system.constraint_polynomials()
        ]
        self.levels_ = [0] * system.nvars
        self.edges = [None] * system.nvars
        for k in range(system.nvars):
            self._set_level(k, 0)

    def _set_level(self, k: int, level: int) -> None:
        self.levels_[k] = level
        a, b = self.system.domain[k]
        e = _edges(a, b, level, np.arange((1 << level) + 1, dtype=np.int64))
        self.edges[k] = e
        for ev in self.evaluators:
            ev.update(k, e[:-1], e[1:])

    def _keep(self, idx):
        keep = np.ones(idx.shape[0], dtype=bool)
        for ev in self.evaluators:
            elo, ehi = ev.enclose(idx, self.edges)
            keep &= (elo <= 0) & (ehi >= 0)
        return keep

    def _split(self, parents, k):
        children = np.repeat(parents, 2, axis=0)
        children[:, k] *= 2
        children[1::2, k] += 1
        return children[self._keep(children)]

    def _map(self, fn, idx):
        chunks = [idx[i : i + _CHUNK] for i in range(0, idx.shape[0], _CHUNK)]
        if not chunks:
            return idx
        if self.threads > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                parts = list(pool.map(fn, chunks))
        else:
            parts = [fn(ch) for ch in chunks]
        return np.concatenate(parts)

    def levels(self, max_depth: int) -> Iterator[Cover]:
        n = self.system.nvars
        if max_depth > 30:
            raise UnsupportedDimension("depth above 30 is not supported")
        idx = np.zeros((1, n), dtype=np.int32)
        idx = idx[self._keep(idx)]
        yield Cover(self.system, 0, idx)
        for depth in range(1, max_depth + 1):
            for k in range(n):
                self._set_level(k, depth)
                idx = self._map(lambda ch: self._split(ch, k), idx)
                if idx.shape[0] > self.budget:
                    raise BudgetExceeded(
                        f"{idx.shape[0]} retained boxes at depth {depth} exceed the budget of {self.budget}"
                    )
            if idx.shape[0] > 1:
                keys = _encode(idx.astype(np.int64), 1 << depth)
                idx = idx[np.argsort(keys, kind="stable")]
            log.debug("depth %d: %d boxes retained", depth, idx.shape[0])
            yield Cover(self.system, depth, idx)


def subdivide(
    system: PolynomialSystem,
    max_depth: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> Cover:
    if max_depth < 0:
        raise ValueError("depth must be nonnegative")
    cover = None
    for cover in _Refiner(system, budget, threads).levels(max_depth):
        pass
    return cover


# -- component labeling --------------------------------------------------------


def _encode(idx: np.ndarray, base: int) -> np.ndarray:
    key = np.zeros(idx.shape[0], dtype=np.int64)
    for k in range(idx.shape[1]):
        key = key * base + idx[:, k]
    return key


def _half_offsets(n: int):
    """Neighbour offsets in {-1,0,1}^n whose first nonzero entry is +1."""
    for off in itertools.product((-1, 0, 1), repeat=n):
        nz = [o for o in off if o]
        if nz and nz[0] == 1:
            yield off


def label_cover(cover: Cover) -> tuple[int, np.ndarray]:
    """Component count and per-box labels of a cover.

    Two closed cells of one grid meet iff their indices differ by at most
    one in every coordinate.  Cell keys are linear in the index (digits are
    shifted by one so neighbours of boundary cells stay in range) and
    increase with the row order of the cover, so every neighbour offset is
    a constant positive shift matched by a linear scan.  Labels are
    numbered by the first box of each component.
    """
    idx = cover.index
    N, n = idx.shape
    if N == 0:
        return 0, np.zeros(0, dtype=np.int64)
    base = (1 << cover.depth) + 2
    if float(base) ** n >= 2.0**62:
        raise UnsupportedDimension("grid too fine to encode cell keys in 64 bits")
    keys = _encode(idx.astype(np.int64) + 1, base)
    if N > 1 and not np.all(keys[1:] > keys[:-1]):
        raise AssertionError("cover rows are not strictly sorted")
    weights = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
    shifts = np.array([int(np.dot(np.asarray(o, dtype=np.int64), weights)) for o in _half_offsets(n)], dtype=np.int64)
    parent = np.arange(N, dtype=np.int64)
    union_shifts(parent, keys, shifts)
    if cover.system.antipodal:
        top = (1 << cover.depth) - 1
        for group in cover.system.antipodal:
            mirrored = idx.astype(np.int64)
            for k in group:
                mirrored[:, k] = top - mirrored[:, k]
            target = _encode(mirrored + 1, base)
            pos = np.minimum(np.searchsorted(keys, target), N - 1)
            found = keys[pos] == target
            union_pairs(parent, np.nonzero(found)[0], pos[found])
    _, labels = np.unique(roots(parent), return_inverse=True)
    labels = labels.ravel().astype(np.int64)
    return int(labels.max()) + 1, labels


# -- reports -------------------------------------------------------------------


@dataclass
class ComponentReport:
    depth: int
    retained_count: int
    component_estimate: int
    history: list[tuple[int, int]]
    retained_history: list[tuple[int, int]]
    stable: bool
    system_name: str = ""

    def to_json(self) -> dict:
        return {
            "system": self.system_name,
            "depth": self.depth,
            "retained_count": self.retained_count,
            "component_estimate": self.component_estimate,
            "history": [[d, e] for d, e in self.history],
            "retained_history": [[d, c] for d, c in self.retained_history],
            "stable": self.stable,
        }


def count_components(
    system: PolynomialSystem,
    depths: Sequence[int],
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    keep_cover: bool = False,
):
    """Estimate the component count at each scheduled depth.

    Returns a :class:`ComponentReport`, or ``(report, cover)`` with the
    finest cover when ``keep_cover`` is set.
    """
    schedule = sorted(set(int(d) for d in depths))
    if not schedule:
        raise ValueError("empty depth schedule")
    if schedule[0] < 0:
        raise ValueError("depths must be nonnegative")
    history, retained = [], []
    last = None
    for cover in _Refiner(system, budget, threads).levels(schedule[-1]):
        if cover.depth in schedule:
            ncomp, _ = label_cover(cover)
            history.append((cover.depth, ncomp))
            retained.append((cover.depth, cover.count))
            last = cover
    stable = len(history) >= 2 and history[-1][1] == history[-2][1]
    report = ComponentReport(
        depth=last.depth,
        retained_count=last.count,
        component_estimate=history[-1][1],
        history=history,
        retained_history=retained,
        stable=stable,
        system_name=system.name,
    )
    return (report, last) if keep_cover else report


# -- export --------------------------------------------------------------------


def cover_to_json(cover: Cover) -> dict:
    lo, hi = cover.bounds()
    return {
        "system": cover.system.name,
        "nvars": cover.system.nvars,
        "depth": cover.depth,
        "boxes": [
            {"index": cover.index[i].tolist(), "lo": lo[i].tolist(), "hi": hi[i].tolist()}
            for i in range(cover.count)
        ],
    }


def cover_to_svg(cover: Cover, axes: tuple[int, int] = (0, 1), size: int = 512) -> str:
    """Retained boxes as SVG rectangles, projected on two coordinates.

    Three-dimensional covers are projected; for antipodal models only boxes
    meeting the closed half-space of nonnegative last coordinate are drawn.
    """
    n = cover.system.nvars
    if n > 3:
        raise UnsupportedDimension(f"graphical export supports at most 3 coordinates, got {n}")
    if n < 2:
        raise UnsupportedDimension("graphical export needs at least 2 coordinates")
    i, j = axes
    (ax, bx), (ay, by) = cover.system.domain[i], cover.system.domain[j]
    sx, sy = size / (bx - ax), size / (by - ay)
    lo, hi = cover.bounds()
    rows = range(cover.count)
    if n == 3 and cover.system.antipodal:
        rows = [r for r in rows if hi[r, 2] >= 0]
    rects = []
    for r in rows:
        x = (lo[r, i] - ax) * sx
        y = (by - hi[r, j]) * sy
        w = (hi[r, i] - lo[r, i]) * sx
        h = (hi[r, j] - lo[r, j]) * sy
        rects.append(f'<rect x="{x:.3f}" y="{y:.3f}" width="{w:.3f}" height="{h:.3f}"/>')
    body = "\n".join(rects)
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">\n<g fill="#2e8b57" stroke="none">\n{body}\n</g>\n</svg>\n'
    )


def export_cover(cover: Cover, path: str | Path, fmt: str | None = None) -> Path:
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".").lower()
    if fmt == "svg":
        path.write_text(cover_to_svg(cover), encoding="utf-8")
    elif fmt == "json":
        path.write_text(json.dumps(cover_to_json(cover), sort_keys=True) + "\n", encoding="utf-8")
    else:
        raise ValueError(f"unknown export format {fmt!r}")
    return path
