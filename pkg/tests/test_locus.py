import json
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from realfano.interval import Interval
from realfano.locus import (
    BudgetExceeded,
    Polynomial,
    PolynomialSystem,
    UnsupportedDimension,
    count_components,
    cover_to_json,
    cover_to_svg,
    export_cover,
    interval_eval,
    label_cover,
    subdivide,
    system_from_json,
)


def system(nvars, polys, domain, **kw):
    return PolynomialSystem(nvars, tuple(Polynomial.from_dict(nvars, p) for p in polys), tuple(domain), **kw)


CIRCLE = system(2, [{(2, 0): 1, (0, 2): 1, (0, 0): -1}], [(-2.0, 2.0)] * 2, name="circle")
NO_POINTS = system(2, [{(2, 0): 1, (0, 2): 1, (0, 0): 1}], [(-2.0, 2.0)] * 2)
CROSS = system(2, [{(2, 0): 1, (0, 2): -1}], [(-1.0, 1.0)] * 2)


def sphere_slice(antipodal):
    return system(
        3,
        [{(2, 0, 0): 1, (0, 0, 0): Fraction(-1, 4)}],
        [(-1.0, 1.0)] * 3,
        spheres=((0, 1, 2),),
        antipodal=((0, 1, 2),) if antipodal else (),
    )


def test_interval_eval_examples():
    p = Polynomial.from_dict(1, {(2,): 1, (0,): -1})
    r = interval_eval(p, [Interval(2.0, 3.0)])
    assert r.lo <= 3 and r.hi >= 8
    q = Polynomial.from_dict(2, {(1, 1): 1})
    r = interval_eval(q, [Interval(-1.0, 1.0)] * 2)
    assert r.lo <= -1 and r.hi >= 1


def test_interval_coefficient_encloses_sqrt2():
    s = Interval.parse("1.41421356237309504", "1.41421356237309505")
    p = Polynomial.from_dict(1, {(1,): s})
    r = interval_eval(p, [Interval(1.0, 1.0)])
    assert Fraction(r.lo) ** 2 < 2 < Fraction(r.hi) ** 2


@pytest.mark.parametrize("depth", [4, 6, 8])
def test_circle_one_component(depth):
    cover = subdivide(CIRCLE, depth)
    assert cover.count > 0
    assert label_cover(cover)[0] == 1


def test_no_real_points_gives_empty_cover():
    for d in (0, 3, 6):
        assert subdivide(NO_POINTS, d).count == 0
    rep = count_components(NO_POINTS, [2, 3])
    assert rep.component_estimate == 0 and rep.stable


def _raster_oracle(depth):
    """Cells of the 2^d grid on [-1,1]^2 where x^2 and y^2 ranges overlap."""
    n = 1 << depth
    edges = [Fraction(-1) + Fraction(2 * i, n) for i in range(n + 1)]

    def sq_range(i):
        a, b = edges[i], edges[i + 1]
        lo = Fraction(0) if a <= 0 <= b else min(a * a, b * b)
        return lo, max(a * a, b * b)

    cells = set()
    for i in range(n):
        for j in range(n):
            (a, b), (c, d) = sq_range(i), sq_range(j)
            if a <= d and c <= b:
                cells.add((i, j))
    return cells


@pytest.mark.parametrize("depth", [3, 5, 7])
def test_cross_matches_raster_oracle(depth):
    cover = subdivide(CROSS, depth)
    cells = _raster_oracle(depth)
    assert set(map(tuple, cover.index.tolist())) == cells
    g = nx.Graph()
    g.add_nodes_from(cells)
    for i, j in cells:
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if (i + di, j + dj) in cells:
                    g.add_edge((i, j), (i + di, j + dj))
    assert nx.number_connected_components(g) == label_cover(cover)[0] == 1


def _contains_exact(cover, point):
    lo, hi = cover.bounds()
    p = [Fraction(x) for x in point]
    for r in range(cover.count):
        if all(Fraction(lo[r, k]) <= p[k] <= Fraction(hi[r, k]) for k in range(len(p))):
            return True
    return False


def test_cover_contains_seeded_circle_points():
    rng = np.random.default_rng(7)
    cover = subdivide(CIRCLE, 7)
    for _ in range(25):
        u = Fraction(int(rng.integers(-50, 50)), int(rng.integers(1, 20)))
        pt = ((1 - u * u) / (1 + u * u), 2 * u / (1 + u * u))
        assert _contains_exact(cover, pt)


def test_refinement_is_monotone():
    coarse = subdivide(CIRCLE, 4)
    fine = subdivide(CIRCLE, 7)
    assert fine.region_keys(4) <= set(map(tuple, coarse.index.tolist()))
    with pytest.raises(ValueError):
        coarse.region_keys(5)


def test_thread_count_does_not_change_results():
    a, ca = count_components(sphere_slice(True), [4, 5], threads=1, keep_cover=True)
    b, cb = count_components(sphere_slice(True), [4, 5], threads=4, keep_cover=True)
    assert a.to_json() == b.to_json()
    assert np.array_equal(ca.index, cb.index)


def test_antipodal_identification():
    assert count_components(sphere_slice(False), [4, 5]).component_estimate == 2
    assert count_components(sphere_slice(True), [4, 5]).component_estimate == 1


def test_real_projective_line_is_connected():
    great_circle = system(3, [{(0, 0, 1): 1}], [(-1.0, 1.0)] * 3, spheres=((0, 1, 2),), antipodal=((0, 1, 2),))
    rep = count_components(great_circle, [4, 5, 6])
    assert rep.component_estimate == 1 and rep.stable


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        subdivide(CIRCLE, 10, budget=100)


def test_export_formats(tmp_path):
    cover = subdivide(CIRCLE, 5)
    doc = cover_to_json(cover)
    assert len(doc["boxes"]) == cover.count
    svg = cover_to_svg(cover)
    assert svg.count("<rect") == cover.count
    empty = subdivide(NO_POINTS, 3)
    assert cover_to_json(empty)["boxes"] == []
    out = export_cover(cover, tmp_path / "c.json")
    assert json.loads(out.read_text())["depth"] == 5
    with pytest.raises(ValueError):
        export_cover(cover, tmp_path / "c.png")
    five = system(5, [{(2, 0, 0, 0, 0): 1, (0, 0, 0, 0, 0): -1}], [(-2.0, 2.0)] * 5)
    with pytest.raises(UnsupportedDimension):
        cover_to_svg(subdivide(five, 1))


def test_antipodal_svg_draws_upper_half():
    cover = subdivide(sphere_slice(True), 4)
    assert 0 < cover_to_svg(cover).count("<rect") < cover.count


@pytest.mark.parametrize(
    "doc",
    [
        {"nvars": 1, "polys": [[[["1", "0"], [1]]]], "domain": [["-1", "1"]]},
        {"nvars": 1, "polys": [[[["1", "1"], [1, 0]]]], "domain": [["-1", "1"]]},
        {"nvars": 1, "polys": [], "domain": [["1", "-1"]]},
        {"nvars": 2, "polys": [], "domain": [["-1", "1"], ["0", "1"]], "antipodal": [[0, 1]]},
        {"polys": [], "domain": []},
    ],
)
def test_malformed_systems(doc):
    with pytest.raises(ValueError):
        system_from_json(doc)
