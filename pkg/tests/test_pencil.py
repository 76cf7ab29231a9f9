import json
import random
from fractions import Fraction as F

import pytest

from realfano import linalg
from realfano import polynomial as P
from realfano.pencil import (
    IsotopyClass,
    NotGeneric,
    QuadricPencil,
    SymmetricForm,
    Topology,
    Unsupported,
    canonical_necklace,
    classification_report,
    classify,
    discriminant_roots,
    inertia,
    inertia_profile,
    interpret,
    pencil_determinant,
    pencil_from_json,
    pencil_to_json,
    positive_runs,
    random_generic_pencil,
    validate_generic,
)
from tests.oracles.pencil_oracle import oracle_class, positive_indices

Q0 = [1, 1, 1, 1, 1, -1]
Q1 = [2, 3, 4, 5, F(1, 4), -1]
E2_Q1 = [2, F(9, 4), F(5, 2), F(11, 4), F(1, 4), -1]


def diag_pencil(a, b):
    return QuadricPencil(SymmetricForm.diagonal(a), SymmetricForm.diagonal(b))


def block_pencil():
    n = 6
    q0 = [[F(0)] * n for _ in range(n)]
    q1 = [[F(0)] * n for _ in range(n)]
    for k in range(0, n, 2):
        q0[k][k], q0[k + 1][k + 1] = F(1), F(-1)
        q1[k][k + 1] = q1[k + 1][k] = F(1)
    return QuadricPencil.from_matrices(q0, q1)


def test_diagonal_discriminant_is_product_of_entries():
    d = pencil_determinant(diag_pencil(Q0, Q1))
    expected = (F(1),)
    for a, b in zip(Q0, Q1):
        expected = P.mul(expected, (F(a), F(b)))
    assert d.poly == expected
    assert d.infinity_multiplicity == 0


def test_degenerate_second_form_has_root_at_infinity():
    p = diag_pencil([1, 1], [0, 0])
    d = pencil_determinant(p)
    assert d.poly == (F(1),)
    assert d.infinity_multiplicity == 2
    assert discriminant_roots(p)[-1].at_infinity


def test_block_discriminant():
    d = pencil_determinant(block_pencil())
    # -(1+t^2)^3
    assert d.poly == P.poly([-1, 0, -3, 0, -3, 0, -1])


def test_validate_generic():
    assert validate_generic(diag_pencil(Q0, Q1))
    assert not validate_generic(diag_pencil(Q0, [2 * x for x in Q0]))
    alpha2 = F(2)
    assert not validate_generic(diag_pencil(Q0, [alpha2] * 4 + [F(1, 4), -1]))


def test_inertia_examples():
    assert inertia(linalg.identity(6)) == (6, 0, 0)
    assert inertia(SymmetricForm.diagonal(Q1)) == (5, 0, 1)
    p = diag_pencil(Q0, Q1)
    # 1 + 5t vanishes at t = -1/5
    assert inertia(p.member(1, F(-1, 5))) == (4, 1, 1)
    assert inertia(p.member(1, F(-2, 5))) == (2, 0, 4)


def test_profile_has_two_lifts_per_real_root():
    prof = inertia_profile(diag_pencil(Q0, Q1))
    assert len(prof.discontinuities) == 12
    assert sum(prof.jumps) == 0


def test_block_profile_is_constant():
    prof = inertia_profile(block_pencil())
    assert prof.discontinuities == ()
    assert set(prof.arcs) == {3}
    assert classify(block_pencil()) == IsotopyClass(())
    assert str(classify(block_pencil())) == "(0)"


def test_profile_matches_oracle_values():
    p = diag_pencil(Q0, Q1)
    oracle = {v for v in positive_indices(p.q0.entries, p.q1.entries) if v is not None}
    assert oracle == set(inertia_profile(p).arcs)


def test_proportional_forms_are_not_generic():
    with pytest.raises(NotGeneric):
        inertia_profile(diag_pencil(Q0, [2 * x for x in Q0]))


@pytest.mark.parametrize(
    "q1, expected",
    [([2, 3, 4, 5, 6, 7], (6,)), (E2_Q1, (1, 1, 4)), (Q1, None)],
)
def test_class_examples(q1, expected):
    q0 = [1] * 6 if expected == (6,) else Q0
    p = diag_pencil(q0, q1)
    got = classify(p).parts
    assert got == oracle_class(p.q0.entries, p.q1.entries)
    if expected is not None:
        assert got == expected


def test_canonical_necklace():
    assert canonical_necklace((4, 1, 1)) == (1, 1, 4)
    assert canonical_necklace((6,)) == (6,)
    seq = (2, 1, 3, 1, 2)
    cands = [s[i:] + s[:i] for s in (seq, seq[::-1]) for i in range(5)]
    assert canonical_necklace(seq) == min(cands) == (1, 2, 2, 1, 3)
    with pytest.raises(ValueError):
        canonical_necklace(())


def test_positive_runs_circular():
    # the last and first entries are adjacent on the circle
    assert sorted(positive_runs([1, -1, 1, 1, -1, 1])) == [2, 2]
    assert sorted(positive_runs([1, 1, -1, -1, 1, -1])) == [1, 2]
    assert positive_runs([]) == []


def test_interpret():
    assert interpret(IsotopyClass((1, 1, 4)), 6) is Topology.TWO_COMPONENTS
    assert interpret(IsotopyClass(()), 6) is Topology.EMPTY
    assert interpret(IsotopyClass((6,)), 6) is Topology.AT_MOST_ONE_COMPONENT
    with pytest.raises(Unsupported):
        interpret(IsotopyClass((2,)), 4)


def test_random_pencils_match_oracle():
    rng = random.Random(11)
    for _ in range(15):
        p = random_generic_pencil(rng)
        assert classify(p).parts == oracle_class(p.q0.entries, p.q1.entries)


def test_invariance_under_congruence_and_reparametrization():
    rng = random.Random(3)
    from realfano.pencil import random_congruence

    for _ in range(3):
        p = random_generic_pencil(rng, congruence=False)
        base = classify(p)
        for _ in range(5):
            assert classify(p.congruent(random_congruence(rng, 6))) == base
            while True:
                a, b, c, d = (F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(4))
                if a * d - b * c:
                    break
            assert classify(p.reparametrize(a, b, c, d)) == base


def test_json_roundtrip_and_report():
    p = diag_pencil(Q0, E2_Q1)
    doc = pencil_to_json(p)
    assert pencil_from_json(json.loads(json.dumps(doc))) == p
    rep = classification_report(p)
    assert rep["class"] == [1, 1, 4] and rep["k"] == 6 and rep["verdict"] == "TwoComponents"
    assert len(rep["discriminant_roots"]) == 6


@pytest.mark.parametrize(
    "doc",
    [{"n": 2, "q0": [["1", "0"], ["0", "1"]]}, {"n": 3, "q0": [["1"]], "q1": [["1"]]}, {"n": 1, "q0": [["x"]], "q1": [["1"]]}],
)
def test_malformed_json(doc):
    with pytest.raises(ValueError):
        pencil_from_json(doc)


def test_simple_root_at_infinity_is_classified():
    p = diag_pencil(Q0, E2_Q1)
    # new basis (q1, q0 - 4 q1); the second form has a zero entry 1 - 4/4
    moved = p.reparametrize(0, 1, 1, -4)
    assert pencil_determinant(moved).infinity_multiplicity == 1
    assert classify(moved) == classify(p) == IsotopyClass((1, 1, 4))
    with pytest.raises(NotGeneric):
        inertia_profile(moved)
    double = diag_pencil([1, 1, 1, 1, 1, -1], [0, 0, 1, 2, 3, 4])
    with pytest.raises(NotGeneric):
        classify(double)
