import itertools

import pytest

from semik.bratteli import (
    BratteliPresentation, MatricialAlgebra, congsemisimple_invariant, congsemisimple_isomorphic,
    iso_ultramatricial, realize_morphism, sk0_matricial, sk0_ultramatricial, stable_rank,
    supernatural, validate_witness,
)
from semik.errors import NegativeEntry, NotUnital, ShapeMismatch, UnitalityViolation
from semik.kflow import identity, mat_mul

DYADIC2 = BratteliPresentation.stationary([1], [[2]])
DYADIC4 = BratteliPresentation.stationary([1], [[4]])
TRIADIC = BratteliPresentation.stationary([1], [[3]])


def test_sk0_matricial():
    g = sk0_matricial(MatricialAlgebra((2, 3)))
    assert (g.rank, g.unit) == (2, (2, 3))
    for n in range(1, 7):
        g = sk0_matricial((n,))
        assert (g.rank, g.unit) == (1, (n,))


def test_product_law():
    a, b = (2, 3), (1, 4, 4)
    g = sk0_matricial(a + b)
    assert g.rank == sk0_matricial(a).rank + sk0_matricial(b).rank
    assert g.unit == sk0_matricial(a).unit + sk0_matricial(b).unit


def test_unique_coordinates():
    g = sk0_matricial((2, 3))
    # the standard basis is free: distinct coordinate vectors give distinct sums
    seen = set()
    for v in itertools.product(range(4), repeat=2):
        assert g.is_positive(v)
        seen.add(tuple(v))
    assert len(seen) == 16


@pytest.mark.parametrize("r", range(1, 6))
def test_all_ones_units(r):
    g = sk0_matricial((1,) * r)
    assert (g.rank, g.unit) == (r, (1,) * r)


def test_sk0_ultramatricial():
    s = sk0_ultramatricial(BratteliPresentation(((1,), (2,), (4,)), (((2,),), ((2,),)), 1))
    assert s.unit_at(5) == (32,)
    c = sk0_ultramatricial(BratteliPresentation.constant((3,)))
    assert c.unit_at(0) == c.unit_at(9) == (3,)
    one = BratteliPresentation(((2, 3), (8,)), (((1, 2),),))
    assert sk0_ultramatricial(one).transition(0, 1) == ((1, 2),)
    with pytest.raises(UnitalityViolation):
        BratteliPresentation(((2, 3), (9,)), (((1, 2),),))


def test_realize_morphism():
    plan = realize_morphism((1,), (3,), ((3,),))
    assert plan.blocks == (((0, 0), (0, 1), (0, 2)),)
    plan = realize_morphism((2, 3), (8,), ((1, 2),))
    assert plan.blocks == (((0, 0), (1, 2), (1, 5)),)
    with pytest.raises(NotUnital):
        realize_morphism((2,), (3,), ((1,),))
    with pytest.raises(NegativeEntry):
        realize_morphism((2,), (2,), ((-1,),))
    with pytest.raises(ShapeMismatch):
        realize_morphism((2,), (2,), ((1, 1),))


def test_congsemisimple_invariant():
    assert congsemisimple_isomorphic((2, 3), (3, 2))
    assert not congsemisimple_isomorphic((2, 2), (4,))
    assert congsemisimple_invariant((1,)) == (1,)


def test_dyadic_iso():
    r = iso_ultramatricial(DYADIC2, DYADIC4, depth=3)
    assert r.verdict == "ISO"
    assert validate_witness(DYADIC2, DYADIC4, r.witness)
    assert max(max(l) for l in r.witness["levels"]) <= 3


def test_dyadic_vs_triadic():
    r = iso_ultramatricial(DYADIC2, TRIADIC)
    assert r.verdict == "NOT_ISO" and r.certificate["kind"] == "supernatural"


def test_b_vs_b():
    B = BratteliPresentation.constant((1,))
    r = iso_ultramatricial(B, B)
    assert r.verdict == "ISO" and validate_witness(B, B, r.witness)


def test_rank_certificate():
    two = BratteliPresentation.stationary([1, 1], [[1, 0], [0, 1]])
    r = iso_ultramatricial(two, DYADIC2)
    assert r.verdict == "NOT_ISO" and r.certificate == {"kind": "stable_rank", "left": 2, "right": 1}


def test_stable_rank_of_folding_system():
    fold = BratteliPresentation(((1, 1), (2, 2), (4, 4)), (((1, 1), (1, 1)),) * 2, 1)
    assert stable_rank(sk0_ultramatricial(fold)) == 1


def test_supernatural_uses_level_sizes():
    s = sk0_ultramatricial(BratteliPresentation(((3,), (6,), (12,)), (((2,),), ((2,),)), 1))
    assert supernatural(s) == {2: float("inf"), 3: 1}


def test_prefix_is_unknown():
    p = BratteliPresentation(((1,), (2,)), (((2,),),))
    assert iso_ultramatricial(p, DYADIC2).verdict == "UNKNOWN"


def test_tampered_witness_rejected():
    r = iso_ultramatricial(DYADIC2, DYADIC4, depth=3)
    w = dict(r.witness)
    w["beta"] = [[[3]]] + w["beta"][1:]
    assert not validate_witness(DYADIC2, DYADIC4, w)


def _witness_commutes(B1, B2, w):
    s1, s2 = sk0_ultramatricial(B1), sk0_ultramatricial(B2)
    lv = w["levels"]
    for k, b in enumerate(w["beta"]):
        (i, j), (i2, j2) = lv[k], lv[k + 1]
        if mat_mul(b, w["alpha"][k]) != s1.transition(i, i2):
            return False
        if mat_mul(w["alpha"][k + 1], b) != s2.transition(j, j2):
            return False
    return True


def test_constant_presentations_agree_with_multisets():
    sizes = [v for r in range(1, 4) for v in itertools.product(range(1, 5), repeat=r)]
    for a, b in itertools.product(sizes[:20], sizes[:20]):
        A, B = BratteliPresentation.constant(a), BratteliPresentation.constant(b)
        r = iso_ultramatricial(A, B, depth=4)
        assert r.verdict == ("ISO" if congsemisimple_isomorphic(a, b) else "NOT_ISO")
        if r.verdict == "ISO":
            assert _witness_commutes(A, B, r.witness)


def test_periodic_two_step_iso():
    # alternating steps [2],[3] against constant step [6]
    alt = BratteliPresentation(((1,), (2,), (6,)), (((2,),), ((3,),)), 2)
    six = BratteliPresentation.stationary([1], [[6]])
    r = iso_ultramatricial(alt, six, depth=4)
    assert r.verdict == "ISO" and validate_witness(alt, six, r.witness)
