import math
from fractions import Fraction

import pytest

from padicdual import (
    ZERO_ROW,
    DimensionMismatch,
    FactoredForm,
    InductiveLimitGroup,
    PrecisionExhausted,
    RationalMatrix,
    SingularMatrix,
    factored_form_of_inductive_limit,
    gram_cross_check,
    hom_check,
    iso_check,
    phi_p,
    quotient_structure,
    rank1_iso,
    rank1_type,
    rank1_witness,
)
from padicdual.classify import Rank1Type
from padicdual.padic import PadicPoly, hensel_lift

from conftest import EX21, EX22, form, random_form, transformed_form

Z = FactoredForm(1)
NINE = form(1, {3: [[9]]})
ZHALF = form(1, {2: ZERO_ROW})
ZHALF3 = form(1, {2: ZERO_ROW, 3: [[3]]})
I2 = RationalMatrix.identity(2)


def rm(rows):
    return RationalMatrix.from_rows(rows)


def test_hom_examples(ex21, ttf):
    assert hom_check(ex21, ex21, I2)
    assert hom_check(ex21, ex21, RationalMatrix.scalar(2, 3))
    v = hom_check(ttf, ttf, rm([[0, 1], [1, 0]]))
    assert not v
    assert v.per_prime[2].holds is False
    assert v.checked_primes == (2, 3, 5)


def test_hom_rational_maps():
    assert hom_check(Z, NINE, rm([["1/9"]]))
    assert hom_check(Z, NINE, rm([["1/3"]]))
    assert not hom_check(Z, NINE, rm([["1/27"]]))
    assert not hom_check(Z, Z, rm([["1/2"]]))
    assert hom_check(Z, ZHALF, rm([["1/1024"]]))
    assert not hom_check(ZHALF, Z, rm([[1]]))


def test_hom_dimensions(ex21):
    with pytest.raises(DimensionMismatch):
        hom_check(ex21, ex21, RationalMatrix.identity(3))


def test_hom_precision():
    with pytest.raises(PrecisionExhausted):
        hom_check(Z, NINE, rm([[Fraction(1, 3**30)]]))


def test_iso_examples(ex21):
    v = iso_check(Z, NINE, rm([["1/9"]]))
    assert v and v.checked_primes == (3,)
    assert iso_check(ex21, ex21, I2)
    assert not iso_check(Z, ZHALF, rm([[1]]))
    assert not iso_check(Z, NINE, rm([["1/3"]]))


def test_iso_singular(ex21):
    with pytest.raises(SingularMatrix):
        iso_check(ex21, ex21, rm([[1, 2], [2, 4]]))


def test_iso_verdict_json():
    out = iso_check(Z, NINE, rm([["1/9"]])).to_json()
    assert set(out) == {"verdict", "checked_primes", "min_margin", "precision", "per_prime"}
    assert out["verdict"] is True and out["checked_primes"] == [3]


def test_gram_cross_check():
    assert gram_cross_check(Z, NINE, rm([["1/9"]]), 3) is True
    assert gram_cross_check(Z, NINE, rm([["1/3"]]), 3) is False
    # isotropic row (1, i) with i^2 = -1 in Z_5: the Gram matrix vanishes
    root = hensel_lift(PadicPoly.from_ints([1, 0, 1], 5), 2, 32).residue
    iso = form(2, {5: [[1, root]]})
    assert gram_cross_check(iso, iso, I2, 5) is None
    assert iso_check(iso, iso, I2)


def test_rank1_type_examples():
    assert rank1_type(NINE).exponents == {3: 2}
    assert rank1_type(Z).exponents == {}
    assert rank1_type(ZHALF).exponents == {2: math.inf}
    assert str(rank1_type(ZHALF)) == "{2: inf}"
    with pytest.raises(DimensionMismatch):
        rank1_type(FactoredForm(2))


@pytest.mark.parametrize(
    "t1,t2,expected",
    [
        ({3: 2}, {}, True),
        ({2: math.inf}, {}, False),
        ({2: math.inf, 3: 1}, {2: math.inf}, True),
        ({}, {}, True),
    ],
)
def test_rank1_iso(t1, t2, expected):
    a, b = Rank1Type(t1), Rank1Type(t2)
    assert rank1_iso(a, b) is expected
    assert rank1_iso(b, a) is expected


def test_rank1_witness_accepted_by_iso_check():
    for A in (Z, NINE, ZHALF, ZHALF3):
        for B in (Z, NINE, ZHALF, ZHALF3):
            t1, t2 = rank1_type(A), rank1_type(B)
            w = rank1_witness(t1, t2)
            if rank1_iso(t1, t2):
                assert iso_check(A, B, rm([[w]]))
            else:
                assert w is None
                assert not iso_check(A, B, rm([[1]]))


def test_phi_p(ex21, ttf):
    assert [x.residue % 27 for x in phi_p(ex21, 3, (-1, 1))] == [6]
    assert all(x.residue == 0 for x in phi_p(ex21, 3, (0, 0)))
    assert [x.residue for x in phi_p(ttf, 5, (1, 1))] == [0]


def test_quotient_examples(ex21):
    assert quotient_structure(ex21, 3, 1).orders == (3,)
    assert quotient_structure(ex21, 3, 2).orders == (9,)
    assert quotient_structure(FactoredForm(2), 5, 1).orders == (5, 5)
    assert quotient_structure(ZHALF, 2, 3).orders == ()
    with pytest.raises(PrecisionExhausted):
        quotient_structure(ex21, 3, 30)
    with pytest.raises(ValueError):
        quotient_structure(ex21, 3, 0)


def test_identity_is_endomorphism(rng):
    for _ in range(30):
        ff = random_form(rng)
        assert hom_check(ff, ff, RationalMatrix.identity(ff.rank))


def test_composition(rng):
    for _ in range(30):
        A = random_form(rng)
        B, V = transformed_form(rng, A)
        C, W = transformed_form(rng, B)
        Vm, Wm = rm(V), rm(W)
        assert hom_check(A, B, Vm) and hom_check(B, C, Wm)
        assert hom_check(A, C, Wm @ Vm)


def test_iso_symmetric(rng):
    for _ in range(30):
        A = random_form(rng)
        B, V = transformed_form(rng, A)
        Vm = rm(V)
        assert iso_check(A, B, Vm)
        assert iso_check(B, A, Vm.inverse())
        assert hom_check(A, B, Vm) and hom_check(B, A, Vm.inverse())
        for p in A.primes:
            g = gram_cross_check(A, B, Vm, p)
            assert g in (True, None)


def test_unlisted_primes_need_no_check(rng):
    # at primes outside both forms and V's denominators, rows of V are p-integral
    for _ in range(30):
        A = random_form(rng, primes=(2, 3))
        B, V = transformed_form(rng, A)
        for p in (7, 11, 13):
            from padicdual.classify import _hom_at

            assert _hom_at(A, B, rm(V), p).holds


def test_quotient_matches_oracle_on_limits():
    from padicdual.oracle import oracle_quotient

    for A in (EX21, EX22, [[1, 0], [0, 1]], [[1, 0], [0, 2]], [[2, 1], [0, 3]], [[3, 1], [1, 3]]):
        ff = factored_form_of_inductive_limit(InductiveLimitGroup(A))
        for p in (2, 3, 5):
            for k in (1, 2, 3):
                assert list(quotient_structure(ff, p, k).orders) == oracle_quotient(A, p, k)
