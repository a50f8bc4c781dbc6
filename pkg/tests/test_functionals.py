from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from padicdual import (
    FactoredForm,
    Functional,
    NotContractive,
    NotFound,
    PadicScalarQ,
    admissible_values,
    evaluate,
    extend_from_subgroup,
    p_metric,
    separating_functional,
)

from conftest import form

Z2 = FactoredForm(2)
Z1 = FactoredForm(1)


def residue(x, n=20):
    return x.to_padic_int(n).residue


def test_evaluate_examples(ex21, ttf):
    f = Functional(3, ex21, (1,), 32)
    assert residue(evaluate(f, (-1, 1)), 3) == 6
    assert evaluate(f, (-1, 1)).val() == 1
    assert evaluate(f, (0, 0)).is_zero()
    assert evaluate(Functional(5, ttf, (1,), 32), ("1/5", "1/5")).is_zero()


def test_functional_shape(ex21):
    with pytest.raises(ValueError):
        Functional(3, ex21, (1, 2), 32)


def test_extend_example(ex21):
    f = extend_from_subgroup(ex21, 3, [(1, 0)], [1])
    assert f.coefficients == (1,)
    assert residue(evaluate(f, (0, 1)), 3) == 7


def test_extend_not_contractive(ex21):
    with pytest.raises(NotContractive) as info:
        extend_from_subgroup(ex21, 3, [(1, 0), (0, 1)], [0, 1])
    assert info.value.index == 1


def test_extend_zero_extension():
    f = extend_from_subgroup(Z2, 3, [(1, 0)], [0])
    assert evaluate(f, (0, 1)).is_zero()


def test_extend_rejects_non_integral_value():
    with pytest.raises(NotContractive):
        extend_from_subgroup(Z1, 3, [(1,)], [Fraction(1, 3)])


def test_extend_on_divisible_group():
    zh = form(1, {2: __import__("padicdual").ZERO_ROW})
    assert extend_from_subgroup(zh, 2, [(1,)], [0]).coefficients == ()
    with pytest.raises(NotContractive):
        extend_from_subgroup(zh, 2, [(1,)], [1])


def test_extend_mismatched_lengths(ex21):
    with pytest.raises(ValueError):
        extend_from_subgroup(ex21, 3, [(1, 0)], [1, 2])


def test_admissible_examples(ex21):
    d = admissible_values(Z2, 3, [(1, 0)], [0], (0, 1))
    assert d.radius_exponent == 0 and d.center.is_zero()
    d = admissible_values(ex21, 3, [(1, 0)], [1], (0, 1))
    assert d.is_point and residue(d.center, 3) == 7
    with pytest.raises(NotContractive):
        admissible_values(Z1, 3, [(3,)], [1], (1,))


def test_admissible_radius_from_metric():
    # value at (3) forced to be divisible by 3; value at (1) is then a disk of radius 1
    d = admissible_values(Z2, 3, [(3, 0)], [6], (0, 1))
    assert d.radius_exponent == 0
    d = admissible_values(Z2, 3, [(3, 3)], [6], (0, 1))
    assert d.radius_exponent == 0
    d = admissible_values(Z2, 3, [(1, 9)], [1], (0, 1))
    assert d.radius_exponent == 0
    d = admissible_values(Z2, 3, [(1, 9)], [1], (1, 0))
    assert d.radius_exponent == 2


def test_separating_examples(ex21):
    f = separating_functional(Z2, 3, [(3, 0), (0, 3)], (1, 0), 1)
    assert f.coefficients == (1, 0)
    f = separating_functional(ex21, 3, [(3, 0), (0, 3)], (1, 0), 1)
    assert evaluate(f, (1, 0)).val() == 0
    with pytest.raises(NotFound):
        separating_functional(Z1, 3, [(1,)], (1,), 0)


def test_separating_when_g_in_closure(ex21):
    # (-1, 1) is divisible by 3 in G, so it cannot be separated at level 3^1
    with pytest.raises(NotFound):
        separating_functional(ex21, 3, [(3, 0), (0, 3)], (-1, 1), 1)


coeff = st.integers(0, 3**20)
vec = st.tuples(st.integers(-100, 100), st.integers(-100, 100))


@settings(max_examples=100, deadline=None)
@given(coeff, vec.filter(any))
def test_contractive(ex21, c, v):
    f = Functional(3, ex21, (c,), 32)
    m = p_metric(ex21, 3, v)
    value = evaluate(f, v)
    if m.exact and not value.is_zero():
        assert value.val() >= m.exponent


@settings(max_examples=100, deadline=None)
@given(st.tuples(coeff, coeff), st.lists(vec, min_size=1, max_size=3), vec)
def test_admissible_disk_consistency(cs, gens, g):
    f = Functional(3, Z2, cs, 32)
    values = [evaluate(f, h) for h in gens]
    d = admissible_values(Z2, 3, gens, values, g)
    default = extend_from_subgroup(Z2, 3, gens, values)
    assert d.contains(evaluate(default, g))
    assert d.contains(evaluate(f, g))
    if d.radius_exponent is not None:
        step = 3**d.radius_exponent
        for t in range(1, 4):
            beta = d.center + PadicScalarQ.from_fraction(t * step, 3, 20)
            g2 = extend_from_subgroup(Z2, 3, list(gens) + [g], values + [beta])
            assert (evaluate(g2, g) - beta).is_zero()


@settings(max_examples=100, deadline=None)
@given(st.tuples(coeff, coeff), st.lists(vec, min_size=1, max_size=3), vec, vec)
def test_disks_shrink_with_more_generators(cs, gens, extra, g):
    f = Functional(3, Z2, cs, 32)
    d1 = admissible_values(Z2, 3, gens, [evaluate(f, h) for h in gens], g)
    more = gens + [extra]
    d2 = admissible_values(Z2, 3, more, [evaluate(f, h) for h in more], g)

    def size(d):
        return d.center.absolute_precision if d.radius_exponent is None else d.radius_exponent

    assert size(d2) >= size(d1)
    assert d1.contains(d2.center)
