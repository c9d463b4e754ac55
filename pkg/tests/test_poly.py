from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from genmat.errors import DegreeRangeError, DivisibilityError, NotAUnitError, StructureError
from genmat.poly import (
    GF2,
    QQ,
    PolyRing,
    TruncatedPolynomial,
    exact_divide,
    integers_mod,
    invert_unit,
    padic_valuation,
)
from strategies import COEFF_RINGS, SMALL_VARS, polys

RINGS = {name: PolyRing(c, SMALL_VARS, 6) for name, c in COEFF_RINGS.items()}


@pytest.mark.parametrize("name", sorted(RINGS))
def test_ring_axioms(name):
    R = RINGS[name]
    P = polys(R)

    @given(P, P, P)
    def check(f, g, h):
        assert f + g == g + f
        assert (f + g) + h == f + (g + h)
        assert f * g == g * f
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert f + R.zero() == f and f * R.one() == f
        assert (f - f).is_zero()
        assert -(-f) == f

    check()


def test_truncation_drops_high_degree():
    R = PolyRing(QQ, SMALL_VARS, 3)
    a, b, c = R.gens()
    assert (a * a * a * b).is_zero()
    assert (c * a).degree() == 3
    assert (c * c).is_zero()


def test_coefficient_reduction():
    R = PolyRing(integers_mod(3, 2), SMALL_VARS, 4)
    a = R.var("a")
    assert (a.scale(9)).is_zero()
    assert a.scale(10) == a
    G = PolyRing(GF2, SMALL_VARS, 4)
    assert (G.var("a") + G.var("a")).is_zero()


def test_inverse_of_unit():
    R = PolyRing(QQ, SMALL_VARS, 6)
    a, b, c = R.gens()
    f = R.one() + a - c.scale(Fraction(1, 3)) + a * b
    assert f * invert_unit(f) == R.one()
    with pytest.raises(NotAUnitError):
        invert_unit(a)


def test_exact_divide_and_failure():
    R = PolyRing(QQ, SMALL_VARS, 8)
    a, b, c = R.gens()
    g = a + b
    q = a * c + b.scale(3)
    assert exact_divide(g * q, g) == q
    with pytest.raises(DivisibilityError):
        exact_divide(g * q + a * a * a * a * a, b * b)


@given(st.integers(-10**6, 10**6).filter(bool), st.integers(1, 10**6))
def test_padic_valuation_multiplicative(n, d):
    q = Fraction(n, d)
    for p in (2, 3):
        assert padic_valuation(q * p, p) == padic_valuation(q, p) + 1
        assert padic_valuation(q * q, p) == 2 * padic_valuation(q, p)


def test_padic_valuation_examples():
    assert padic_valuation(Fraction(1, 2), 2) == -1
    assert padic_valuation(12, 2) == 2
    assert padic_valuation(Fraction(9, 4), 3) == 2


def test_json_roundtrip():
    R = PolyRing(QQ, SMALL_VARS, 6)
    a, b, c = R.gens()
    f = a.scale(Fraction(-2, 3)) + b * c + R.one()
    assert TruncatedPolynomial.from_json(f.to_json()) == f


def test_homogeneous_components_sum_back():
    R = PolyRing(QQ, SMALL_VARS, 6)
    a, b, c = R.gens()
    f = R.one() + a + b * c + a * a * c
    total = R.zero()
    for d in f.degrees():
        total = total + f.homogeneous_component(d)
    assert total == f
    assert f.min_degree() == 0


def test_bad_inputs():
    with pytest.raises(DegreeRangeError):
        PolyRing(QQ, SMALL_VARS, -1)
    with pytest.raises(StructureError):
        QQ(0.5)
    with pytest.raises(StructureError):
        PolyRing(QQ, SMALL_VARS, 3).var("a") + PolyRing(GF2, SMALL_VARS, 3).var("a")
