import random

import pytest
from hypothesis import given

from genmat.char2.modules import random_j, random_r
from genmat.char2.ring import (
    RElement,
    bracket_xy,
    delta_poly,
    j_generators,
    mat_to_J_coefficients,
    r_coefficients,
    to_J_coefficients,
    to_R_coefficients,
)
from genmat.char2.tpoly import TPoly
from genmat.errors import DivisibilityError, MembershipError, StructureError
from genmat.matrix import Mat2, lie_bracket
from genmat.poly import GF2, PSEUDO4, QQ, PolyRing
from genmat.words import GenericPair
from strategies import relements, tpolys

CAP = 10
BASE = PolyRing(GF2, PSEUDO4, CAP)


@given(tpolys(CAP), tpolys(CAP), tpolys(CAP))
def test_tpoly_ring_axioms(f, g, h):
    assert f + g == g + f
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f + f).is_zero()
    assert f * TPoly.one(CAP) == f


@given(tpolys(CAP), tpolys(CAP))
def test_tpoly_to_base_is_a_homomorphism(f, g):
    # the polynomial arithmetic in x11, x12, y11, y21 is an independent oracle
    assert (f * g).to_base(BASE) == f.to_base(BASE) * g.to_base(BASE)
    assert TPoly.from_base(f.to_base(BASE), CAP) == f


@given(tpolys(CAP, 6))
def test_tpoly_normal_form_roundtrip(f):
    s0, s1 = f.normal_form()
    assert TPoly.from_normal_form(CAP, s0, s1) == f


def test_delta_is_bracket_square():
    pair = GenericPair.pseudo4_char2(CAP)
    c = lie_bracket(pair.x, pair.y)
    sq = c * c
    assert sq.b.is_zero() and sq.c.is_zero() and sq.a == sq.d
    assert sq.a == delta_poly(CAP).to_base(BASE)


@given(tpolys(CAP), tpolys(CAP))
def test_tpoly_exact_divisions(f, g):
    lam, theta, vt = TPoly.gens(CAP + 8)
    f, g = f.with_cap(CAP + 8), g.with_cap(CAP + 8)
    assert (f * vt).div_vartheta().with_cap(CAP) == f.with_cap(CAP)
    assert (f * delta_poly(CAP + 8)).div_delta().with_cap(CAP) == f.with_cap(CAP)


def test_tpoly_division_failure():
    with pytest.raises(DivisibilityError):
        TPoly.one(6).div_vartheta()


def test_tpoly_from_base_rejects_non_traces():
    x11, x12, y11, y21 = BASE.gens()
    with pytest.raises(StructureError):
        TPoly.from_base(x12, CAP)


@given(relements(CAP), relements(CAP), relements(CAP))
def test_relement_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a * a.one() == a and a.one() * a == a


@given(relements(CAP), relements(CAP))
def test_relement_matrix_realisation(a, b):
    # multiplication is checked against honest 2x2 matrix products
    assert (a * b).to_mat(BASE) == a.to_mat(BASE) * b.to_mat(BASE)
    assert a.trace().to_base(BASE) == a.to_mat(BASE).trace()


def test_to_R_examples():
    pair = GenericPair.pseudo4_char2(CAP)
    lam, theta, vt = TPoly.gens(CAP)
    z, o = TPoly.zero(CAP), TPoly.one(CAP)
    assert to_R_coefficients(pair.x).c == (z, o, z, z)
    got = to_R_coefficients(lie_bracket(pair.x, pair.y))
    assert got.c == (vt + lam * theta, theta, lam, z)


def test_to_R_rejects_non_member():
    x11, x12, y11, y21 = BASE.gens()
    z = BASE.zero()
    with pytest.raises(MembershipError):
        to_R_coefficients(Mat2(z, z, x11, z))
    with pytest.raises(StructureError):
        to_R_coefficients(Mat2.zeros(PolyRing(QQ, PSEUDO4, 4)))


def test_to_J_examples():
    pair = GenericPair.pseudo4_char2(CAP)
    x, y = pair.x, pair.y
    c = lie_bracket(x, y)
    lam, theta, vt = TPoly.gens(CAP)
    z, o = TPoly.zero(CAP), TPoly.one(CAP)
    assert mat_to_J_coefficients(c * x).coeffs() == (o, z, z, z)
    assert mat_to_J_coefficients(x * c * y).coeffs() == (z, lam, z, o)
    j = mat_to_J_coefficients(y * c * x)
    assert j.to_R().to_mat(BASE) == y * c * x


def test_to_J_rejects_non_member():
    x, _ = RElement.gens(CAP)
    with pytest.raises(MembershipError):
        to_J_coefficients(x)


def test_round_trips_random():
    rng = random.Random(11)
    for _ in range(100):
        r = random_r(12, rng)
        assert r_coefficients(r) == r
        assert to_R_coefficients(r.to_mat()) == r
        j = random_j(12, rng)
        assert to_J_coefficients(j.to_R()) == j


def test_j_generators_match_brackets():
    x, y = RElement.gens(CAP)
    c = bracket_xy(CAP)
    assert j_generators(CAP) == (c * x, c * y, c * c, c * x * y)
    assert c == x * y + y * x
