import random

import pytest

from genmat.char2.modules import (
    breve_recipe_check,
    commutator_shape_check,
    decompose_UVW,
    good_catalog,
    in_level_n_square_part,
    in_J_n,
    in_level_n_xy_part,
    invariants_of,
    is_good,
    j_ideal_closure_check,
    j_level,
    j_part,
    phi_x,
    phi_y,
    pre_good_check,
    psi,
    random_j,
    verify_transport,
)
from genmat.char2.ring import JElement, RElement, delta_poly, to_J_coefficients
from genmat.char2.tpoly import TPoly
from genmat.errors import DegreeRangeError, MembershipError, StructureError
from genmat.words import GenericPair, evaluate_word, parse_word

CAP = 14


def jel(cap, **coeffs):
    z = TPoly.zero(cap)
    return JElement(cap, *(coeffs.get(k, z) for k in "abcd"))


def test_uvw_examples():
    lam, theta, vt = TPoly.gens(CAP)
    d = decompose_UVW(jel(CAP, a=lam ** 3))
    assert d.keys("u") == [(3, 6)] and not d.keys("v") and not d.keys("w")
    d = decompose_UVW(jel(CAP, c=lam ** 3 * vt))
    assert d.keys("v") == [(3, 9)] and not d.keys("u")
    d = decompose_UVW(jel(CAP, a=lam ** 2 * theta))
    assert d.keys("u") == [(2, 6)]


def test_uvw_splits_vartheta_square():
    # vartheta^2 = delta + lam theta vartheta: one coefficient lands in two (n, i) slots
    lam, theta, vt = TPoly.gens(CAP)
    d = decompose_UVW(jel(CAP, b=vt * vt))
    assert d.keys("u") == [(0, 7), (1, 7)]
    assert d.recompose() == jel(CAP, b=vt * vt)


def test_uvw_roundtrip_and_bounds_random():
    rng = random.Random(4)
    for _ in range(200):
        f = random_j(12, rng)
        d = decompose_UVW(f)
        assert d.recompose() == f
        assert d.bounds_ok()
        for (n, i), part in d.components.items():
            for piece in (part.u, part.v, part.w):
                assert in_J_n(piece, n)
                assert piece.degrees() in ([], [i])


def test_uvw_of_list_is_sum():
    rng = random.Random(5)
    f, g = random_j(10, rng), random_j(10, rng)
    assert decompose_UVW([f, g]).recompose() == f + g
    with pytest.raises(StructureError):
        decompose_UVW([])


def test_multiplying_by_trace_of_x_shifts_level():
    # a in J_n  <=>  t(x) a in J_{n+1}; t(x) a is formed in R and decomposed again
    rng = random.Random(6)
    cap = 18
    lam = TPoly.gens(cap)[0]
    tx = RElement.scalar(lam)
    for _ in range(150):
        a = random_j(cap, rng, max_deg=10)
        b = to_J_coefficients(tx * a.to_R())
        for n in range(0, 6):
            assert in_J_n(a, n) == in_J_n(b, n + 1)


def test_traceless_elements_have_no_xy_coefficient():
    rng = random.Random(7)
    cap = 16
    lam = TPoly.gens(cap)[0]
    seen_zero = 0
    for k in range(200):
        a = random_j(cap, rng, max_deg=8).scale(lam ** (k % 4))
        if k % 2:
            a = JElement(cap, a.a, a.b, a.c, TPoly.zero(cap))
        if a.to_R().trace().is_zero():
            seen_zero += 1
            assert a.d.is_zero()
        else:
            assert not a.d.is_zero()
    assert seen_zero >= 50


def test_filtration_predicates():
    lam, theta, vt = TPoly.gens(CAP)
    u = jel(CAP, a=lam ** 2, b=lam ** 3 * theta)
    assert in_level_n_xy_part(u, 2) and not in_level_n_xy_part(u, 3)
    v = jel(CAP, c=lam ** 4)
    assert in_level_n_square_part(v, 4) and not in_level_n_xy_part(v, 0)
    assert j_level(u + v) == 2
    assert j_level(jel(CAP)) is None


def test_j_closure_check():
    rep = j_ideal_closure_check(trials=30, cap=12, seed=1)
    assert rep["ok"] and all(rep["rules"].values())


@pytest.mark.parametrize("text", ["X Y x y", "[[X,Y],[X,Y,X]]", "[[X,Y],[X,y]]"])
def test_commutator_shape(text):
    out = commutator_shape_check(parse_word(text), cap=CAP)
    assert out["bracket_shape"]
    assert out.get("in_J", True)


def test_first_derived_word_is_not_in_J():
    out = commutator_shape_check(parse_word("X Y x y"), cap=CAP, second_derived=True)
    assert out["in_J"] is False


def test_breve_recipe():
    out = breve_recipe_check(parse_word("[[X,Y],[X,Y,X]]"), r=1, cap=24)
    assert out["ok"] and out["n"] >= 2
    with pytest.raises(DegreeRangeError):
        breve_recipe_check(parse_word("[[X,Y],[X,Y,X]]"), r=1, cap=8)


def test_j_part_rejects_first_derived():
    pair = GenericPair.pseudo4_char2(12)
    with pytest.raises(MembershipError):
        j_part(evaluate_word(parse_word("X Y x y"), pair))


@pytest.fixture(scope="module")
def small_catalog():
    return good_catalog(size=8, cap=20, seed=0, max_ibar=12)


def test_catalog_elements_are_good(small_catalog):
    assert len(small_catalog) == 8
    for _, g in small_catalog:
        c = invariants_of(g)
        assert c.good and is_good(g)
        assert c.n_of <= c.nbar <= c.ibar
        assert decompose_UVW(j_part(g)).components[(c.nbar, c.ibar)].u == c.min_x


def test_transport_on_small_catalog(small_catalog):
    rep = verify_transport([g for _, g in small_catalog])
    assert rep.ok and rep.checked == len(small_catalog)


def test_operator_shifts_directly(small_catalog):
    _, g = small_catalog[0]
    c = invariants_of(g)
    lam, theta, _ = TPoly.gens(g.cap)
    cx = invariants_of(phi_x(g))
    assert cx.nbar == c.nbar + 4 and cx.min_x == c.min_x.scale(lam ** 4)
    cy = invariants_of(phi_y(g))
    assert cy.nbar == c.nbar and cy.min_x == c.min_x.scale(theta)


def test_psi_keeps_level(small_catalog):
    _, g = small_catalog[0]
    c = invariants_of(g)
    cp = invariants_of(psi(g))
    assert cp.nbar == c.nbar and cp.ibar == c.ibar + 8
    assert cp.min_x == c.min_x.scale(delta_poly(g.cap) ** 2)


def test_transport_rejects_bad_elements():
    pair = GenericPair.pseudo4_char2(16)
    g = evaluate_word(parse_word("[[X,Y],[X,Y,X]]"), pair)
    cert = invariants_of(g)
    assert not cert.good and cert.violations
    with pytest.raises(StructureError):
        verify_transport([g])


def test_pre_good(small_catalog):
    _, g = small_catalog[0]
    out = pre_good_check(g)
    assert out["good"] and out["nbar_window"]


def test_goodness_certificate_json(small_catalog):
    doc = invariants_of(small_catalog[0][1]).to_json()
    assert doc["schema"] == "genmat.goodness/1"
    assert doc["good"] is True
