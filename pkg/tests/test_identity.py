import json

import pytest

from genmat.char2.modules import good_catalog, invariants_of, phi_x
from genmat.errors import DegreeRangeError, UnsupportedPrimeError
from genmat.identity import (
    IdentityWord,
    build_identity,
    char2_correction_search,
    correction_step,
    default_modulus_exponent,
    evaluate_below,
    find_seed,
    seed_coordinates,
    seed_kernel_dimension,
    verify_identity,
)
from genmat.words import hall_basis_of_weight


def test_modulus_exponent():
    assert default_modulus_exponent(3, 12) == 5
    assert default_modulus_exponent(3, 9) == 4
    assert default_modulus_exponent(5, 5) == 3


def test_seed_is_primitive_kernel_vector():
    assert seed_kernel_dimension() == 3
    coords = seed_coordinates(3)
    assert len(coords) == len(hall_basis_of_weight(6)) == 9
    assert any(c % 3 for c in coords)
    # the seed word is 1 through degree 6 but not through degree 7
    w = find_seed(3)
    assert evaluate_below(w, 7, "pseudo").is_zero()
    assert not evaluate_below(w, 8, "pseudo").is_zero()


@pytest.fixture(scope="module")
def word9():
    return build_identity(3, 9)


def test_build_and_verify_small(word9):
    cert = verify_identity(word9)
    assert cert.ok
    assert cert.vanishes_below_target and cert.nontrivial_mod_p and cert.corrections_p_integral
    assert cert.integer_min_valuation >= 1
    assert [n for n, _ in word9.corrections] == [7, 8]


def test_correction_reports(word9):
    for rep in word9.steps:
        assert rep.min_valuation(3) >= 0
    assert word9.steps[1].trivial  # the even degree needs no correction


def test_truncated_word_fails_next_degree(word9):
    # dropping the degree-7 correction leaves a nonzero degree-7 part
    partial = IdentityWord(3, 8, word9.modulus_exponent, word9.seed)
    assert not evaluate_below(partial.word(), 8).is_zero()


def test_json_roundtrip(word9):
    doc = json.loads(json.dumps(word9.to_json()))
    back = IdentityWord.from_json(doc)
    assert back.factors() == word9.factors()
    assert verify_identity(back).vanishes_below_target


def test_other_prime():
    cert = verify_identity(build_identity(5, 8))
    assert cert.ok


def test_refusals():
    with pytest.raises(UnsupportedPrimeError, match="p = 2"):
        build_identity(2, 8)
    with pytest.raises(UnsupportedPrimeError):
        correction_step(IdentityWord(2, 8, 3, []), 7)
    with pytest.raises(UnsupportedPrimeError):
        build_identity(9, 8)
    with pytest.raises(DegreeRangeError):
        build_identity(3, 6)


@pytest.fixture(scope="module")
def char2_catalog():
    return [g for _, g in good_catalog(size=6, cap=24, seed=0, max_ibar=12)]


def test_char2_search_finite_improvement(char2_catalog):
    cat = char2_catalog
    g = phi_x(cat[0]) * phi_x(cat[1])
    res = char2_correction_search(g, cat)
    assert res.found and res.verified
    assert res.before == (13, 19) and res.after == (13, 20)
    after = invariants_of(phi_x(g * res.h))
    assert (after.nbar, after.ibar) == res.after


def test_char2_search_clears_min_x(char2_catalog):
    res = char2_correction_search(phi_x(char2_catalog[0]), char2_catalog)
    assert res.found and res.after == (None, None)


def test_char2_search_reports_failure(char2_catalog):
    res = char2_correction_search(phi_x(char2_catalog[0]), [])
    assert not res.found and "no catalog image" in res.reason
    assert res.to_json()["schema"] == "genmat.char2-search/1"
