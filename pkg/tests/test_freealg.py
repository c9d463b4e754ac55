import pytest
from hypothesis import given

from genmat.errors import StructureError
from genmat.freealg import NCSeries, free_generators, key_word, lie_bracket_nc, word_key
from genmat.matrix import lie_bracket
from genmat.poly import GF2, QQ
from genmat.words import GenericPair
from strategies import ncseries


@pytest.mark.parametrize("coeffs", [QQ, GF2], ids=["QQ", "GF2"])
def test_ring_axioms(coeffs):
    S = ncseries(5, coeffs)

    @given(S, S, S)
    def check(f, g, h):
        assert f + g == g + f
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h
        assert (f + g) * h == f * h + g * h
        assert f * f.one() == f and f.one() * f == f
        assert (f - f).is_zero()

    check()


@given(ncseries(5), ncseries(5), ncseries(5))
def test_jacobi(a, b, c):
    br = lie_bracket_nc
    assert (br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))).is_zero()


def test_noncommutative():
    x, y = free_generators(QQ, 4)
    assert x * y != y * x
    assert lie_bracket_nc(x, y) == x * y - y * x


def test_word_keys_roundtrip():
    for w in ("", "x", "y", "xyyx", "yyyyy"):
        assert key_word(word_key(w)) == w


@given(ncseries(4), ncseries(4))
def test_substitution_is_a_homomorphism(f, g):
    pair = GenericPair.generic8(QQ, 4)
    ev = lambda s: s.substitute(pair.x, pair.y)
    assert ev(f * g) == ev(f) * ev(g)
    assert ev(f + g) == ev(f) + ev(g)


def test_bracket_substitutes_to_matrix_bracket():
    x, y = free_generators(QQ, 4)
    pair = GenericPair.generic8(QQ, 4)
    assert lie_bracket_nc(x, y).substitute(pair.x, pair.y) == lie_bracket(pair.x, pair.y)


def test_truncation_and_mismatch():
    x, y = free_generators(QQ, 3)
    assert (x * x * y * y).is_zero()
    with pytest.raises(StructureError):
        x + NCSeries.generator(QQ, 4, "x")
