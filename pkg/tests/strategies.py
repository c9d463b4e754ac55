"""Hypothesis strategies shared by the test modules."""
from fractions import Fraction

from hypothesis import strategies as st

from genmat.char2.ring import RElement
from genmat.char2.tpoly import TPoly
from genmat.freealg import NCSeries
from genmat.matrix import Mat2
from genmat.poly import GF2, QQ, PolyRing, VariableSet, integers_mod

SMALL_VARS = VariableSet(("a", "b", "c"), (1, 1, 2))
COEFF_RINGS = {"QQ": QQ, "GF2": GF2, "Z/9": integers_mod(3, 2)}


def rationals():
    return st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


def polys(ring: PolyRing, max_terms: int = 4):
    coeff = rationals() if ring.coeffs == QQ else st.integers(-10, 10)
    mono = st.tuples(*[st.integers(0, 3) for _ in ring.vars.names])
    return st.dictionaries(mono, coeff, max_size=max_terms).map(ring.from_dict)


def mats(ring: PolyRing, max_terms: int = 2):
    p = polys(ring, max_terms)
    return st.builds(Mat2, p, p, p, p)


def tpolys(cap: int, max_terms: int = 4):
    mono = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 2))
    return st.lists(mono, max_size=max_terms).map(lambda ms: TPoly.from_monomials(cap, ms))


def relements(cap: int):
    t = tpolys(cap, 3)
    return st.tuples(t, t, t, t).map(lambda cs: RElement(cap, cs))


def ncseries(cap: int, coeffs=QQ):
    word = st.text(alphabet="xy", max_size=4)
    coeff = rationals() if coeffs == QQ else st.integers(0, 1)
    return st.dictionaries(word, coeff, max_size=5).map(lambda d: NCSeries(coeffs, cap, d))
