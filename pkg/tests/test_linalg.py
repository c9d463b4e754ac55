from fractions import Fraction

import pytest
import sympy
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix
from hypothesis import given, settings
from hypothesis import strategies as st

from genmat import linalg

entries = st.integers(-4, 4)
matrices = st.integers(1, 5).flatmap(
    lambda ncols: st.lists(st.lists(entries, min_size=ncols, max_size=ncols), min_size=1, max_size=5)
)


def as_vectors(rows):
    return [{j: c for j, c in enumerate(r) if c} for r in rows]


@settings(max_examples=300)
@given(matrices)
def test_rank_matches_sympy(rows):
    assert linalg.rank(as_vectors(rows)) == sympy.Matrix(rows).rank()


@settings(max_examples=300)
@given(matrices, st.sampled_from([2, 3, 5]))
def test_rank_mod_p_matches_sympy(rows, p):
    expected = DomainMatrix.from_Matrix(sympy.Matrix(rows)).convert_to(GF(p)).rank()
    assert linalg.rank(as_vectors(rows), p) == expected


@settings(max_examples=300)
@given(matrices)
def test_kernel_relations_vanish(rows):
    vecs = as_vectors(rows)
    rels = linalg.kernel(vecs)
    assert len(rels) == len(rows) - sympy.Matrix(rows).rank()
    for rel in rels:
        total = {}
        for i, c in rel.items():
            for j, v in vecs[i].items():
                total[j] = total.get(j, 0) + c * v
        assert not any(total.values())


@settings(max_examples=300)
@given(matrices, st.lists(entries, min_size=5, max_size=5))
def test_solve_in_span(rows, combo):
    vecs = as_vectors(rows)
    target = {}
    for c, v in zip(combo, vecs):
        for j, x in v.items():
            target[j] = target.get(j, 0) + c * x
    target = {j: x for j, x in target.items() if x}
    sol = linalg.solve_in_span(vecs, target)
    assert sol is not None
    back = {}
    for i, c in sol.items():
        for j, x in vecs[i].items():
            back[j] = back.get(j, 0) + c * x
    assert {j: x for j, x in back.items() if x} == target


def test_p_integral_solve_prefers_integral_solution():
    # columns 2*e1 and 3*e1: 1 = (-1)*2 + 1*3 is 2-integral though 1/2 * 2 is the naive choice
    cols = [{0: 2}, {0: 3}]
    sol = linalg.p_integral_solve(cols, {0: 1}, 2)
    assert sum(c * v[0] for c, v in zip(sol, cols)) == 1
    assert all(Fraction(c).denominator % 2 for c in sol)


def test_p_integral_solve_failure_modes():
    assert linalg.p_integral_solve([{0: 1}], {1: 1}, 3) is None
    with pytest.raises(ValueError):
        linalg.p_integral_solve([{0: 3}], {0: 1}, 3)


def test_local_lattice_basis():
    A = [[2, 0], [0, Fraction(1, 3)]]
    basis = linalg.local_lattice_basis(A, 2)
    for y in basis:
        for row in A:
            assert Fraction(sum(a * c for a, c in zip(row, y))).denominator % 2 == 1
    # e1/2 is in the lattice, so some basis vector has 2-adic valuation -1
    assert any(Fraction(y[0]).denominator % 2 == 0 for y in basis)
