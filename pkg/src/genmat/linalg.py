"""Exact linear algebra on sparse vectors over QQ or GF(p), plus p-local solving.

Vectors are dicts ``coordinate -> value`` with comparable coordinates.  Over QQ
values are ints or Fractions; over GF(p) they are reduced ints.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .poly import padic_valuation


def _canon(c, p):
    if p is None:
        if type(c) is Fraction and c.denominator == 1:
            return c.numerator
        return c
    if isinstance(c, Fraction):
        return c.numerator * pow(c.denominator, -1, p) % p
    return c % p


def _inv(c, p):
    if p is None:
        return Fraction(1) / c
    return pow(c, -1, p)


def _axpy(y: dict, a, x: dict, p):
    """y += a*x in place (drops zeros)."""
    for k, v in x.items():
        s = _canon(y.get(k, 0) + a * v, p)
        if s:
            y[k] = s
        else:
            y.pop(k, None)


class Echelon:
    """Incrementally built echelon basis, tracking how each row came from the inputs."""

    def __init__(self, p: int | None = None):
        self.p = p
        self.pivots: list = []
        self.rows: dict = {}   # pivot -> (vector with 1 at pivot, combination)

    def __len__(self):
        return len(self.pivots)

    def reduce(self, vec: dict, combo: dict | None = None):
        p = self.p
        vec = {k: _canon(v, p) for k, v in vec.items() if _canon(v, p)}
        combo = dict(combo or {})
        for piv in self.pivots:
            c = vec.get(piv)
            if c:
                row, rcombo = self.rows[piv]
                _axpy(vec, -c, row, p)
                _axpy(combo, -c, rcombo, p)
        return vec, combo

    def add(self, vec: dict, tag=None):
        """Insert ``vec``; returns ``None`` if independent, else a kernel relation."""
        combo = {} if tag is None else {tag: 1}
        vec, combo = self.reduce(vec, combo)
        if not vec:
            return combo
        piv = min(vec)
        inv = _inv(vec[piv], self.p)
        vec = {k: _canon(v * inv, self.p) for k, v in vec.items()}
        combo = {k: _canon(v * inv, self.p) for k, v in combo.items()}
        self.pivots.append(piv)
        self.rows[piv] = (vec, combo)
        return None


def rank(vectors: Iterable[dict], p: int | None = None) -> int:
    ech = Echelon(p)
    for v in vectors:
        ech.add(v)
    return len(ech)


def kernel(vectors: Sequence[dict], p: int | None = None) -> list:
    """Basis of relations ``sum c_i v_i = 0``, each as a dict index -> coefficient."""
    ech = Echelon(p)
    rels = []
    for i, v in enumerate(vectors):
        rel = ech.add(v, i)
        if rel is not None:
            rels.append(rel)
    return rels


def solve_in_span(vectors: Sequence[dict], target: dict, p: int | None = None):
    """Some ``c`` with ``sum c_i v_i == target`` or ``None``."""
    ech = Echelon(p)
    for i, v in enumerate(vectors):
        ech.add(v, i)
    rem, combo = ech.reduce(target)
    if rem:
        return None
    return {k: _canon(-v, p) for k, v in combo.items() if v}


def pivot_coordinates(vectors: Sequence[dict]) -> list:
    """Coordinates on which the span of ``vectors`` projects isomorphically."""
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return list(ech.pivots)


def local_smith(A: list, p: int, b: list | None = None):
    """Diagonalise a dense rational matrix with Z_(p)-unimodular row/column moves.

    Returns ``(diag, colops, b)`` where ``diag`` lists the pivots, ``colops``
    records the column moves (to map solutions back) and ``b`` is the
    right-hand side after the row moves.  ``A`` is modified in place.
    """
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    b = list(b) if b is not None else None
    ops = []
    diag = []
    for k in range(min(nrows, ncols)):
        best = None
        for i in range(k, nrows):
            row = A[i]
            for j in range(k, ncols):
                c = row[j]
                if c:
                    v = padic_valuation(c, p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        _, i, j = best
        if i != k:
            A[i], A[k] = A[k], A[i]
            if b is not None:
                b[i], b[k] = b[k], b[i]
        if j != k:
            for row in A:
                row[j], row[k] = row[k], row[j]
            ops.append(("swap", j, k))
        piv = A[k][k]
        rowk = A[k]
        for i in range(k + 1, nrows):
            c = A[i][k]
            if c:
                f = Fraction(c) / piv
                row = A[i]
                for j in range(k, ncols):
                    if rowk[j]:
                        row[j] = _canon(row[j] - f * rowk[j], None)
                if b is not None:
                    b[i] = _canon(b[i] - f * b[k], None)
        for j in range(k + 1, ncols):
            c = rowk[j]
            if c:
                f = Fraction(c) / piv
                rowk[j] = 0
                ops.append(("add", j, k, f))
        diag.append(piv)
    return diag, ops, b


def _apply_colops(ops, y: list) -> list:
    x = list(y)
    for op in reversed(ops):
        if op[0] == "swap":
            _, j, k = op
            x[j], x[k] = x[k], x[j]
        else:
            _, j, k, f = op  # column j -= f * column k
            x[k] = _canon(x[k] - f * x[j], None)
    return x


def p_integral_solve(columns: Sequence[dict], target: dict, p: int):
    """A solution of ``sum c_i columns_i == target`` with every ``c_i`` p-integral.

    Returns a list of coefficients, or ``None`` when no rational solution
    exists, or raises ``ValueError`` when rational solutions exist but none is
    p-integral.
    """
    if solve_in_span(columns, target) is None:
        return None
    coords = pivot_coordinates(columns)
    A = [[col.get(c, 0) for col in columns] for c in coords]
    rhs = [target.get(c, 0) for c in coords]
    if not coords:
        return [0] * len(columns)
    diag, ops, rhs = local_smith(A, p, rhs)
    n = len(columns)
    y = [0] * n
    for k, d in enumerate(diag):
        y[k] = _canon(Fraction(rhs[k]) / d, None)
        if padic_valuation(y[k], p) < 0:
            raise ValueError("no p-integral solution")
    if any(rhs[k] for k in range(len(diag), len(rhs))):
        return None
    x = _apply_colops(ops, y)
    check = {}
    for c, col in zip(x, columns):
        if c:
            _axpy(check, c, col, None)
    diff = dict(check)
    _axpy(diff, -1, target, None)
    if diff:
        raise AssertionError("local Smith solve produced a wrong solution")
    return x


def local_lattice_basis(A: list, p: int) -> list:
    """Columns spanning ``{c : A c has p-integral entries}`` for full-column-rank ``A``."""
    ncols = len(A[0])
    work = [list(r) for r in A]
    diag, ops, _ = local_smith(work, p)
    if len(diag) != ncols:
        raise ValueError("matrix is not of full column rank")
    basis = []
    for k in range(ncols):
        y = [0] * ncols
        y[k] = _canon(Fraction(1) / diag[k], None)
        basis.append(_apply_colops(ops, y))
    return basis
