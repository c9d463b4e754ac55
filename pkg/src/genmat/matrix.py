"""2x2 matrices over truncated polynomial rings and the trace identities they obey."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import StructureError
from .poly import QQ, PolyRing, TruncatedPolynomial, GENERIC8
from .units import Unit

SCHEMA_MAT2 = "genmat.mat2/1"


class Mat2:
    """A 2x2 matrix ``[[a, b], [c, d]]`` with entries in one :class:`PolyRing`."""

    __slots__ = ("ring", "a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        ring = a.ring
        for e in (b, c, d):
            if e.ring is not ring and e.ring != ring:
                raise StructureError("matrix entries must share one ring")
        self.ring = ring
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def identity(cls, ring: PolyRing) -> "Mat2":
        o, z = ring.one(), ring.zero()
        return cls(o, z, z, o)

    @classmethod
    def zeros(cls, ring: PolyRing) -> "Mat2":
        z = ring.zero()
        return cls(z, z, z, z)

    @classmethod
    def scalar(cls, s: TruncatedPolynomial) -> "Mat2":
        z = s.ring.zero()
        return cls(s, z, z, s)

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def one(self) -> "Mat2":
        return Mat2.identity(self.ring)

    def zero(self) -> "Mat2":
        return Mat2.zeros(self.ring)

    @property
    def cap(self) -> int:
        return self.ring.cap

    def _check(self, other: "Mat2"):
        if self.ring is not other.ring and self.ring != other.ring:
            raise StructureError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        self._check(other)
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        self._check(other)
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self):
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        if isinstance(other, Mat2):
            self._check(other)
            a, b, c, d = self.entries()
            e, f, g, h = other.entries()
            return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        if isinstance(other, TruncatedPolynomial):
            return Mat2(*(x * other for x in self.entries()))
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, TruncatedPolynomial):
            return Mat2(*(other * x for x in self.entries()))
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "Mat2":
        return Mat2(*(x.scale(c) for x in self.entries()))

    def __pow__(self, e: int):
        out, base = self.one(), self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries())

    def trace(self) -> TruncatedPolynomial:
        return self.a + self.d

    def det(self) -> TruncatedPolynomial:
        return self.a * self.d - self.b * self.c

    def min_degree(self):
        degs = [x.min_degree() for x in self.entries() if not x.is_zero()]
        return min(degs) if degs else None

    def degrees(self) -> list:
        return sorted({d for x in self.entries() for d in x.degrees()})

    def homogeneous_component(self, i: int) -> "Mat2":
        return Mat2(*(x.homogeneous_component(i) for x in self.entries()))

    def map(self, fn: Callable) -> "Mat2":
        return Mat2(*(fn(x) for x in self.entries()))

    def with_cap(self, cap: int) -> "Mat2":
        return self.map(lambda x: x.with_cap(cap))

    def coordinates(self) -> dict:
        """Sparse vector ``(entry index, exponents) -> coefficient``."""
        out = {}
        for idx, x in enumerate(self.entries()):
            for exps, c in x.terms().items():
                out[(idx, exps)] = c
        return out

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"

    def __repr__(self):
        return f"Mat2({self})"

    def to_json(self) -> dict:
        return {"schema": SCHEMA_MAT2, "entries": [x.to_json() for x in self.entries()]}

    @classmethod
    def from_json(cls, data) -> "Mat2":
        if data.get("schema", SCHEMA_MAT2) != SCHEMA_MAT2:
            raise StructureError(f"unsupported schema {data.get('schema')!r}")
        return cls(*(TruncatedPolynomial.from_json(e) for e in data["entries"]))


# Spec-level names for the group of units 1 + (positive degree part).
UnitMat2 = Unit


def mat_mul(a: Mat2, b: Mat2) -> Mat2:
    return a * b


def mat_add(a: Mat2, b: Mat2) -> Mat2:
    return a + b


def mat_scale(s, a: Mat2) -> Mat2:
    return s * a


def trace(a: Mat2) -> TruncatedPolynomial:
    return a.trace()


def det(a: Mat2) -> TruncatedPolynomial:
    return a.det()


def lie_bracket(a, b):
    """``ab - ba``; works for any associative algebra element type."""
    return a * b - b * a


def nested_bracket(*elems):
    """Left-normed ``[a, b, c, ...] = [[a, b], c], ...``."""
    out = elems[0]
    for e in elems[1:]:
        out = lie_bracket(out, e)
    return out


def group_commutator(g: Unit, h: Unit) -> Unit:
    return g.commutator(h)


def cayley_hamilton_residual(a: Mat2) -> Mat2:
    """``a^2 - t(a) a + det(a) 1``; identically zero for 2x2 matrices."""
    return a * a - a.trace() * a + Mat2.scalar(a.det())


def matrix_exp(a: Mat2) -> Mat2:
    """exp of a matrix without constant part, over the rationals."""
    if a.ring.coeffs != QQ:
        raise StructureError("matrix_exp needs rational coefficients")
    md = a.min_degree()
    out = a.one()
    if md is None:
        return out
    if md == 0:
        raise StructureError("matrix_exp needs a matrix without constant part")
    term = a.one()
    for k in range(1, a.cap // md + 1):
        term = (term * a).scale(Fraction(1, k))
        out = out + term
    return out


def matrix_log(g: Mat2) -> Mat2:
    """log of ``1 + a`` with ``a`` of positive degree, over the rationals."""
    if g.ring.coeffs != QQ:
        raise StructureError("matrix_log needs rational coefficients")
    a = g - g.one()
    md = a.min_degree()
    if md is None:
        return a
    if md == 0:
        raise StructureError("matrix_log needs 1 + (positive degree part)")
    out = a.zero()
    power = a.one()
    for k in range(1, a.cap // md + 1):
        power = power * a
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
    return out


# -- random test data ---------------------------------------------------------

def random_poly(ring: PolyRing, rng: random.Random, max_deg: int = 2, nterms: int = 3,
                coeff_range: int = 3, min_deg: int = 1) -> TruncatedPolynomial:
    terms = {}
    nv = len(ring.vars)
    for _ in range(nterms):
        d = rng.randint(min_deg, max_deg)
        exps = [0] * nv
        for _ in range(d):
            exps[rng.randrange(nv)] += 1
        c = rng.randint(-coeff_range, coeff_range)
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + c
    return TruncatedPolynomial(ring, terms)


def random_mat(ring: PolyRing, rng: random.Random, **kw) -> Mat2:
    return Mat2(*(random_poly(ring, rng, **kw) for _ in range(4)))


def random_traceless(ring: PolyRing, rng: random.Random, **kw) -> Mat2:
    p, q, r = (random_poly(ring, rng, **kw) for _ in range(3))
    return Mat2(p, q, r, -p)


def random_rank_one(ring: PolyRing, rng: random.Random, **kw) -> Mat2:
    """``u v^T``: determinant zero by construction."""
    u1, u2, v1, v2 = (random_poly(ring, rng, **kw) for _ in range(4))
    return Mat2(u1 * v1, u1 * v2, u2 * v1, u2 * v2)


# -- trace identities ---------------------------------------------------------

@dataclass
class LemmaReport:
    name: str
    checked: int = 0
    failures: int = 0

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.failures == 0

    def record(self, ok: bool):
        self.checked += 1
        if not ok:
            self.failures += 1


def _char2(ring: PolyRing) -> bool:
    return ring.coeffs.characteristic == 2


def check_general_pair(a: Mat2, b: Mat2) -> dict:
    """Identities valid for any pair of 2x2 matrices; returns name -> bool."""
    ring = a.ring
    ta, tb, tab = a.trace(), b.trace(), (a * b).trace()
    one = Mat2.identity(ring)
    out = {"cayley_hamilton": cayley_hamilton_residual(a).is_zero()}
    if _char2(ring):
        out["bracket_expansion"] = lie_bracket(a, b) == ta * b + tb * a + (tab + ta * tb) * one
        out["triple_bracket"] = nested_bracket(a, b, a) == ta * lie_bracket(a, b)
        ab = lie_bracket(a, b)
        power = one
        ok = True
        for _ in range(7):
            ok &= (ab * power).trace().is_zero()
            power = power * b
        out["bracket_power_trace"] = ok
    else:
        out["anticommutator_expansion"] = a * b + b * a == ta * b + tb * a + (tab - ta * tb) * one
        out["triple_bracket"] = nested_bracket(a, b, a) == (-ta) * lie_bracket(a, b) + (lie_bracket(a, b) * a).scale(2)
    return out


def check_traceless(a: Mat2) -> bool:
    sign = 1 if _char2(a.ring) else -1
    return a * a == Mat2.scalar(a.det().scale(sign))


def check_det_zero_pair(x: Mat2, y: Mat2) -> dict:
    """Identities for a pair of determinant-zero matrices."""
    tx, ty, txy = x.trace(), y.trace(), (x * y).trace()
    xy, yx = x * y, y * x
    br = lie_bracket(x, y)
    if _char2(x.ring):
        sq = txy * txy + tx * ty * txy
    else:
        sq = txy * txy - tx * ty * txy
    return {
        "square_x": x * x == tx * x,
        "square_y": y * y == ty * y,
        "square_xy": xy * xy == txy * xy,
        "square_yx": yx * yx == txy * yx,
        "xyx": xy * x == txy * x,
        "yxy": yx * y == txy * y,
        "bracket_square": br * br == Mat2.scalar(sq),
    }


def check_j_closure(x: Mat2, y: Mat2) -> dict:
    """Eight product rules showing that the ideal of [x,y] is closed under x (char 2)."""
    tx, txy = x.trace(), (x * y).trace()
    c = lie_bracket(x, y)
    cx, cy, c2, cxy = c * x, c * y, c * c, c * x * y
    return {
        "cx_x": cx * x == tx * cx,
        "cy_x": cy * x == c2 + cxy,
        "c2_x": c2 * x == txy * cx + tx * c2 + tx * cxy,
        "cxy_x": cxy * x == txy * cx,
        "x_cx": (x * cx).is_zero(),
        "x_cy": x * cy == (tx * c + cx) * y,
        "x_c2": x * c2 == c2 * x,
        "x_cxy": (x * cxy).is_zero(),
    }


def verify_trace_lemmas(coeffs, cap: int = 10, trials: int = 200, seed: int = 0) -> dict:
    """Run every trace identity on ``trials`` random instances over ``coeffs``.

    Returns name -> :class:`LemmaReport`.
    """
    rng = random.Random(seed)
    ring8 = PolyRing(coeffs, GENERIC8, cap)
    reports: dict = {}

    def rec(name, ok):
        reports.setdefault(name, LemmaReport(name)).record(bool(ok))

    for _ in range(trials):
        a = random_mat(ring8, rng)
        b = random_mat(ring8, rng)
        for k, v in check_general_pair(a, b).items():
            rec(k, v)
        rec("traceless_square", check_traceless(random_traceless(ring8, rng)))
        x = random_rank_one(ring8, rng, max_deg=1, nterms=2)
        y = random_rank_one(ring8, rng, max_deg=1, nterms=2)
        for k, v in check_det_zero_pair(x, y).items():
            rec("det0_" + k, v)
        if _char2(ring8):
            for k, v in check_j_closure(x, y).items():
                rec("jclosure_" + k, v)
    # the pseudo-generic pair itself
    from .words import GenericPair
    pair = GenericPair.pseudo4(coeffs, cap)
    for k, v in check_det_zero_pair(pair.x, pair.y).items():
        rec("pseudo_" + k, v)
    if _char2(ring8):
        for k, v in check_j_closure(pair.x, pair.y).items():
            rec("pseudo_jclosure_" + k, v)
    return reports


def verify_bch_commutator(cap: int = 4) -> bool:
    """log([e^z, e^w]) = [z,w] - [z,w,z]/2 - [z,w,w]/2 + (degree >= 4) for generic z, w."""
    ring = PolyRing(QQ, GENERIC8, cap)
    g = ring.gens()
    z = Mat2(*g[:4])
    w = Mat2(*g[4:])
    ez = Unit(matrix_exp(z) - z.one())
    ew = Unit(matrix_exp(w) - w.one())
    logc = matrix_log(ez.commutator(ew).value())
    zw = lie_bracket(z, w)
    predicted = zw - (nested_bracket(z, w, z) + nested_bracket(z, w, w)).scale(Fraction(1, 2))
    diff = logc - predicted
    return all(diff.homogeneous_component(i).is_zero() for i in range(min(cap, 3) + 1))
