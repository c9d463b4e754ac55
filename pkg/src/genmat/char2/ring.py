"""The ring generated by a determinant-zero pseudo-generic pair over GF2 and its traces.

It is a free module over the trace ring T = GF2[lam, theta, vartheta] on the
basis 1, x, y, xy.  :class:`RElement` stores the four T-coefficients and
multiplies with the table forced by x^2 = lam x, y^2 = theta y,
xyx = vartheta x, yxy = vartheta y and
yx = xy + theta x + lam y + vartheta + lam theta.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import DivisibilityError, MembershipError, StructureError
from ..matrix import Mat2
from ..poly import GF2, PSEUDO4, PolyRing, exact_divide
from .tpoly import TPoly, tring

BASIS_DEGREES = (0, 1, 1, 2)   # 1, x, y, xy
J_DEGREES = (3, 3, 4, 4)       # [x,y]x, [x,y]y, [x,y]^2, [x,y]xy

# e_i * e_j = sum of (k, (a, b, c)) meaning lam^a theta^b vartheta^c e_k
_TABLE = {
    (1, 1): [(1, (1, 0, 0))],
    (1, 2): [(3, (0, 0, 0))],
    (1, 3): [(3, (1, 0, 0))],
    (2, 1): [(3, (0, 0, 0)), (1, (0, 1, 0)), (2, (1, 0, 0)), (0, (0, 0, 1)), (0, (1, 1, 0))],
    (2, 2): [(2, (0, 1, 0))],
    (2, 3): [(2, (0, 0, 1))],
    (3, 1): [(1, (0, 0, 1))],
    (3, 2): [(3, (0, 1, 0))],
    (3, 3): [(3, (0, 0, 1))],
}


class RElement:
    """``c0 + c1 x + c2 y + c3 xy`` with TPoly coefficients, truncated at total degree ``cap``."""

    __slots__ = ("cap", "c")

    def __init__(self, cap: int, coeffs):
        self.cap = cap
        r = tring(cap)
        out = []
        for k, t in enumerate(coeffs):
            if t.ring is not r:
                t = t.with_cap(cap)
            out.append(TPoly(r, t.bits & r.mask_upto(cap - BASIS_DEGREES[k])))
        self.c = tuple(out)

    @classmethod
    def zero_at(cls, cap: int) -> "RElement":
        z = TPoly.zero(cap)
        return cls(cap, (z, z, z, z))

    @classmethod
    def basis(cls, cap: int, k: int) -> "RElement":
        z, o = TPoly.zero(cap), TPoly.one(cap)
        return cls(cap, tuple(o if i == k else z for i in range(4)))

    @classmethod
    def gens(cls, cap: int):
        return cls.basis(cap, 1), cls.basis(cap, 2)

    @classmethod
    def scalar(cls, t: TPoly, cap: int | None = None) -> "RElement":
        cap = t.cap if cap is None else cap
        z = TPoly.zero(cap)
        return cls(cap, (t.with_cap(cap), z, z, z))

    def one(self) -> "RElement":
        return RElement.basis(self.cap, 0)

    def zero(self) -> "RElement":
        return RElement.zero_at(self.cap)

    def _check(self, other):
        if not isinstance(other, RElement) or other.cap != self.cap:
            raise StructureError("RElement cap mismatch")

    def __add__(self, other):
        self._check(other)
        return RElement(self.cap, tuple(a + b for a, b in zip(self.c, other.c)))

    __sub__ = __add__

    def __neg__(self):
        return self

    def scale(self, s) -> "RElement":
        if isinstance(s, TPoly):
            return RElement(self.cap, tuple(a * s.with_cap(self.cap) for a in self.c))
        return self if int(s) & 1 else self.zero()

    def __mul__(self, other):
        if isinstance(other, (int, TPoly)):
            return self.scale(other)
        self._check(other)
        cap = self.cap
        r = tring(cap)
        acc = [0, 0, 0, 0]
        for i, p in enumerate(self.c):
            if not p.bits:
                continue
            for j, q in enumerate(other.c):
                if not q.bits:
                    continue
                room = cap - BASIS_DEGREES[i] - BASIS_DEGREES[j]
                if room < 0:
                    continue
                pq = (p * q).bits & r.mask_upto(room)
                if not pq:
                    continue
                if i == 0:
                    acc[j] ^= pq
                elif j == 0:
                    acc[i] ^= pq
                else:
                    for k, mono in _TABLE[(i, j)]:
                        acc[k] ^= pq << r.pos(*mono)
        return RElement(cap, tuple(TPoly(r, b & r.valid) for b in acc))

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, RElement) and self.cap == other.cap and self.c == other.c

    def __hash__(self):
        return hash((self.cap, self.c))

    def is_zero(self) -> bool:
        return not any(t.bits for t in self.c)

    def homogeneous_component(self, d: int) -> "RElement":
        return RElement(self.cap, tuple(t.homogeneous_component(d - BASIS_DEGREES[k]) for k, t in enumerate(self.c)))

    def degrees(self) -> list:
        return sorted({d + BASIS_DEGREES[k] for k, t in enumerate(self.c) for d in t.degrees()})

    def min_degree(self):
        ds = self.degrees()
        return ds[0] if ds else None

    def with_cap(self, cap: int) -> "RElement":
        return RElement(cap, tuple(t.with_cap(cap) for t in self.c))

    def trace(self) -> TPoly:
        """t(c0 + c1 x + c2 y + c3 xy) = c1 lam + c2 theta + c3 vartheta (t(1) = 0 in char 2)."""
        _, c1, c2, c3 = self.c
        return c1.mul_mono(1, 0, 0) + c2.mul_mono(0, 1, 0) + c3.mul_mono(0, 0, 1)

    def to_mat(self, ring: PolyRing | None = None) -> Mat2:
        """Image in 2x2 matrices over GF2[x11, x12, y11, y21] (the pseudo-generic pair)."""
        ring = ring or PolyRing(GF2, PSEUDO4, self.cap)
        x11, x12, y11, y21 = ring.gens()
        z = ring.zero()
        x = Mat2(x11, x12, z, z)
        y = Mat2(y11, z, y21, z)
        basis = (Mat2.identity(ring), x, y, x * y)
        out = Mat2.zeros(ring)
        for t, b in zip(self.c, basis):
            if t.bits:
                out = out + t.to_base(ring) * b
        return out

    def __str__(self):
        names = ("1", "x", "y", "xy")
        parts = [f"({t})*{n}" if n != "1" else f"({t})" for t, n in zip(self.c, names) if t.bits]
        return " + ".join(parts) or "0"

    def __repr__(self):
        return f"RElement({self}; cap={self.cap})"

    def to_json(self) -> dict:
        return {"schema": "genmat.relement/1", "cap": self.cap,
                "coefficients": [t.to_poly().to_json() for t in self.c]}


def bracket_xy(cap: int) -> RElement:
    x, y = RElement.gens(cap)
    return x * y + y * x


def j_generators(cap: int) -> tuple:
    """[x,y]x, [x,y]y, [x,y]^2, [x,y]xy as RElements."""
    x, y = RElement.gens(cap)
    c = bracket_xy(cap)
    return (c * x, c * y, c * c, c * x * y)


def delta_poly(cap: int) -> TPoly:
    """[x,y]^2 as a trace polynomial: vartheta^2 + lam theta vartheta."""
    lam, theta, vt = TPoly.gens(cap)
    return vt * vt + lam * theta * vt


@dataclass(frozen=True)
class JElement:
    """``a [x,y]x + b [x,y]y + c [x,y]^2 + d [x,y]xy`` with TPoly coefficients."""

    cap: int
    a: TPoly
    b: TPoly
    c: TPoly
    d: TPoly

    def __post_init__(self):
        r = tring(self.cap)
        for name, deg in zip("abcd", J_DEGREES):
            t = getattr(self, name)
            if t.ring is not r:
                t = t.with_cap(self.cap)
            object.__setattr__(self, name, TPoly(r, t.bits & r.mask_upto(self.cap - deg)))

    def coeffs(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def to_R(self) -> RElement:
        out = RElement.zero_at(self.cap)
        for t, g in zip(self.coeffs(), j_generators(self.cap)):
            if t.bits:
                out = out + g.scale(t)
        return out

    def __add__(self, other: "JElement") -> "JElement":
        return JElement(self.cap, *(p + q for p, q in zip(self.coeffs(), other.coeffs())))

    def is_zero(self) -> bool:
        return not any(t.bits for t in self.coeffs())

    def scale(self, t: TPoly) -> "JElement":
        t = t.with_cap(self.cap)
        return JElement(self.cap, *(p * t for p in self.coeffs()))

    def with_cap(self, cap: int) -> "JElement":
        return JElement(cap, *(t.with_cap(cap) for t in self.coeffs()))

    def degrees(self) -> list:
        return sorted({d + J_DEGREES[k] for k, t in enumerate(self.coeffs()) for d in t.degrees()})

    def __str__(self):
        names = ("[x,y]x", "[x,y]y", "[x,y]^2", "[x,y]xy")
        parts = [f"({t})*{n}" for t, n in zip(self.coeffs(), names) if t.bits]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"schema": "genmat.jelement/1", "cap": self.cap,
                "coefficients": [t.to_poly().to_json() for t in self.coeffs()]}


# -- recovery of coordinates from traces ---------------------------------------

HEADROOM = 8


def r_coefficients(a: RElement) -> RElement:
    """Recover the four T-coordinates of ``a`` from traces alone (engine-level check).

    t(x[x,y] a [x,y] y) = c0 vartheta delta, t([x,y] y a) = c1 delta,
    t([x,y] a x) = c2 delta, t([x,y] a) = c3 delta.
    """
    big = a.cap + HEADROOM
    a = a.with_cap(big)
    x, y = RElement.gens(big)
    c = bracket_xy(big)
    c0 = (x * c * a * c * y).trace().div_vartheta().div_delta()
    c1 = (c * y * a).trace().div_delta()
    c2 = (c * a * x).trace().div_delta()
    c3 = (c * a).trace().div_delta()
    return RElement(a.cap - HEADROOM, (c0, c1, c2, c3))


def to_J_coefficients(a: RElement) -> JElement:
    """Coordinates of an element of the ideal J in the basis [x,y]x, [x,y]y, [x,y]^2, [x,y]xy.

    t([x,y] y a) = (vartheta + lam theta) delta * a_1,
    t([x,y] x a) = (vartheta + lam theta) delta * a_2,
    t(x a [x,y] y) = delta^2 * a_3,  t(a) = delta * a_4.
    Raises MembershipError if ``a`` is not in J.
    """
    cap = a.cap
    big = cap + HEADROOM
    A = a.with_cap(big)
    x, y = RElement.gens(big)
    c = bracket_xy(big)
    try:
        ja = (c * y * A).trace().div_delta().div_vartheta_plus_lamtheta()
        jb = (c * x * A).trace().div_delta().div_vartheta_plus_lamtheta()
        jc = (x * A * c * y).trace().div_delta().div_delta()
        jd = A.trace().div_delta()
    except DivisibilityError as exc:
        raise MembershipError("element is not in the ideal generated by [x,y]") from exc
    out = JElement(cap, ja, jb, jc, jd)
    if out.to_R() != a:
        raise MembershipError("element is not in the ideal generated by [x,y]")
    return out


def _base_to_tpoly(f, cap):
    try:
        return TPoly.from_base(f, cap)
    except StructureError as exc:
        raise MembershipError("coefficient is not a polynomial in the traces") from exc


def to_R_coefficients(m: Mat2) -> RElement:
    """Coordinates over T of a pseudo-generic GF2 matrix ``m`` in the basis 1, x, y, xy.

    Works with matrix traces and exact polynomial division only; raises
    MembershipError if ``m`` is not in the ring generated by x, y and traces.
    """
    ring = m.ring
    if ring.coeffs != GF2 or ring.vars != PSEUDO4:
        raise StructureError("expected a GF2 matrix over x11, x12, y11, y21")
    cap = ring.cap
    big = ring.with_cap(cap + HEADROOM)
    M = m.with_cap(big.cap)
    x11, x12, y11, y21 = big.gens()
    z = big.zero()
    x = Mat2(x11, x12, z, z)
    y = Mat2(y11, z, y21, z)
    c = x * y + y * x
    txy = x11 * y11 + x12 * y21
    dlt = txy * txy + x11 * y11 * txy
    try:
        c0 = exact_divide((x * c * M * c * y).trace(), txy * dlt)
        c1 = exact_divide((c * y * M).trace(), dlt)
        c2 = exact_divide((c * M * x).trace(), dlt)
        c3 = exact_divide((c * M).trace(), dlt)
    except DivisibilityError as exc:
        raise MembershipError("matrix is not in the ring generated by x, y over the traces") from exc
    out = RElement(cap, tuple(_base_to_tpoly(t, cap) for t in (c0, c1, c2, c3)))
    if out.to_mat(ring) != m:
        raise MembershipError("matrix is not in the ring generated by x, y over the traces")
    return out


def mat_to_J_coefficients(m: Mat2) -> JElement:
    return to_J_coefficients(to_R_coefficients(m))
