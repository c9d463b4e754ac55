"""Polynomials over GF2 in the trace coordinates lam = t(x), theta = t(y), vartheta = t(xy).

Stored as a bitset: monomial lam^a theta^b vartheta^c sits at bit
``a + B*b + B*B*c`` with ``B = 2*cap + 1``, so multiplying by a monomial is a
shift and a product is an XOR of shifted copies (no carries over GF2).
Weighted degree is ``a + b + 2c``; everything above ``cap`` is masked off.
"""
from __future__ import annotations

from functools import lru_cache

from ..errors import DegreeRangeError, DivisibilityError, StructureError
from ..poly import GF2, PSEUDO4, TRACE3, PolyRing, TruncatedPolynomial, VariableSet

SDELTA = VariableSet(("lam", "theta", "delta"), (1, 1, 4))


class TRing:
    """Layout shared by every TPoly with the same cap."""

    def __init__(self, cap: int):
        if cap < 0:
            raise DegreeRangeError("cap must be non-negative")
        self.cap = cap
        self.B = 2 * cap + 1
        self.BB = self.B * self.B
        self.decode = {}
        self.degmask = [0] * (cap + 1)
        for c in range(cap // 2 + 1):
            for b in range(cap - 2 * c + 1):
                for a in range(cap - 2 * c - b + 1):
                    pos = self.pos(a, b, c)
                    self.decode[pos] = (a, b, c)
                    self.degmask[a + b + 2 * c] |= 1 << pos
        self.upto = []
        acc = 0
        for m in self.degmask:
            acc |= m
            self.upto.append(acc)
        self.valid = acc
        self._lam_low = {}
        self._slices = {}

    def pos(self, a: int, b: int, c: int) -> int:
        return a + self.B * b + self.BB * c

    def mask_upto(self, d: int) -> int:
        if d < 0:
            return 0
        return self.upto[min(d, self.cap)]

    def lam_below(self, n: int) -> int:
        """Mask of monomials with lam-exponent < n."""
        got = self._lam_low.get(n)
        if got is None:
            got = 0
            for pos, (a, _, _) in self.decode.items():
                if a < n:
                    got |= 1 << pos
            self._lam_low[n] = got
        return got

    def slice_mask(self, c: int) -> int:
        """Mask of monomials with vartheta-exponent exactly c."""
        got = self._slices.get(c)
        if got is None:
            got = 0
            for pos, (_, _, cc) in self.decode.items():
                if cc == c:
                    got |= 1 << pos
            self._slices[c] = got
        return got

    def __repr__(self):
        return f"TRing(cap={self.cap})"


@lru_cache(maxsize=None)
def tring(cap: int) -> TRing:
    return TRing(cap)


def _iter_bits(n: int):
    while n:
        low = n & -n
        yield low.bit_length() - 1
        n ^= low


class TPoly:
    """Element of GF2[lam, theta, vartheta] truncated at a weighted degree cap."""

    __slots__ = ("ring", "bits")

    def __init__(self, ring: TRing, bits: int = 0):
        self.ring = ring
        self.bits = bits

    # constructors
    @classmethod
    def zero(cls, cap: int) -> "TPoly":
        return cls(tring(cap), 0)

    @classmethod
    def one(cls, cap: int) -> "TPoly":
        return cls(tring(cap), 1)

    @classmethod
    def monomial(cls, cap: int, a: int, b: int, c: int) -> "TPoly":
        r = tring(cap)
        if a + b + 2 * c > cap:
            return cls(r, 0)
        return cls(r, 1 << r.pos(a, b, c))

    @classmethod
    def gens(cls, cap: int):
        return cls.monomial(cap, 1, 0, 0), cls.monomial(cap, 0, 1, 0), cls.monomial(cap, 0, 0, 1)

    @classmethod
    def from_monomials(cls, cap: int, monos) -> "TPoly":
        r = tring(cap)
        bits = 0
        for a, b, c in monos:
            if a + b + 2 * c <= cap:
                bits ^= 1 << r.pos(a, b, c)
        return cls(r, bits)

    @property
    def cap(self) -> int:
        return self.ring.cap

    def _check(self, other: "TPoly"):
        if self.ring is not other.ring:
            raise StructureError(f"cap mismatch: {self.ring.cap} vs {other.ring.cap}")

    def __add__(self, other: "TPoly") -> "TPoly":
        self._check(other)
        return TPoly(self.ring, self.bits ^ other.bits)

    __sub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other) -> "TPoly":
        if isinstance(other, int):
            return self if other & 1 else TPoly(self.ring, 0)
        self._check(other)
        a, b = self.bits, other.bits
        if not a or not b:
            return TPoly(self.ring, 0)
        if a.bit_count() > b.bit_count():
            a, b = b, a
        acc = 0
        while a:
            low = a & -a
            acc ^= b << (low.bit_length() - 1)
            a ^= low
        return TPoly(self.ring, acc & self.ring.valid)

    __rmul__ = __mul__

    def scale(self, c) -> "TPoly":
        return self * int(c)

    def __pow__(self, e: int) -> "TPoly":
        out = TPoly(self.ring, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def mul_mono(self, a: int, b: int, c: int) -> "TPoly":
        return TPoly(self.ring, (self.bits << self.ring.pos(a, b, c)) & self.ring.valid)

    def truncate(self, d: int) -> "TPoly":
        """Drop monomials of degree > d."""
        return TPoly(self.ring, self.bits & self.ring.mask_upto(d))

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.ring is other.ring and self.bits == other.bits

    def __hash__(self):
        return hash((self.ring.cap, self.bits))

    def __bool__(self):
        return bool(self.bits)

    def is_zero(self) -> bool:
        return not self.bits

    def monomials(self) -> list:
        dec = self.ring.decode
        return [dec[p] for p in _iter_bits(self.bits)]

    def __len__(self):
        return self.bits.bit_count()

    def homogeneous_component(self, d: int) -> "TPoly":
        if d < 0 or d > self.ring.cap:
            return TPoly(self.ring, 0)
        return TPoly(self.ring, self.bits & self.ring.degmask[d])

    def degrees(self) -> list:
        return [d for d, m in enumerate(self.ring.degmask) if self.bits & m]

    def min_degree(self):
        for d, m in enumerate(self.ring.degmask):
            if self.bits & m:
                return d
        return None

    def lam_valuation(self):
        """Smallest lam-exponent among the monomials (None for zero)."""
        if not self.bits:
            return None
        return min(a for a, _, _ in self.monomials())

    def divisible_by_lam_power(self, n: int) -> bool:
        return not (self.bits & self.ring.lam_below(n))

    def with_cap(self, cap: int) -> "TPoly":
        if cap == self.ring.cap:
            return self
        return TPoly.from_monomials(cap, self.monomials())

    # exact division by the trace factors that occur in recovery formulas
    def div_vartheta(self) -> "TPoly":
        r = self.ring
        if self.bits & r.slice_mask(0):
            raise DivisibilityError("not divisible by vartheta")
        return TPoly(r, self.bits >> r.BB)

    def div_vartheta_plus_lamtheta(self) -> "TPoly":
        """Exact quotient by (vartheta + lam theta), by synthetic division in vartheta."""
        r = self.ring
        if not self.bits:
            return self
        top = max(c for _, _, c in self.monomials())
        slices = [(self.bits & r.slice_mask(c)) >> (r.BB * c) for c in range(top + 1)]
        shift_lt = r.pos(1, 1, 0)
        q = [0] * top
        carry = 0
        # f_c = q_{c-1} + lam theta q_c, from the top down
        for c in range(top, 0, -1):
            qc1 = slices[c] ^ carry
            q[c - 1] = qc1
            carry = qc1 << shift_lt
        if slices[0] != carry:
            raise DivisibilityError("not divisible by vartheta + lam*theta")
        bits = 0
        for c, s in enumerate(q):
            bits |= s << (r.BB * c)
        out = TPoly(r, bits & r.valid)
        if out.bits != bits:
            raise DivisibilityError("quotient exceeds the cap")
        return out

    def div_delta(self) -> "TPoly":
        """Exact quotient by delta = vartheta^2 + lam theta vartheta = [x,y]^2."""
        return self.div_vartheta().div_vartheta_plus_lamtheta()

    # conversions
    def to_poly(self) -> TruncatedPolynomial:
        ring = PolyRing(GF2, TRACE3, self.ring.cap)
        return TruncatedPolynomial(ring, {m: 1 for m in self.monomials()})

    @classmethod
    def from_poly(cls, f: TruncatedPolynomial) -> "TPoly":
        if f.ring.vars != TRACE3 or f.ring.coeffs != GF2:
            raise StructureError("expected a GF2 polynomial in the trace variables")
        return cls.from_monomials(f.ring.cap, [m for m, c in f.terms().items() if c])

    def to_base(self, ring: PolyRing) -> TruncatedPolynomial:
        """Image under lam -> x11, theta -> y11, vartheta -> x11 y11 + x12 y21."""
        x11, x12, y11, y21 = ring.gens()
        return self.to_poly().subs([x11, y11, x11 * y11 + x12 * y21])

    @classmethod
    def from_base(cls, f: TruncatedPolynomial, cap: int | None = None) -> "TPoly":
        """Inverse of :meth:`to_base` on the image; StructureError if ``f`` is not a trace polynomial."""
        if f.ring.vars != PSEUDO4 or f.ring.coeffs != GF2:
            raise StructureError("expected a GF2 polynomial in x11, x12, y11, y21")
        cap = f.ring.cap if cap is None else cap
        r = tring(cap)
        shifted = TPoly(r, 1)
        powers = [shifted]
        lt = TPoly.monomial(cap, 0, 0, 1) + TPoly.monomial(cap, 1, 1, 0)
        out = 0
        for (a, k, b, l), c in f.terms().items():
            if k != l:
                raise StructureError("polynomial is not a function of the traces")
            while len(powers) <= k:
                powers.append(powers[-1] * lt)
            out ^= powers[k].mul_mono(a, b, 0).bits
        return TPoly(r, out)

    def normal_form(self) -> tuple:
        """``(s0, s1)`` with self = s0 + vartheta*s1, s_i in GF2[lam, theta, delta].

        Uses vartheta^2 = delta + lam theta vartheta.  The parts are returned as
        dicts ``(a, b, e) -> 1`` meaning lam^a theta^b delta^e.
        """
        byc: dict = {}
        for a, b, c in self.monomials():
            byc.setdefault(c, []).append((a, b))
        if not byc:
            return {}, {}
        top = max(byc)
        # vartheta^c = A_c + vartheta B_c
        A = [{(0, 0, 0): 1}, {}]
        Bc = [{}, {(0, 0, 0): 1}]
        for c in range(2, top + 1):
            a_prev, b_prev = A[c - 1], Bc[c - 1]
            A.append({(a, b, e + 1): 1 for (a, b, e) in b_prev})
            nb = dict(a_prev)
            for (a, b, e) in b_prev:
                k = (a + 1, b + 1, e)
                if k in nb:
                    del nb[k]
                else:
                    nb[k] = 1
            Bc.append(nb)
        s0, s1 = {}, {}
        for c, monos in byc.items():
            for target, src in ((s0, A[c]), (s1, Bc[c])):
                for (a, b, e) in src:
                    for (fa, fb) in monos:
                        k = (a + fa, b + fb, e)
                        if k in target:
                            del target[k]
                        else:
                            target[k] = 1
        return s0, s1

    @classmethod
    def from_normal_form(cls, cap: int, s0: dict, s1: dict) -> "TPoly":
        """Inverse of :meth:`normal_form` (truncated at ``cap``)."""
        lam, theta, vt = cls.gens(cap)
        delta = vt * vt + lam * theta * vt
        dpow = [cls.one(cap)]
        out = cls.zero(cap)
        for part, factor in ((s0, cls.one(cap)), (s1, vt)):
            for (a, b, e) in part:
                while len(dpow) <= e:
                    dpow.append(dpow[-1] * delta)
                out = out + (dpow[e] * factor).mul_mono(a, b, 0)
        return out

    def __str__(self):
        if not self.bits:
            return "0"
        names = ("lam", "theta", "vartheta")
        parts = []
        for mono in sorted(self.monomials(), key=lambda m: (-(m[0] + m[1] + 2 * m[2]), [-e for e in m])):
            s = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e)
            parts.append(s or "1")
        return " + ".join(parts)

    def __repr__(self):
        return f"TPoly({self}; cap={self.ring.cap})"
