"""Exact multivariate polynomials truncated at a weighted total-degree cap.

A polynomial is a sparse map from monomials to coefficients.  Monomials are
packed into a single Python int: the weighted degree sits in the top field and
each exponent gets a fixed-width field below it, with the first variable most
significant.  Adding two packed keys multiplies the monomials, and comparing
keys is graded-lex comparison, so truncation and ordering are both cheap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import DegreeRangeError, DivisibilityError, NotAUnitError, StructureError

SCHEMA_POLY = "genmat.poly/1"


@dataclass(frozen=True)
class CoefficientRing:
    """One of GF2, QQ (exact rationals) or Z/p^k."""

    kind: str
    p: int | None = None
    k: int | None = None

    def __post_init__(self):
        if self.kind not in ("GF2", "QQ", "ZMOD"):
            raise StructureError(f"unknown coefficient ring {self.kind!r}")
        if self.kind == "ZMOD" and (self.p is None or self.p < 2 or not self.k or self.k < 1):
            raise StructureError("Z/p^k needs a prime p and k >= 1")

    @property
    def modulus(self) -> int | None:
        if self.kind == "GF2":
            return 2
        if self.kind == "ZMOD":
            return self.p ** self.k
        return None

    @property
    def characteristic(self) -> int:
        return self.modulus or 0

    def __str__(self):
        if self.kind == "ZMOD":
            return f"Z/{self.p}^{self.k}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "CoefficientRing":
        if text == "GF2":
            return GF2
        if text == "QQ":
            return QQ
        if text.startswith("Z/"):
            p, _, k = text[2:].partition("^")
            return cls("ZMOD", int(p), int(k or 1))
        raise StructureError(f"cannot parse coefficient ring {text!r}")

    def __call__(self, c):
        """Canonical representative of ``c`` (ints stay ints; QQ may hold Fractions)."""
        if isinstance(c, float):
            raise StructureError("floating point coefficients are not allowed")
        m = self.modulus
        if m is None:
            if isinstance(c, Fraction):
                return c.numerator if c.denominator == 1 else c
            return int(c)
        if isinstance(c, Fraction):
            if c.denominator == 1:
                return c.numerator % m
            if math.gcd(c.denominator, m) != 1:
                raise StructureError(f"{c} has no image in {self}")
            return c.numerator * pow(c.denominator, -1, m) % m
        return int(c) % m

    def is_unit(self, c) -> bool:
        c = self(c)
        if self.kind == "QQ":
            return c != 0
        return math.gcd(c, self.modulus) == 1

    def inverse(self, c):
        c = self(c)
        if not self.is_unit(c):
            raise NotAUnitError(f"{c} is not a unit of {self}")
        if self.kind == "QQ":
            return self(Fraction(1) / c)
        return pow(c, -1, self.modulus)

    def format(self, c) -> str:
        return str(c)

    def parse_coeff(self, text: str):
        return self(Fraction(text))


GF2 = CoefficientRing("GF2")
QQ = CoefficientRing("QQ")


def integers_mod(p: int, k: int = 1) -> CoefficientRing:
    return CoefficientRing("ZMOD", p, k)


@dataclass(frozen=True)
class VariableSet:
    """Ordered variable names with positive integer degree weights."""

    names: tuple
    weights: tuple | None = None

    def __post_init__(self):
        names = tuple(self.names)
        weights = tuple(self.weights) if self.weights is not None else (1,) * len(names)
        if len(set(names)) != len(names) or len(weights) != len(names) or min(weights, default=1) < 1:
            raise StructureError("variable names must be distinct with positive weights")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)


GENERIC8 = VariableSet(("x11", "x12", "x21", "x22", "y11", "y12", "y21", "y22"))
PSEUDO4 = VariableSet(("x11", "x12", "y11", "y21"))
# trace coordinates t(x), t(y), t(xy); the last one has degree 2
TRACE3 = VariableSet(("lam", "theta", "vartheta"), (1, 1, 2))


@dataclass(frozen=True)
class PolyRing:
    """Parent object: coefficient ring, variables and inclusive degree cap."""

    coeffs: CoefficientRing
    vars: VariableSet
    cap: int

    def __post_init__(self):
        if self.cap < 0:
            raise DegreeRangeError("cap must be non-negative")

    # -- packing -------------------------------------------------------
    @cached_property
    def _bits(self) -> int:
        return max(1, (2 * self.cap).bit_length())

    @cached_property
    def _shifts(self) -> tuple:
        n, b = len(self.vars), self._bits
        return tuple((n - 1 - i) * b for i in range(n))

    @cached_property
    def _deg_shift(self) -> int:
        return len(self.vars) * self._bits

    @cached_property
    def _limit(self) -> int:
        return (self.cap + 1) << self._deg_shift

    def pack(self, exps) -> int:
        if len(exps) != len(self.vars):
            raise StructureError("exponent vector has the wrong length")
        deg = 0
        key = 0
        for e, w, s in zip(exps, self.vars.weights, self._shifts):
            if e < 0:
                raise StructureError("negative exponent")
            deg += w * e
            key |= e << s
        if deg > self.cap:
            return -1
        return key | (deg << self._deg_shift)

    def unpack(self, key: int) -> tuple:
        mask = (1 << self._bits) - 1
        return tuple((key >> s) & mask for s in self._shifts)

    def key_degree(self, key: int) -> int:
        return key >> self._deg_shift

    # -- constructors --------------------------------------------------
    def zero(self) -> "TruncatedPolynomial":
        return TruncatedPolynomial(self, {}, _trusted=True)

    def one(self) -> "TruncatedPolynomial":
        return self.constant(1)

    def constant(self, c) -> "TruncatedPolynomial":
        c = self.coeffs(c)
        return TruncatedPolynomial(self, {0: c} if c else {}, _trusted=True)

    def var(self, name: str) -> "TruncatedPolynomial":
        exps = [0] * len(self.vars)
        exps[self.vars.index(name)] = 1
        return self.monomial(exps)

    def gens(self) -> tuple:
        return tuple(self.var(n) for n in self.vars.names)

    def monomial(self, exps, coeff=1) -> "TruncatedPolynomial":
        return TruncatedPolynomial(self, {tuple(exps): coeff})

    def from_dict(self, terms: Mapping) -> "TruncatedPolynomial":
        return TruncatedPolynomial(self, terms)

    def with_cap(self, cap: int) -> "PolyRing":
        return PolyRing(self.coeffs, self.vars, cap)

    def with_coeffs(self, coeffs: CoefficientRing) -> "PolyRing":
        return PolyRing(coeffs, self.vars, self.cap)

    def monomials_of_degree(self, d: int) -> list:
        """All exponent vectors of weighted degree exactly ``d``."""
        out = []
        w = self.vars.weights

        def rec(i, left, acc):
            if i == len(w):
                if left == 0:
                    out.append(tuple(acc))
                return
            for e in range(left // w[i] + 1):
                acc.append(e)
                rec(i + 1, left - e * w[i], acc)
                acc.pop()

        rec(0, d, [])
        return out


def _normalize_terms(ring: PolyRing, acc: dict) -> dict:
    kind = ring.coeffs.kind
    if kind == "GF2":
        return {k: 1 for k, c in acc.items() if c & 1}
    if kind == "ZMOD":
        m = ring.coeffs.modulus
        out = {}
        for k, c in acc.items():
            c %= m
            if c:
                out[k] = c
        return out
    out = {}
    for k, c in acc.items():
        if c:
            if type(c) is Fraction and c.denominator == 1:
                c = c.numerator
            out[k] = c
    return out


class TruncatedPolynomial:
    """Sparse polynomial over a :class:`PolyRing`; terms above the cap are dropped."""

    __slots__ = ("ring", "_terms", "_sorted")

    def __init__(self, ring: PolyRing, terms=None, *, _trusted: bool = False):
        self.ring = ring
        self._sorted = None
        if _trusted:
            self._terms = terms
            return
        acc = {}
        for exps, c in (terms or {}).items():
            key = ring.pack(exps)
            if key < 0:
                continue
            acc[key] = acc.get(key, 0) + ring.coeffs(c)
        self._terms = _normalize_terms(ring, acc)

    # -- basic protocol ------------------------------------------------
    def _check(self, other: "TruncatedPolynomial"):
        if self.ring is not other.ring and self.ring != other.ring:
            raise StructureError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _coerce(self, other):
        if isinstance(other, TruncatedPolynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.constant(other)
        return NotImplemented

    def terms(self) -> dict:
        """Exponent tuple -> coefficient."""
        up = self.ring.unpack
        return {up(k): c for k, c in self._terms.items()}

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        if not isinstance(other, TruncatedPolynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        acc = dict(a)
        for k, c in b.items():
            acc[k] = acc.get(k, 0) + c
        return TruncatedPolynomial(self.ring, _normalize_terms(self.ring, acc), _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        if self.ring.coeffs.kind == "GF2":
            return self
        acc = {k: -c for k, c in self._terms.items()}
        return TruncatedPolynomial(self.ring, _normalize_terms(self.ring, acc), _trusted=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _sorted_items(self):
        if self._sorted is None:
            self._sorted = sorted(self._terms.items())
        return self._sorted

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TruncatedPolynomial):
            return NotImplemented
        self._check(other)
        return TruncatedPolynomial(self.ring, _mul_terms(self.ring, self, other), _trusted=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "TruncatedPolynomial":
        c = self.ring.coeffs(c)
        if not c:
            return self.ring.zero()
        acc = {k: v * c for k, v in self._terms.items()}
        return TruncatedPolynomial(self.ring, _normalize_terms(self.ring, acc), _trusted=True)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise StructureError("polynomial powers need a non-negative int exponent")
        result, base = self.ring.one(), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mul_monomial(self, exps, coeff=1) -> "TruncatedPolynomial":
        """Multiply by a single monomial (cheap key shift)."""
        key = self.ring.pack(exps)
        if key < 0:
            return self.ring.zero()
        lim = self.ring._limit
        c = self.ring.coeffs(coeff)
        acc = {k + key: v * c for k, v in self._terms.items() if k + key < lim}
        return TruncatedPolynomial(self.ring, _normalize_terms(self.ring, acc), _trusted=True)

    # -- degree structure ---------------------------------------------
    def degree(self) -> int | None:
        if not self._terms:
            return None
        return self.ring.key_degree(max(self._terms))

    def min_degree(self) -> int | None:
        if not self._terms:
            return None
        return self.ring.key_degree(min(self._terms))

    def homogeneous_component(self, i: int) -> "TruncatedPolynomial":
        if i < 0 or i > self.ring.cap:
            raise DegreeRangeError(f"degree {i} outside 0..{self.ring.cap}")
        kd = self.ring.key_degree
        return TruncatedPolynomial(
            self.ring, {k: c for k, c in self._terms.items() if kd(k) == i}, _trusted=True
        )

    def degrees(self) -> list:
        kd = self.ring.key_degree
        return sorted({kd(k) for k in self._terms})

    def constant_term(self):
        return self._terms.get(0, 0)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    # -- ring changes --------------------------------------------------
    def with_cap(self, cap: int) -> "TruncatedPolynomial":
        """Re-express at another cap (dropping terms above it)."""
        if cap == self.ring.cap:
            return self
        target = self.ring.with_cap(cap)
        return TruncatedPolynomial(target, self.terms())

    def change_coeffs(self, coeffs: CoefficientRing) -> "TruncatedPolynomial":
        target = self.ring.with_coeffs(coeffs)
        return TruncatedPolynomial(target, self.terms())

    def map_coefficients(self, fn) -> "TruncatedPolynomial":
        acc = {k: self.ring.coeffs(fn(c)) for k, c in self._terms.items()}
        return TruncatedPolynomial(self.ring, _normalize_terms(self.ring, acc), _trusted=True)

    def project(self, target: PolyRing, rename: Mapping) -> "TruncatedPolynomial":
        """Send variable ``v`` to ``rename[v]`` (a target name) or to 0 if absent/None."""
        idx = []
        for name in self.ring.vars.names:
            new = rename.get(name)
            idx.append(None if new is None else target.vars.index(new))
        out = {}
        n = len(target.vars)
        for exps, c in self.terms().items():
            new = [0] * n
            for e, j in zip(exps, idx):
                if e:
                    if j is None:
                        break
                    new[j] += e
            else:
                t = tuple(new)
                out[t] = out.get(t, 0) + c
        return TruncatedPolynomial(target, out)

    def subs(self, images: Mapping | Iterable) -> "TruncatedPolynomial":
        """Substitute polynomials (all over one ring) for the variables."""
        if isinstance(images, Mapping):
            images = [images[n] for n in self.ring.vars.names]
        images = list(images)
        if len(images) != len(self.ring.vars):
            raise StructureError("need one image per variable")
        target = images[0].ring
        cache = [dict() for _ in images]

        def power(i, e):
            got = cache[i].get(e)
            if got is None:
                got = images[i] ** e
                cache[i][e] = got
            return got

        total = target.zero()
        for exps, c in self.terms().items():
            term = target.constant(c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
                    if term.is_zero():
                        break
            total = total + term
        return total

    # -- p-adic --------------------------------------------------------
    def min_valuation(self, p: int):
        if self.ring.coeffs.kind != "QQ":
            raise StructureError("valuations are defined for the rational ring only")
        if not self._terms:
            return math.inf
        return min(padic_valuation(c, p) for c in self._terms.values())

    # -- display / serialisation ----------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        names = self.ring.vars.names
        parts = []
        for k, c in sorted(self._terms.items(), reverse=True):
            exps = self.ring.unpack(k)
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e
            )
            neg = self.ring.coeffs.kind == "QQ" and c < 0
            mag = -c if neg else c
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("- " if neg else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[1:]

    def __repr__(self):
        return f"TruncatedPolynomial({self}; {self.ring.coeffs}, cap={self.ring.cap})"

    def to_json(self) -> dict:
        items = sorted(self._terms.items(), reverse=True)
        out = {
            "schema": SCHEMA_POLY,
            "ring": str(self.ring.coeffs),
            "vars": list(self.ring.vars.names),
            "cap": self.ring.cap,
            "terms": [[list(self.ring.unpack(k)), str(c)] for k, c in items],
        }
        if any(w != 1 for w in self.ring.vars.weights):
            out["weights"] = list(self.ring.vars.weights)
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "TruncatedPolynomial":
        if data.get("schema", SCHEMA_POLY) != SCHEMA_POLY:
            raise StructureError(f"unsupported schema {data.get('schema')!r}")
        coeffs = CoefficientRing.parse(data["ring"])
        vs = VariableSet(tuple(data["vars"]), tuple(data["weights"]) if "weights" in data else None)
        ring = PolyRing(coeffs, vs, int(data["cap"]))
        terms = {}
        for exps, c in data["terms"]:
            t = tuple(int(e) for e in exps)
            terms[t] = terms.get(t, 0) + coeffs.parse_coeff(str(c))
        return cls(ring, terms)


def _mul_terms(ring: PolyRing, f: TruncatedPolynomial, g: TruncatedPolynomial) -> dict:
    A, B = f._terms, g._terms
    if not A or not B:
        return {}
    if len(A) > len(B):
        f, g = g, f
        A, B = B, A
    limit = ring._limit
    bsorted = g._sorted_items()
    acc: dict = {}
    get = acc.get
    if ring.coeffs.kind == "GF2":
        for ka in A:
            room = limit - ka
            for kb, _ in bsorted:
                if kb >= room:
                    break
                k = ka + kb
                acc[k] = get(k, 0) ^ 1
        return {k: 1 for k, c in acc.items() if c}
    for ka, ca in A.items():
        room = limit - ka
        for kb, cb in bsorted:
            if kb >= room:
                break
            k = ka + kb
            acc[k] = get(k, 0) + ca * cb
    return _normalize_terms(ring, acc)


def padic_valuation(q, p: int):
    """v_p of a rational; +infinity for zero."""
    if q == 0:
        return math.inf
    q = Fraction(q)
    v = 0
    n, d = q.numerator, q.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


# -- function-style aliases of the methods above ------------------------------

def poly_add(f: TruncatedPolynomial, g: TruncatedPolynomial) -> TruncatedPolynomial:
    f._check(g)
    return f + g


def poly_mul(f: TruncatedPolynomial, g: TruncatedPolynomial) -> TruncatedPolynomial:
    f._check(g)
    return f * g


def invert_unit(f: TruncatedPolynomial) -> TruncatedPolynomial:
    """Inverse of a power series with invertible constant term (geometric series)."""
    ring = f.ring
    c0 = f.constant_term()
    if not c0 or not ring.coeffs.is_unit(c0):
        raise NotAUnitError("constant term is not invertible")
    inv0 = ring.coeffs.inverse(c0)
    u = ring.one() - f.scale(inv0)  # f = c0 (1 - u), u has no constant term
    if u.is_zero():
        return ring.constant(inv0)
    steps = ring.cap // u.min_degree()
    s = ring.one()
    for _ in range(steps):
        s = ring.one() + u * s
    return s.scale(inv0)


def _divides(ring: PolyRing, kg: int, kf: int) -> bool:
    return all(a <= b for a, b in zip(ring.unpack(kg), ring.unpack(kf)))


def exact_divide(f: TruncatedPolynomial, g: TruncatedPolynomial) -> TruncatedPolynomial:
    """The ``q`` with ``f == q*g`` as untruncated polynomials; DivisibilityError otherwise."""
    f._check(g)
    if g.is_zero():
        raise DivisibilityError("division by zero")
    ring = f.ring
    coeffs = ring.coeffs
    kg = max(g._terms)
    cg = g._terms[kg]
    if not coeffs.is_unit(cg):
        raise DivisibilityError("leading coefficient of the divisor is not a unit")
    inv = coeffs.inverse(cg)
    gitems = list(g._terms.items())
    rem = dict(f._terms)
    quot = {}
    while rem:
        kr = max(rem)
        if not _divides(ring, kg, kr):
            raise DivisibilityError("no exact quotient")
        kq = kr - kg
        cq = coeffs(rem[kr] * inv)
        quot[kq] = cq
        for k, c in gitems:
            kk = k + kq
            v = coeffs(rem.get(kk, 0) - cq * c)
            if v:
                rem[kk] = v
            else:
                rem.pop(kk, None)
    return TruncatedPolynomial(ring, _normalize_terms(ring, quot), _trusted=True)


def homogeneous_component(f: TruncatedPolynomial, i: int) -> TruncatedPolynomial:
    return f.homogeneous_component(i)


def min_valuation_2adic(f: TruncatedPolynomial):
    return f.min_valuation(2)
