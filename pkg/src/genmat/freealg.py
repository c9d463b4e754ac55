"""Truncated free associative algebra on two letters.

Group words are pushed through ``X -> 1 + x``, ``Y -> 1 + y`` into
noncommutative series.  That image has small integer coefficients and only
``2^(cap+1) - 1`` possible monomials, so it is a cheap intermediate: matrix
evaluation then only needs left multiplication by ``x`` or ``y`` (Horner).

A word is packed as an int with a leading sentinel bit, letters below it
(0 = x, 1 = y); the empty word is ``1``.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import StructureError
from .poly import CoefficientRing, QQ

LETTERS = "xy"


def word_key(letters: str) -> int:
    k = 1
    for ch in letters:
        k = (k << 1) | LETTERS.index(ch.lower())
    return k


def key_word(k: int) -> str:
    n = k.bit_length() - 1
    return "".join(LETTERS[(k >> (n - 1 - i)) & 1] for i in range(n))


def key_len(k: int) -> int:
    return k.bit_length() - 1


def _normalize(coeffs: CoefficientRing, acc: dict) -> dict:
    m = coeffs.modulus
    out = {}
    for k, c in acc.items():
        if m is not None:
            c = coeffs(c)
        elif type(c) is Fraction and c.denominator == 1:
            c = c.numerator
        if c:
            out[k] = c
    return out


class NCSeries:
    """Element of ``coeffs<x, y>`` modulo words longer than ``cap``."""

    __slots__ = ("coeffs", "cap", "terms", "_bylen")

    def __init__(self, coeffs: CoefficientRing, cap: int, terms: dict | None = None, *, _trusted=False):
        self.coeffs = coeffs
        self.cap = cap
        self._bylen = None
        if _trusted:
            self.terms = terms
        else:
            acc = {}
            for k, c in (terms or {}).items():
                if isinstance(k, str):
                    k = word_key(k)
                if key_len(k) <= cap:
                    acc[k] = acc.get(k, 0) + coeffs(c)
            self.terms = _normalize(coeffs, acc)

    @classmethod
    def generator(cls, coeffs, cap: int, letter: str) -> "NCSeries":
        return cls(coeffs, cap, {letter: 1})

    def _new(self, terms):
        return NCSeries(self.coeffs, self.cap, terms, _trusted=True)

    def _check(self, other):
        if self.coeffs != other.coeffs or self.cap != other.cap:
            raise StructureError("free algebra elements over different rings or caps")

    def one(self):
        return self._new({1: 1})

    def zero(self):
        return self._new({})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, NCSeries) and self.coeffs == other.coeffs and self.cap == other.cap and self.terms == other.terms

    def __hash__(self):
        return hash((self.cap, frozenset(self.terms.items())))

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for k, c in other.terms.items():
            acc[k] = acc.get(k, 0) + c
        return self._new(_normalize(self.coeffs, acc))

    def __neg__(self):
        return self._new(_normalize(self.coeffs, {k: -c for k, c in self.terms.items()}))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.coeffs(c)
        return self._new(_normalize(self.coeffs, {k: v * c for k, v in self.terms.items()}))

    def _by_length(self):
        if self._bylen is None:
            groups: dict = {}
            for k, c in self.terms.items():
                groups.setdefault(key_len(k), []).append((k, c))
            self._bylen = sorted(groups.items())
        return self._bylen

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        cap = self.cap
        acc: dict = {}
        get = acc.get
        right = other._by_length()
        for ka, ca in self.terms.items():
            la = key_len(ka)
            room = cap - la
            for lb, items in right:
                if lb > room:
                    break
                base = ka << lb
                for kb, cb in items:
                    k = base | (kb ^ (1 << lb))
                    acc[k] = get(k, 0) + ca * cb
        return self._new(_normalize(self.coeffs, acc))

    def min_degree(self):
        if not self.terms:
            return None
        return min(key_len(k) for k in self.terms)

    def homogeneous_component(self, i: int) -> "NCSeries":
        return self._new({k: c for k, c in self.terms.items() if key_len(k) == i})

    def with_cap(self, cap: int) -> "NCSeries":
        return NCSeries(self.coeffs, cap, {k: c for k, c in self.terms.items() if key_len(k) <= cap}, _trusted=True)

    def change_coeffs(self, coeffs: CoefficientRing) -> "NCSeries":
        return NCSeries(coeffs, self.cap, dict(self.terms))

    def denominator_lcm(self) -> int:
        from math import lcm
        out = 1
        for c in self.terms.values():
            if isinstance(c, Fraction):
                out = lcm(out, c.denominator)
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda k: (key_len(k), k)):
            parts.append(f"{self.terms[k]}*{key_word(k) or '1'}")
        return " + ".join(parts)

    def substitute(self, xm, ym):
        """Evaluate at matrices ``x -> xm``, ``y -> ym`` (same parent) by Horner."""
        one = xm.one()
        zero = xm.zero()

        def ev(terms: dict):
            res = zero
            c0 = terms.pop(1, 0)
            if c0:
                res = res + one.scale(c0)
            split = ({}, {})
            for k, c in terms.items():
                n = key_len(k)
                first = (k >> (n - 1)) & 1
                rest = (k & ((1 << (n - 1)) - 1)) | (1 << (n - 1))
                split[first][rest] = c
            if split[0]:
                res = res + xm * ev(split[0])
            if split[1]:
                res = res + ym * ev(split[1])
            return res

        return ev(dict(self.terms))


def lie_bracket_nc(a: NCSeries, b: NCSeries) -> NCSeries:
    return a * b - b * a


def free_generators(coeffs: CoefficientRing = QQ, cap: int = 8):
    return NCSeries.generator(coeffs, cap, "x"), NCSeries.generator(coeffs, cap, "y")
