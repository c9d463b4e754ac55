"""Group words in X, Y, Hall commutators, and their images at generic matrices."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

from sympy import divisors, mobius

from .errors import DegreeRangeError, StructureError
from .freealg import NCSeries
from .matrix import Mat2
from .poly import GENERIC8, GF2, PSEUDO4, QQ, CoefficientRing, PolyRing
from .units import Unit

# -- counting formulas ---------------------------------------------------------


def witt_l2(n: int) -> int:
    """Rank of the degree-n part of the free Lie ring on two generators."""
    if n < 1:
        raise DegreeRangeError("n must be positive")
    return sum(int(mobius(m)) * 2 ** (n // m) for m in divisors(n)) // n


def zubkov_m(n: int) -> int:
    """Rank of the degree-n Lie span of a generic pair of 2x2 matrices (n >= 2)."""
    if n < 2:
        raise DegreeRangeError("defined for n >= 2")
    if n % 2 == 0:
        return n * (n + 2) // 8
    return (n - 1) * (n + 1) // 4


# -- terms ---------------------------------------------------------------------


@dataclass(frozen=True)
class Commutator:
    """``[left, right] = left * right * left^-1 * right^-1`` of two terms."""

    left: "Term"
    right: "Term"

    def __str__(self):
        return f"[{term_str(self.left)},{term_str(self.right)}]"


@dataclass(frozen=True)
class GroupWord:
    """Product of ``term^exponent`` factors; exponents are ints or p-integral rationals."""

    factors: tuple = field(default_factory=tuple)

    def __str__(self):
        if not self.factors:
            return "1"
        out = []
        for t, e in self.factors:
            s = term_str(t)
            out.append(s if e == 1 else f"{s}^{e}")
        return " ".join(out)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.factors + other.factors)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((t, -e) for t, e in reversed(self.factors)))

    @classmethod
    def letter(cls, name: str, e=1) -> "GroupWord":
        return cls(((name, e),))

    @classmethod
    def of(cls, term, e=1) -> "GroupWord":
        return cls(((term, e),))


Term = Union[str, Commutator, GroupWord]


def term_str(t) -> str:
    if isinstance(t, GroupWord):
        return f"({t})" if len(t.factors) != 1 or t.factors[0][1] != 1 else term_str(t.factors[0][0])
    return str(t)


def comm(*terms) -> Commutator:
    """Left-normed ``[a, b, c, ...] = [[a, b], c], ...``."""
    if len(terms) < 2:
        raise StructureError("a commutator needs at least two entries")
    out = Commutator(terms[0], terms[1])
    for t in terms[2:]:
        out = Commutator(out, t)
    return out


def weight(t) -> int:
    if isinstance(t, str):
        return 1
    if isinstance(t, Commutator):
        return weight(t.left) + weight(t.right)
    if isinstance(t, GroupWord) and len(t.factors) == 1 and t.factors[0][1] == 1:
        return weight(t.factors[0][0])
    raise StructureError("weight is defined for commutators of letters")


_TOKEN = re.compile(r"\s*(\^-?\d+(?:/\d+)?|[XYxy\[\],()])")


def parse_word(text: str) -> GroupWord:
    """Parse e.g. ``"X Y x y"``, ``"[X,Y]^2 [[X,Y],X]^-1"`` (lowercase = inverse)."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise StructureError(f"cannot parse word at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        i += 1
        return tokens[i - 1]

    def word():
        factors = []
        while peek() not in (None, ",", "]", ")"):
            factors.append(factor())
        return GroupWord(tuple(factors))

    def factor():
        tok = take()
        if tok in ("X", "Y"):
            base, e = tok, 1
        elif tok in ("x", "y"):
            base, e = tok.upper(), -1
        elif tok == "[":
            parts = [unwrap(word())]
            while peek() == ",":
                take()
                parts.append(unwrap(word()))
            if take() != "]":
                raise StructureError("unbalanced bracket")
            base, e = comm(*parts), 1
        elif tok == "(":
            base, e = word(), 1
            if take() != ")":
                raise StructureError("unbalanced parenthesis")
        else:
            raise StructureError(f"unexpected token {tok!r}")
        if peek() is not None and peek().startswith("^"):
            ex = Fraction(take()[1:])
            e = e * (ex.numerator if ex.denominator == 1 else ex)
        return base, e

    def unwrap(w: GroupWord):
        if len(w.factors) == 1 and w.factors[0][1] == 1:
            return w.factors[0][0]
        return w

    out = word()
    if peek() is not None:
        raise StructureError(f"trailing input {peek()!r}")
    return out


# -- Hall basis ------------------------------------------------------------------


def hall_key(t) -> tuple:
    """Hall order: heavier commutators first, then lexicographic on (left, right); X < Y."""
    if isinstance(t, str):
        return (-1, "XY".index(t))
    return (-weight(t), hall_key(t.left), hall_key(t.right))


@lru_cache(maxsize=None)
def hall_basis(max_weight: int) -> tuple:
    """Basic commutators on X < Y of weight <= max_weight, lowest weight first.

    ``[u, v]`` is basic when ``u < v`` and, if ``u = [a, b]``, also ``b >= v``.
    Since a commutator sorts before its right factor this is a Hall set, and
    it produces left-normed brackets such as ``[[X,Y],X]``.
    """
    by_weight = {1: ["X", "Y"]}
    for n in range(2, max_weight + 1):
        out = []
        for wu in range(1, n):
            for u in by_weight[wu]:
                for v in by_weight[n - wu]:
                    if hall_key(u) >= hall_key(v):
                        continue
                    if isinstance(u, Commutator) and hall_key(u.right) < hall_key(v):
                        continue
                    out.append(Commutator(u, v))
        out.sort(key=hall_key)
        by_weight[n] = out
    flat = []
    for n in range(1, max_weight + 1):
        flat.extend(by_weight[n])
    return tuple(flat)


def hall_basis_of_weight(n: int) -> list:
    return [c for c in hall_basis(n) if weight(c) == n]


# -- evaluation --------------------------------------------------------------------


class Evaluator:
    """Evaluate terms and words given images of X and Y as :class:`Unit` objects."""

    def __init__(self, X: Unit, Y: Unit):
        self.images = {"X": X, "Y": Y}
        self.cache: dict = {}

    def term(self, t) -> Unit:
        got = self.cache.get(t)
        if got is not None:
            return got
        if isinstance(t, str):
            got = self.images[t]
        elif isinstance(t, Commutator):
            got = self.term(t.left).commutator(self.term(t.right))
        elif isinstance(t, GroupWord):
            got = self.word(t)
        else:
            raise StructureError(f"not a term: {t!r}")
        self.cache[t] = got
        return got

    def word(self, w: GroupWord) -> Unit:
        out = None
        for t, e in w.factors:
            g = self.term(t)
            if e != 1:
                g = g.inverse() if e == -1 else g ** e
            out = g if out is None else out * g
        if out is None:
            return Unit(self.images["X"].delta.zero())
        return out


@dataclass(frozen=True)
class GenericPair:
    """Generic (or pseudo-generic, determinant-zero) 2x2 matrices ``x``, ``y``."""

    flavor: str
    x: Mat2
    y: Mat2

    @property
    def ring(self) -> PolyRing:
        return self.x.ring

    @property
    def cap(self) -> int:
        return self.x.ring.cap

    @classmethod
    def generic8(cls, coeffs: CoefficientRing = QQ, cap: int = 8) -> "GenericPair":
        ring = PolyRing(coeffs, GENERIC8, cap)
        g = ring.gens()
        return cls("Generic8", Mat2(*g[:4]), Mat2(*g[4:]))

    @classmethod
    def pseudo4(cls, coeffs: CoefficientRing = QQ, cap: int = 8) -> "GenericPair":
        ring = PolyRing(coeffs, PSEUDO4, cap)
        x11, x12, y11, y21 = ring.gens()
        z = ring.zero()
        flavor = "Pseudo4Char2" if coeffs.characteristic == 2 else "Pseudo4Rational"
        return cls(flavor, Mat2(x11, x12, z, z), Mat2(y11, z, y21, z))

    @classmethod
    def pseudo4_char2(cls, cap: int = 8) -> "GenericPair":
        return cls.pseudo4(GF2, cap)

    @classmethod
    def pseudo4_rational(cls, cap: int = 8) -> "GenericPair":
        return cls.pseudo4(QQ, cap)

    def with_cap(self, cap: int) -> "GenericPair":
        if self.flavor == "Generic8":
            return GenericPair.generic8(self.ring.coeffs, cap)
        return GenericPair.pseudo4(self.ring.coeffs, cap)

    # bracket scalars: [x,y,x,x] = alpha [x,y] etc.
    def alpha(self):
        t = self.x.trace()
        return t * t - self.x.det().scale(4)

    def beta(self):
        return (self.x * self.y).trace().scale(2) - self.x.trace() * self.y.trace()

    def gamma(self):
        t = self.y.trace()
        return t * t - self.y.det().scale(4)

    def units(self):
        return Unit(self.x), Unit(self.y)

    def evaluator(self) -> Evaluator:
        return Evaluator(*self.units())


def sigma_project(m: Mat2, target: PolyRing) -> Mat2:
    """Specialise generic entries to the pseudo-generic shape (x21, x22, y12, y22 -> 0)."""
    rename = {"x11": "x11", "x12": "x12", "y11": "y11", "y21": "y21"}
    return m.map(lambda e: e.project(target, rename))


def evaluate_word(w, pair: GenericPair, cap: int | None = None) -> Unit:
    """Image of a word under ``X -> 1 + x``, ``Y -> 1 + y`` computed directly with matrices."""
    if cap is not None and cap != pair.cap:
        pair = pair.with_cap(cap)
    if not isinstance(w, GroupWord):
        w = GroupWord.of(w)
    return pair.evaluator().word(w)


def free_evaluator(coeffs: CoefficientRing, cap: int) -> Evaluator:
    x = NCSeries.generator(coeffs, cap, "x")
    y = NCSeries.generator(coeffs, cap, "y")
    return Evaluator(Unit(x), Unit(y))


def word_image(w, coeffs: CoefficientRing = QQ, cap: int = 8, evaluator: Evaluator | None = None) -> Unit:
    """Image of a word in the truncated free associative algebra."""
    ev = evaluator or free_evaluator(coeffs, cap)
    if not isinstance(w, GroupWord):
        w = GroupWord.of(w)
    return ev.word(w)


def substitute_unit(u: Unit, pair: GenericPair) -> Unit:
    """Push a free-algebra unit into the matrices of ``pair``."""
    delta = u.delta
    if delta.cap != pair.cap:
        delta = delta.with_cap(pair.cap)
    if delta.coeffs != pair.ring.coeffs:
        delta = delta.change_coeffs(pair.ring.coeffs)
    return Unit(delta.substitute(pair.x, pair.y))


def evaluate_word_fast(w, pair: GenericPair) -> Unit:
    """Same result as :func:`evaluate_word`, routed through the free algebra."""
    coeffs = QQ if pair.ring.coeffs.characteristic == 0 else pair.ring.coeffs
    return substitute_unit(word_image(w, coeffs, pair.cap), pair)


def min_component(g: Unit):
    """``(n, m)`` with ``m`` the lowest nonzero homogeneous part of ``g - 1``; None if trivial."""
    return g.min_component()


def lie_image(t, x, y):
    """Lie polynomial of a commutator of letters evaluated at algebra elements ``x``, ``y``."""
    if isinstance(t, str):
        return x if t == "X" else y
    a, b = lie_image(t.left, x, y), lie_image(t.right, x, y)
    return a * b - b * a
