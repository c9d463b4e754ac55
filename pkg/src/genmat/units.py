"""Units ``1 + a`` (``a`` of positive degree) in a truncated algebra.

Works for any element type providing ``+ - *``, ``scale``, ``one``, ``zero``,
``min_degree``, ``cap`` and ``homogeneous_component``: 2x2 polynomial
matrices, elements of the free associative algebra, and the char-2 trace ring.
"""
from __future__ import annotations

from fractions import Fraction


def binomial(e, j: int):
    """Generalised binomial coefficient for integer or rational ``e``."""
    out = Fraction(1)
    for i in range(j):
        out = out * (e - i) / (i + 1)
    return out.numerator if out.denominator == 1 else out


class Unit:
    """Group element stored as ``delta = g - 1``."""

    __slots__ = ("delta",)

    def __init__(self, delta):
        md = delta.min_degree()
        if md is not None and md < 1:
            raise ValueError("a unit must have the form 1 + (positive degree part)")
        self.delta = delta

    @classmethod
    def from_value(cls, g) -> "Unit":
        return cls(g - g.one())

    @classmethod
    def identity_like(cls, elem) -> "Unit":
        return cls(elem.zero())

    def value(self):
        return self.delta.one() + self.delta

    @property
    def cap(self) -> int:
        return self.delta.cap

    def is_identity(self) -> bool:
        return self.delta.is_zero()

    def __mul__(self, other: "Unit") -> "Unit":
        a, b = self.delta, other.delta
        return Unit(a + b + a * b)

    def __eq__(self, other):
        return isinstance(other, Unit) and self.delta == other.delta

    def __hash__(self):
        return hash(self.delta)

    def inverse(self) -> "Unit":
        a = self.delta
        md = a.min_degree()
        if md is None:
            return self
        # s = -a(1 + s) iterated: each pass fixes md more degrees
        s = a.zero()
        for _ in range(a.cap // md):
            s = -(a + a * s)
        return Unit(s)

    def __pow__(self, e) -> "Unit":
        """``(1+a)^e`` via the binomial series; ``e`` may be a p-integral rational."""
        a = self.delta
        md = a.min_degree()
        if md is None or e == 0:
            return Unit(a.zero())
        if isinstance(e, int) and e > 0 and e.bit_count() == 1:
            out = self
            while e > 1:
                out = out * out
                e >>= 1
            return out
        out = a.zero()
        power = a.one()
        for j in range(1, a.cap // md + 1):
            power = power * a
            c = binomial(e, j)
            if c:
                out = out + power.scale(c)
        return Unit(out)

    def commutator(self, other: "Unit") -> "Unit":
        """``g h g^-1 h^-1`` computed as ``1 + (ab - ba) g^-1 h^-1``."""
        a, b = self.delta, other.delta
        br = a * b - b * a
        if br.is_zero():
            return Unit(br)
        gi, hi = self.inverse(), other.inverse()
        w = (gi * hi).value()
        return Unit(br * w)

    def min_degree(self):
        return self.delta.min_degree()

    def min_component(self):
        """``(degree, homogeneous part)`` of the lowest nonzero component of ``g - 1``."""
        md = self.delta.min_degree()
        if md is None:
            return None
        return md, self.delta.homogeneous_component(md)

    def __repr__(self):
        return f"Unit(1 + {self.delta})"
