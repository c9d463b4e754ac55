"""Degree-n Lie spans of a generic pair and their integral structure at p = 2.

Every degree-n Lie element of a generic (or pseudo-generic) pair can be written
through the bracket scalars

    [x,y,x,x] = alpha [x,y],  [x,y,x,y] = [x,y,y,x] = beta [x,y],  [x,y,y,y] = gamma [x,y]

as ``f(alpha, beta, gamma) [x,y]`` (even n) or ``f [x,y,x] + g [x,y,y]`` (odd n).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .errors import DegreeRangeError, MembershipError
from .matrix import Mat2, lie_bracket, nested_bracket
from .poly import QQ, VariableSet, padic_valuation
from .words import GenericPair, free_evaluator, hall_basis_of_weight

ABG = VariableSet(("alpha", "beta", "gamma"))
AGD = VariableSet(("alpha", "gamma", "delta"), (1, 1, 2))


def abg_monomials(m: int) -> list:
    """Exponents (r, s, t) with r + s + t = m, in a fixed order."""
    return [(r, s, m - r - s) for r in range(m, -1, -1) for s in range(m - r, -1, -1)]


def _heads(pair: GenericPair, n: int) -> list:
    x, y = pair.x, pair.y
    c = lie_bracket(x, y)
    if n % 2 == 0:
        return [("xy", c)]
    return [("xyx", lie_bracket(c, x)), ("xyy", lie_bracket(c, y))]


def free_basis(pair: GenericPair, n: int) -> list:
    """``[(label, Mat2)]`` spanning the degree-n Lie elements, ``label = (head, r, s, t)``."""
    if n < 2:
        raise DegreeRangeError("n must be at least 2")
    if pair.cap < n:
        raise DegreeRangeError(f"cap {pair.cap} too small for degree {n}")
    a, b, g = pair.alpha(), pair.beta(), pair.gamma()
    m = (n - 2) // 2
    powers = {}

    def pw(base, key, e):
        got = powers.get((key, e))
        if got is None:
            got = base ** e
            powers[(key, e)] = got
        return got

    out = []
    for head, h in _heads(pair, n):
        for r, s, t in abg_monomials(m if n % 2 == 0 else (n - 3) // 2):
            scal = pw(a, "a", r) * pw(b, "b", s) * pw(g, "g", t)
            out.append(((head, r, s, t), scal * h))
    return out


def L_n_spanning_set(pair: GenericPair, n: int) -> list:
    return [m for _, m in free_basis(pair, n)]


def rank_of_span(vectors, p: int | None = None) -> int:
    """Exact rank of matrices (or sparse vectors); over QQ, or over GF(p) after reduction."""
    vecs = [v.coordinates() if isinstance(v, Mat2) else v for v in vectors]
    return linalg.rank(vecs, p)


def free_basis_coordinates(v: Mat2, n: int, pair: GenericPair) -> dict:
    """Coordinates of a degree-n Lie element in :func:`free_basis`; MembershipError otherwise."""
    basis = free_basis(pair, n)
    sol = linalg.solve_in_span([m.coordinates() for _, m in basis], v.coordinates())
    if sol is None:
        raise MembershipError(f"not in the degree-{n} Lie span")
    return {basis[i][0]: c for i, c in sol.items()}


@lru_cache(maxsize=None)
def hall_min_images(n: int, coeffs=QQ):
    """Degree-n parts of the free-algebra images of the weight-n Hall commutators."""
    ev = free_evaluator(coeffs, n)
    return tuple(ev.term(c).delta.homogeneous_component(n) for c in hall_basis_of_weight(n))


def hall_min_components(pair: GenericPair, n: int) -> list:
    """Degree-n components of the weight-n Hall commutator images at ``pair``."""
    coeffs = QQ if pair.ring.coeffs.characteristic == 0 else pair.ring.coeffs
    p = pair.with_cap(n)
    return [img.substitute(p.x, p.y) for img in hall_min_images(n, coeffs)]


# -- integral structure at p = 2 -----------------------------------------------


def _split_beta(poly_abg: dict) -> tuple:
    """Write f(alpha, beta, gamma) = f0 + beta f1 with f0, f1 in Q[alpha, gamma, delta].

    delta = (beta^2 - alpha gamma) / 4, so beta^2 = 4 delta + alpha gamma.
    Returns (f0, f1) as dicts (a, c, e) -> coefficient.
    """
    parts = ({}, {})
    for (r, s, t), coeff in poly_abg.items():
        k, odd = divmod(s, 2)
        # (4 delta + alpha gamma)^k
        binom = 1
        for j in range(k + 1):  # j copies of 4 delta
            key = (r + k - j, t + k - j, j)
            c = coeff * binom * 4 ** j
            parts[odd][key] = parts[odd].get(key, 0) + c
            binom = binom * (k - j) // (j + 1)
    return tuple({k: v for k, v in d.items() if v} for d in parts)


def _mul_mono(d: dict, mono: tuple) -> dict:
    return {tuple(a + b for a, b in zip(k, mono)): v for k, v in d.items()}


def _sub(d1: dict, d2: dict) -> dict:
    out = dict(d1)
    for k, v in d2.items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


@dataclass
class MembershipCertificate:
    n: int
    member: bool
    coordinates: dict      # family name -> {(a, c, e): coefficient}
    min_valuation: object  # smallest 2-adic valuation among the coordinates

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "member": self.member,
            "min_valuation": None if self.min_valuation == float("inf") else self.min_valuation,
            "coordinates": {
                fam: [[list(k), str(v)] for k, v in sorted(c.items())] for fam, c in self.coordinates.items()
            },
        }


def family_coordinates(v: Mat2, n: int, pair: GenericPair) -> dict:
    """Coordinates of ``v`` over the rational basis given by the p = 2 generating families.

    Even n: ``S [x,y]`` and ``beta S [x,y]``.  Odd n: ``S [x,y,x]``,
    ``S [x,y,y]``, ``S (beta [x,y,x] + alpha [x,y,y]) / 2`` and
    ``S (gamma [x,y,x] + beta [x,y,y]) / 2``, where ``S`` is spanned by the
    monomials in alpha, gamma and delta = (beta^2 - alpha gamma) / 4.
    """
    coords = free_basis_coordinates(v, n, pair)
    heads = {}
    for (head, r, s, t), c in coords.items():
        heads.setdefault(head, {})[(r, s, t)] = c
    if n % 2 == 0:
        f0, f1 = _split_beta(heads.get("xy", {}))
        return {"S[x,y]": f0, "beta*S[x,y]": f1}
    p0, p1 = _split_beta(heads.get("xyx", {}))
    q0, q1 = _split_beta(heads.get("xyy", {}))
    s3 = {k: 2 * c for k, c in p1.items()}
    s4 = {k: 2 * c for k, c in q1.items()}
    s1 = _sub(p0, _mul_mono(q1, (0, 1, 0)))
    s2 = _sub(q0, _mul_mono(p1, (1, 0, 0)))
    return {
        "S[x,y,x]": s1,
        "S[x,y,y]": s2,
        "S(beta[x,y,x]+alpha[x,y,y])/2": s3,
        "S(gamma[x,y,x]+beta[x,y,y])/2": s4,
    }


def L_intersect_A_membership(v: Mat2, n: int, pair: GenericPair | None = None) -> MembershipCertificate:
    """Decide whether a degree-n Lie element lies in the 2-integral generating families."""
    pair = pair or GenericPair.pseudo4_rational(n)
    coords = family_coordinates(v, n, pair)
    vals = [padic_valuation(c, 2) for fam in coords.values() for c in fam.values()]
    mv = min(vals) if vals else float("inf")
    return MembershipCertificate(n, mv >= 0, coords, mv)


def family_generators(pair: GenericPair, n: int) -> list:
    """Matrices of the p = 2 generating families in degree n (labelled)."""
    a, b, g = pair.alpha(), pair.beta(), pair.gamma()
    d = (b * b - a * g).scale(Fraction(1, 4))
    x, y = pair.x, pair.y
    c = lie_bracket(x, y)

    def s_monos(m):
        out = []
        for e in range(m // 2 + 1):
            rest = m - 2 * e
            for ai in range(rest, -1, -1):
                out.append(((ai, rest - ai, e), (a ** ai) * (g ** (rest - ai)) * (d ** e)))
        return out

    gens = []
    if n % 2 == 0:
        m = (n - 2) // 2
        for k, s in s_monos(m):
            gens.append((("S[x,y]", k), s * c))
        if m >= 1:
            for k, s in s_monos(m - 1):
                gens.append((("beta*S[x,y]", k), (b * s) * c))
        return gens
    m = (n - 3) // 2
    cx, cy = lie_bracket(c, x), lie_bracket(c, y)
    for k, s in s_monos(m):
        gens.append((("S[x,y,x]", k), s * cx))
        gens.append((("S[x,y,y]", k), s * cy))
    if m >= 1:
        f1 = (b * cx + a * cy).scale(Fraction(1, 2))
        f2 = (g * cx + b * cy).scale(Fraction(1, 2))
        for k, s in s_monos(m - 1):
            gens.append((("S(beta[x,y,x]+alpha[x,y,y])/2", k), s * f1))
            gens.append((("S(gamma[x,y,x]+beta[x,y,y])/2", k), s * f2))
    return gens


def is_integral(v: Mat2, p: int = 2) -> bool:
    return all(padic_valuation(c, p) >= 0 for c in v.coordinates().values())


def verify_bracket_scalars(pair: GenericPair) -> dict:
    """[x,y,x,x] = alpha [x,y], [x,y,x,y] = [x,y,y,x] = beta [x,y], [x,y,y,y] = gamma [x,y]."""
    x, y = pair.x, pair.y
    c = lie_bracket(x, y)
    a, b, g = pair.alpha(), pair.beta(), pair.gamma()
    return {
        "xyxx": nested_bracket(x, y, x, x) == a * c,
        "xyxy": nested_bracket(x, y, x, y) == b * c,
        "xyyx": nested_bracket(x, y, y, x) == b * c,
        "xyyy": nested_bracket(x, y, y, y) == g * c,
    }
