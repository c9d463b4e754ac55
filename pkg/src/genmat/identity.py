"""Explicit identities for 2x2 matrices over pro-p rings, degree by degree.

For an odd prime ``p`` the construction starts from an integral combination of
the nine weight-6 basic commutators whose degree-6 image cancels, then kills
the lowest surviving degree ``n = 7, 8, ...`` with a product of weight-n basic
commutators.  The exponents solve a linear system over the rationals and are
p-integral, so they make sense in Z_p.  The result is a word that is
nontrivial modulo the seventh term of the lower central series but evaluates
to 1 at generic matrices up to the target degree.

At p = 2 the correction step is not available, and :func:`char2_correction_search`
offers a bounded search for the analogous step over the trace ring instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product as iproduct

from . import linalg
from .char2.modules import invariants_of, phi_x, phi_y, psi
from .char2.ring import JElement
from .char2.tpoly import TPoly
from .errors import DegreeRangeError, GenmatError, StructureError, UnsupportedPrimeError
from .freealg import NCSeries
from .lie import hall_min_images
from .matrix import Mat2
from .poly import QQ, padic_valuation
from .units import Unit
from .words import GenericPair, GroupWord, free_evaluator, hall_basis_of_weight, term_str

SCHEMA = "genmat.identity/1"

P2_REFUSAL = (
    "p = 2 is not supported: the degree-n commutator images span a proper sublattice "
    "of the integral Lie elements (already in degree 7, where the quotient has exponent 2), "
    "so a rational correction need not have 2-integral exponents"
)


class AlgorithmError(GenmatError):
    """A step whose success is guaranteed by theory failed; the message has the data."""


def _check_prime(p: int):
    if p == 2:
        raise UnsupportedPrimeError(P2_REFUSAL)
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise UnsupportedPrimeError(f"{p} is not a prime")


def default_modulus_exponent(p: int, N: int) -> int:
    """ceil(log_p N) + 2."""
    k = 0
    while p ** k < N:
        k += 1
    return k + 2


# -- evaluation helpers -------------------------------------------------------------


@lru_cache(maxsize=8)
def _pseudo_pair(n: int) -> GenericPair:
    return GenericPair.pseudo4_rational(n)


def _hall_columns(n: int) -> list:
    """Pseudo-generic coordinates of the degree-n parts of the weight-n basic commutators."""
    pair = _pseudo_pair(n)
    return [img.substitute(pair.x, pair.y).coordinates() for img in hall_min_images(n, QQ)]


@lru_cache(maxsize=16)
def _evaluator(cap: int):
    return free_evaluator(QQ, cap)


def _factors_image(factors, cap: int) -> Unit:
    """Free-algebra image of ``prod term^e``; rational exponents go through the binomial series."""
    ev = _evaluator(cap)
    out = Unit(NCSeries(QQ, cap, {}))
    for term, e in factors:
        out = out * (ev.term(term) ** e)
    return out


def _degree_part(u: Unit, n: int) -> Mat2:
    pair = _pseudo_pair(n)
    return u.delta.homogeneous_component(n).with_cap(n).substitute(pair.x, pair.y)


def _to_zp_mod(c, p: int, k: int) -> int:
    """Integer in [0, p^k) congruent to the p-integral rational ``c``."""
    c = Fraction(c)
    m = p ** k
    return c.numerator * pow(c.denominator, -1, m) % m


# -- data ------------------------------------------------------------------------------------


@dataclass
class IdentityWord:
    """Seed word times corrections; exponents are exact p-integral rationals."""

    p: int
    target_degree: int
    modulus_exponent: int
    seed: list                                      # [(basic commutator, int)]
    corrections: list = field(default_factory=list)  # [(n, [(basic commutator, rational)])]
    steps: list = field(default_factory=list, repr=False, compare=False)

    def factors(self) -> list:
        out = [(t, e) for t, e in self.seed if e]
        for _, fs in self.corrections:
            out.extend((t, e) for t, e in fs if e)
        return out

    def word(self) -> GroupWord:
        return GroupWord(tuple(self.factors()))

    def integer_word(self) -> GroupWord:
        """Same word with every exponent replaced by a representative mod p^k."""
        p, k = self.p, self.modulus_exponent
        fs = [(t, _to_zp_mod(e, p, k)) for t, e in self.factors()]
        return GroupWord(tuple((t, e) for t, e in fs if e))

    def seed_coordinates(self) -> list:
        return [e for _, e in self.seed]

    def nontrivial_mod_p(self) -> bool:
        """Weight-6 coordinates not all divisible by p, so the word is not in the seventh term."""
        return any(e % self.p for e in self.seed_coordinates())

    def expression(self) -> str:
        parts = []
        for t, e in self.factors():
            s = term_str(t)
            parts.append(s if e == 1 else f"{s}^({e})")
        return " ".join(parts) or "1"

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "p": self.p,
            "N": self.target_degree,
            "k": self.modulus_exponent,
            "seed": [str(e) for e in self.seed_coordinates()],
            "corrections": [
                {"n": n, "coords": [str(e) for _, e in fs]} for n, fs in self.corrections
            ],
            "expression": self.expression(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "IdentityWord":
        if data.get("schema") != SCHEMA:
            raise StructureError("not an identity word document")
        seed_terms = hall_basis_of_weight(6)
        seed = [(t, int(e)) for t, e in zip(seed_terms, data["seed"])]
        corr = []
        for item in data["corrections"]:
            terms = hall_basis_of_weight(item["n"])
            corr.append((item["n"], [(t, _frac(e)) for t, e in zip(terms, item["coords"])]))
        return cls(data["p"], data["N"], data["k"], seed, corr)


def _frac(s: str):
    f = Fraction(s)
    return f.numerator if f.denominator == 1 else f


@dataclass
class CorrectionStepReport:
    degree: int
    residual: Mat2
    coefficients: list          # rational, p-integral, aligned with the weight-n basic commutators
    correction: GroupWord

    @property
    def trivial(self) -> bool:
        return not any(self.coefficients)

    def min_valuation(self, p: int):
        vals = [padic_valuation(c, p) for c in self.coefficients if c]
        return min(vals) if vals else math.inf


# -- construction -------------------------------------------------------------------------------


def seed_coordinates(p: int) -> list:
    """Primitive integer kernel vector of the weight-6 degree-6 map."""
    _check_prime(p)
    cols = _hall_columns(6)
    ker = linalg.kernel(cols)
    if not ker:
        raise AlgorithmError("the weight-6 map has no kernel")
    rel = ker[0]
    vec = [Fraction(rel.get(i, 0)) for i in range(len(cols))]
    den = reduce(math.lcm, (v.denominator for v in vec), 1)
    ints = [int(v * den) for v in vec]
    g = reduce(math.gcd, ints, 0)
    ints = [v // g for v in ints]
    if not any(v % p for v in ints):
        raise AlgorithmError("kernel vector is divisible by p after clearing denominators")
    return ints


def seed_kernel_dimension() -> int:
    return len(linalg.kernel(_hall_columns(6)))


def find_seed(p: int) -> GroupWord:
    """Integer product of weight-6 basic commutators evaluating to 1 in degree 6."""
    coords = seed_coordinates(p)
    word = GroupWord(tuple((t, e) for t, e in zip(hall_basis_of_weight(6), coords) if e))
    md = _factors_image(word.factors, 6).delta.with_cap(6)
    pair = _pseudo_pair(6)
    if not md.substitute(pair.x, pair.y).is_zero():
        raise AlgorithmError("seed does not vanish in degree 6")
    return word


def correction_step(current: IdentityWord, n: int) -> CorrectionStepReport:
    """Cancel the degree-n part of the current word with weight-n basic commutators."""
    _check_prime(current.p)
    if n < 7:
        raise DegreeRangeError("corrections start in degree 7")
    img = _factors_image(current.factors(), n)
    below = _pseudo_pair(n - 1)
    if not img.delta.with_cap(n - 1).substitute(below.x, below.y).is_zero():
        raise AlgorithmError(f"residual has degree below {n}")
    residual = _degree_part(img, n)
    terms = hall_basis_of_weight(n)
    if residual.is_zero():
        coeffs = [0] * len(terms)
    else:
        cols = _hall_columns(n)
        target = {k: -v for k, v in residual.coordinates().items()}
        try:
            sol = linalg.p_integral_solve(cols, target, current.p)
        except ValueError as exc:
            raise AlgorithmError(f"degree {n}: no {current.p}-integral correction exists") from exc
        if sol is None:
            raise AlgorithmError(f"degree {n}: residual is not in the span of the commutator images")
        coeffs = [_frac(str(c)) if isinstance(c, Fraction) else c for c in sol]
    word = GroupWord(tuple((t, c) for t, c in zip(terms, coeffs) if c))
    return CorrectionStepReport(n, residual, coeffs, word)


def build_identity(p: int, target_degree: int, k: int | None = None) -> IdentityWord:
    """Seed plus corrections in degrees 7 .. N-1, so the word is 1 up to degree N-1."""
    _check_prime(p)
    if target_degree < 7:
        raise DegreeRangeError("target degree must be at least 7")
    k = default_modulus_exponent(p, target_degree) if k is None else k
    seed = list(zip(hall_basis_of_weight(6), seed_coordinates(p)))
    word = IdentityWord(p, target_degree, k, seed)
    for n in range(7, target_degree):
        rep = correction_step(word, n)
        word.corrections.append((n, list(zip(hall_basis_of_weight(n), rep.coefficients))))
        word.steps.append(rep)
    return word


@dataclass
class IdentityCertificate:
    p: int
    target_degree: int
    vanishes_below_target: bool     # rational exponents, generic 2x2 matrices
    integer_min_valuation: object   # smallest p-adic valuation below degree N for the mod p^k word
    nontrivial_mod_p: bool
    corrections_p_integral: bool

    @property
    def ok(self) -> bool:
        return self.vanishes_below_target and self.nontrivial_mod_p and self.corrections_p_integral

    def to_json(self) -> dict:
        v = self.integer_min_valuation
        return {
            "schema": "genmat.identity-certificate/1",
            "p": self.p,
            "N": self.target_degree,
            "vanishes_below_target": self.vanishes_below_target,
            "integer_word_min_valuation": None if v == math.inf else v,
            "nontrivial_mod_p": self.nontrivial_mod_p,
            "corrections_p_integral": self.corrections_p_integral,
            "ok": self.ok,
        }


def evaluate_below(word: GroupWord, degree: int, flavor: str = "generic8") -> Mat2:
    """``w(1+x, 1+y) - 1`` at rational generic (or pseudo-generic) matrices, degrees < ``degree``."""
    cap = degree - 1
    img = _factors_image(word.factors, cap)
    pair = GenericPair.generic8(QQ, cap) if flavor == "generic8" else GenericPair.pseudo4_rational(cap)
    return img.delta.substitute(pair.x, pair.y)


def verify_identity(word: IdentityWord, flavor: str = "generic8", check_integer_word: bool = True) -> IdentityCertificate:
    """Evaluate at generic matrices and confirm the word is 1 below the target degree."""
    N, p = word.target_degree, word.p
    vanishes = evaluate_below(word.word(), N, flavor).is_zero()
    mv = None
    if check_integer_word:
        m = evaluate_below(word.integer_word(), N, flavor)
        vals = [padic_valuation(c, p) for c in m.coordinates().values()]
        mv = min(vals) if vals else math.inf
    integral = all(padic_valuation(e, p) >= 0 for _, fs in word.corrections for _, e in fs if e)
    return IdentityCertificate(p, N, vanishes, mv, word.nontrivial_mod_p(), integral)


# -- characteristic 2: bounded search for the correction step ------------------------------------


@dataclass
class SearchResult:
    found: bool
    reason: str = ""
    h: Unit | None = None
    choices: list = field(default_factory=list)     # [(catalog index, (u, v, w))]
    before: tuple | None = None                     # (nbar, ibar) of g_x
    after: tuple | None = None                      # (nbar, ibar) of (gh)_x; None entries mean none below the cap
    verified: bool = False

    def to_json(self) -> dict:
        return {
            "schema": "genmat.char2-search/1",
            "found": self.found,
            "reason": self.reason,
            "choices": [[i, list(uvw)] for i, uvw in self.choices],
            "before": list(self.before) if self.before else None,
            "after": list(self.after) if self.after else None,
            "verified": self.verified,
        }


def _jbits(j: JElement) -> dict:
    """Sparse GF(2) vector of a JElement."""
    out = {}
    for k, t in enumerate(j.coeffs()):
        b = t.bits
        while b:
            low = b & -b
            out[(k, low.bit_length() - 1)] = 1
            b ^= low
    return out


def _apply_ops(g: Unit, u: int, v: int, w: int) -> Unit:
    for _ in range(u):
        g = phi_x(g)
    for _ in range(v):
        g = phi_y(g)
    for _ in range(w):
        g = psi(g)
    return g


def _improved(before: tuple, after: tuple) -> bool:
    nb, ib = before
    na, ia = after
    if na is None:
        return True
    return na > nb or (na == nb and ia > ib)


def char2_correction_search(g: Unit, catalog, bound: int = 6, headroom: int = 8) -> SearchResult:
    """Look for h with a larger (nbar, ibar) of (gh)_x, built from operator images of catalog elements.

    Candidates are ``psi^w phi_y^v phi_x^u(theta)`` with ``u + v + w <= bound``;
    their lowest U pieces are predicted by the operator lemmas and a GF(2)
    combination matching ``min_x(g_x) / t(x)^8`` is searched for.  The
    assembled ``h = phi_x(prod h_j)`` is then evaluated and the improvement is
    checked directly.
    """
    cap = g.cap
    gx = phi_x(g)
    cg = invariants_of(gx)
    if not cg.good:
        return SearchResult(False, "g_x is not good at this cap")
    before = (cg.nbar, cg.ibar)
    if cg.ibar + 1 > cap:
        raise DegreeRangeError("cap exhausted: increase the cap")
    target = cg.min_x
    if not all(t.divisible_by_lam_power(8) for t in target.coeffs()):
        return SearchResult(False, "min_x(g_x) is not divisible by t(x)^8", before=before)
    lam8 = TPoly.monomial(cap, 8, 0, 0)
    want = (cg.nbar - 8, cg.ibar - 8)
    theta = TPoly.monomial(cap, 0, 1, 0)
    lam4 = TPoly.monomial(cap, 4, 0, 0)
    d = TPoly.monomial(cap, 0, 0, 2) + TPoly.monomial(cap, 1, 1, 1)
    d4 = d * d
    cands = []
    for idx, th in enumerate(catalog):
        ct = invariants_of(th)
        if not ct.good:
            continue
        for u, v, w in iproduct(range(bound + 1), repeat=3):
            if u + v + w > bound:
                continue
            nb, ib = ct.nbar + 4 * u, ct.ibar + 4 * u + v + 8 * w
            if (nb, ib) != want:
                continue
            factor = (lam4 ** u) * (theta ** v) * (d4 ** w)
            predicted = ct.min_x.scale(factor * lam8)
            if predicted.is_zero():
                continue
            cands.append((idx, (u, v, w), predicted))
    if not cands:
        return SearchResult(False, "no catalog image has the required (nbar, ibar)", before=before)
    sol = linalg.solve_in_span([_jbits(c[2]) for c in cands], _jbits(target), 2)
    if sol is None:
        return SearchResult(False, "min_x(g_x) is outside the span of the catalog images", before=before)
    chosen = [cands[i] for i in sorted(sol) if sol[i] % 2]
    # order so that no partial sum equals the next summand
    ordered, acc = [], None
    pool = list(chosen)
    while pool:
        for j, c in enumerate(pool):
            if acc is None or c[2] != acc:
                ordered.append(pool.pop(j))
                acc = c[2] if acc is None else acc + c[2]
                break
        else:
            return SearchResult(False, "summands cancel in every order", before=before)
    prod = None
    if cap < headroom + max(invariants_of(catalog[i]).ibar for i, _, _ in ordered):
        raise DegreeRangeError("cap exhausted: increase the cap")
    for idx, (u, v, w), _ in ordered:
        hj = _apply_ops(catalog[idx], u, v, w)
        prod = hj if prod is None else prod * hj
    h = phi_x(prod)
    c_after = invariants_of(phi_x(g * h))
    after = (c_after.nbar, c_after.ibar)
    ok = _improved(before, after)
    return SearchResult(ok, "" if ok else "assembled h does not improve (nbar, ibar)", h,
                        [(i, uvw) for i, uvw, _ in ordered], before, after, ok)
