"""Filtrations of the ideal J, the U/V/W split, goodness, and the commutator operators.

Every trace coefficient is rewritten as ``s0 + vartheta*s1`` with ``s0, s1``
polynomials in lam, theta and delta = [x,y]^2.  Grouping monomials by their
lam-exponent ``n`` and their total degree ``i`` gives the unique split of an
element of J into pieces

    U_{n,i}  on [x,y]x, [x,y]y      V_{n,i}  on [x,y]^2      W_{n,i}  on [x,y]xy

whose coefficients are ``lam^n`` times a lam-free normal form.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from ..errors import DegreeRangeError, DivisibilityError, MembershipError, StructureError
from ..matrix import Mat2
from ..units import Unit
from ..words import Commutator, Evaluator, GroupWord, comm
from .ring import HEADROOM, J_DEGREES, JElement, RElement, bracket_xy, delta_poly, j_generators, to_J_coefficients, to_R_coefficients
from .tpoly import TPoly

# -- U/V/W decomposition --------------------------------------------------------


@dataclass(frozen=True)
class UVW:
    u: JElement
    v: JElement
    w: JElement

    def total(self) -> JElement:
        return self.u + self.v + self.w


@dataclass
class JDecomposition:
    """Sparse map ``(n, i) -> UVW``; absent keys are zero."""

    cap: int
    components: dict = field(default_factory=dict)

    def recompose(self) -> JElement:
        z = TPoly.zero(self.cap)
        out = JElement(self.cap, z, z, z, z)
        for part in self.components.values():
            out = out + part.total()
        return out

    def keys(self, which: str) -> list:
        """Sorted ``(n, i)`` with a nonzero ``which`` part (``"u"``, ``"v"`` or ``"w"``)."""
        return sorted(k for k, p in self.components.items() if not getattr(p, which).is_zero())

    def bounds_ok(self) -> bool:
        """U pieces satisfy i >= n + 3, V and W pieces i >= n + 4."""
        return all(i >= n + 3 for n, i in self.keys("u")) and all(
            i >= n + 4 for which in "vw" for n, i in self.keys(which)
        )

    def to_json(self) -> dict:
        comps = []
        for (n, i), p in sorted(self.components.items()):
            comps.append({"n": n, "i": i, "U": p.u.to_json(), "V": p.v.to_json(), "W": p.w.to_json()})
        return {"schema": "genmat.uvw/1", "cap": self.cap, "components": comps}


def _flip(d: dict, key):
    if key in d:
        del d[key]
    else:
        d[key] = 1


def decompose_UVW(f) -> JDecomposition:
    """Split ``f`` (a JElement, or an iterable of them) into its U/V/W pieces."""
    if isinstance(f, JElement):
        f = [f]
    f = list(f)
    if not f:
        raise StructureError("nothing to decompose")
    cap = f[0].cap
    total = f[0]
    for g in f[1:]:
        total = total + g.with_cap(cap)
    # (n, i, k) -> (s0, s1) in normal form with the lam power stripped off
    buckets: dict = {}
    for k, coeff in enumerate(total.coeffs()):
        s0, s1 = coeff.normal_form()
        for part, (extra, idx) in ((s0, (0, 0)), (s1, (2, 1))):
            for (a, b, e) in part:
                i = a + b + 4 * e + extra + J_DEGREES[k]
                slot = buckets.setdefault((a, i, k), ({}, {}))
                _flip(slot[idx], (a, b, e))
    pieces: dict = {}
    z = TPoly.zero(cap)
    for (n, i, k), (s0, s1) in buckets.items():
        if not s0 and not s1:
            continue
        coeffs = [z, z, z, z]
        coeffs[k] = TPoly.from_normal_form(cap, s0, s1)
        pieces.setdefault((n, i), []).append(JElement(cap, *coeffs))
    out = {}
    zj = JElement(cap, z, z, z, z)
    for key, items in pieces.items():
        u = v = w = zj
        for item in items:
            if item.a.bits or item.b.bits:
                u = u + item
            elif item.c.bits:
                v = v + item
            else:
                w = w + item
        out[key] = UVW(u, v, w)
    return JDecomposition(cap, out)


# -- filtrations -------------------------------------------------------------------


def in_J_n(a: JElement, n: int) -> bool:
    """a in t(x)^n J."""
    return all(t.divisible_by_lam_power(n) for t in a.coeffs())


def in_level_n_xy_part(a: JElement, n: int) -> bool:
    """a in t(x)^n (T [x,y]x + T [x,y]y)."""
    return not a.c.bits and not a.d.bits and a.a.divisible_by_lam_power(n) and a.b.divisible_by_lam_power(n)


def in_level_n_square_part(a: JElement, n: int) -> bool:
    """a in t(x)^n T [x,y]^2."""
    return not (a.a.bits or a.b.bits or a.d.bits) and a.c.divisible_by_lam_power(n)


def j_level(a: JElement):
    """Largest n with a in J_n (None for zero)."""
    vals = [t.lam_valuation() for t in a.coeffs() if t.bits]
    return min(vals) if vals else None


# -- invariants of group elements ---------------------------------------------------


def _as_relement_unit(g) -> Unit:
    if isinstance(g, RElement):
        return Unit(g - g.one())
    if not isinstance(g, Unit):
        raise StructureError("expected a Unit over RElement or Mat2")
    d = g.delta
    if isinstance(d, Mat2):
        return Unit(to_R_coefficients(d))
    if isinstance(d, RElement):
        return g
    raise StructureError("expected a Unit over RElement or Mat2")


def j_part(g) -> JElement:
    """``g - 1`` in J coordinates; MembershipError when some term is outside J."""
    u = _as_relement_unit(g)
    try:
        return to_J_coefficients(u.delta)
    except MembershipError as exc:
        raise MembershipError("some term of g - 1 is outside J, so g is not in the closure of the second derived subgroup") from exc


@dataclass
class GoodnessCertificate:
    """Invariants of a unit with all terms in J, relative to the degree cap.

    ``nbar``/``ibar`` are None when no U piece occurs up to the cap.
    """

    cap: int
    n_of: int | None
    nbar: int | None
    ibar: int | None
    min_x: JElement | None
    in_breve: bool
    shape_verified: bool
    violations: list = field(default_factory=list)

    @property
    def good(self) -> bool:
        return self.in_breve and self.nbar is not None and self.shape_verified

    def to_json(self) -> dict:
        return {
            "schema": "genmat.goodness/1",
            "cap": self.cap,
            "n": self.n_of,
            "nbar": self.nbar,
            "ibar": self.ibar,
            "min_x": None if self.min_x is None else self.min_x.to_json(),
            "in_breve": self.in_breve,
            "good": self.good,
            "violations": self.violations,
        }


def invariants_of(g) -> GoodnessCertificate:
    """n, nbar, ibar, min_x and the goodness shape of ``g``."""
    jp = j_part(g)
    dec = decompose_UVW(jp)
    cap = jp.cap
    if not dec.components:
        return GoodnessCertificate(cap, None, None, None, None, False, False, ["g is the identity up to the cap"])
    n_of = min(n for n, _ in dec.components)
    ukeys = dec.keys("u")
    if not ukeys:
        return GoodnessCertificate(cap, n_of, None, None, None, n_of >= 3, False, ["no U piece below the cap"])
    nbar, ibar = min(ukeys)
    min_x = dec.components[(nbar, ibar)].u
    violations = []
    for n, i in dec.keys("v"):
        if n < nbar - 1:
            violations.append(f"V piece at (n={n}, i={i}) lies below C_{nbar - 1}")
    for n, i in dec.keys("w"):
        if n < nbar + 2:
            violations.append(f"W piece at (n={n}, i={i}) lies below J_{nbar + 2}")
    return GoodnessCertificate(cap, n_of, nbar, ibar, min_x, n_of >= 3, not violations, violations)


def is_good(g) -> bool:
    try:
        return invariants_of(g).good
    except MembershipError:
        return False


# -- operators -------------------------------------------------------------------------


def x_to_fourth(cap: int) -> Unit:
    """(1+x)^4 = 1 + t(x)^3 x."""
    x, _ = RElement.gens(cap)
    return Unit(x) ** 4


def phi_x(g: Unit) -> Unit:
    cap = g.cap
    x, _ = RElement.gens(cap)
    lam = TPoly.monomial(cap, 3, 0, 0)
    return Unit(x.scale(lam)).commutator(g)


def phi_y(g: Unit) -> Unit:
    _, y = RElement.gens(g.cap)
    return Unit(y).commutator(g)


def psi(g: Unit) -> Unit:
    x, y = RElement.gens(g.cap)
    c = Unit(x).commutator(Unit(y))
    return (c * c).commutator(g)


def _lam_power(cap: int, k: int) -> TPoly:
    return TPoly.monomial(cap, k, 0, 0)


@dataclass
class TransportReport:
    checked: int = 0
    skipped: int = 0
    pairs_checked: int = 0
    pairs_skipped: int = 0
    failures: list = field(default_factory=list)
    findings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "schema": "genmat.transport/1",
            "checked": self.checked,
            "skipped": self.skipped,
            "pairs_checked": self.pairs_checked,
            "pairs_skipped": self.pairs_skipped,
            "ok": self.ok,
            "failures": self.failures,
            "findings": self.findings,
        }


def _check_image(report, tag, idx, cert_g, image, factor: TPoly, shift: int):
    c = invariants_of(image)
    if not c.good:
        report.failures.append(f"{tag}[{idx}]: image not good ({'; '.join(c.violations) or 'no U piece'})")
        return
    if c.nbar != cert_g.nbar + shift:
        report.failures.append(f"{tag}[{idx}]: nbar {cert_g.nbar} -> {c.nbar}, expected shift {shift}")
    expected = cert_g.min_x.scale(factor)
    if c.min_x != expected:
        report.failures.append(f"{tag}[{idx}]: min_x mismatch")


def verify_transport(catalog, headroom: int = 8) -> TransportReport:
    """Check the three operator lemmas on each good element and additivity on pairs.

    Elements with ``ibar + headroom > cap`` are skipped for the operators (their
    images would leave the visible range) but still take part in the pairs.
    """
    rep = TransportReport()
    entries = []
    for idx, g in enumerate(catalog):
        c = invariants_of(g)
        if not c.good:
            raise StructureError(f"catalog element {idx} is not good")
        entries.append((idx, g, c))
        if c.ibar + headroom > g.cap:
            rep.skipped += 1
            continue
        cap = g.cap
        lam4 = _lam_power(cap, 4)
        theta = TPoly.monomial(cap, 0, 1, 0)
        d = delta_poly(cap)
        _check_image(rep, "phi_x", idx, c, phi_x(g), lam4, 4)
        _check_image(rep, "phi_y", idx, c, phi_y(g), theta, 0)
        _check_image(rep, "psi", idx, c, psi(g), d * d, 0)
        rep.checked += 1
    for (i1, g, cg), (i2, h, ch) in combinations(entries, 2):
        if (cg.nbar, cg.ibar) != (ch.nbar, ch.ibar):
            continue
        if cg.min_x == ch.min_x:
            rep.pairs_skipped += 1
            rep.findings.append(f"pair[{i1},{i2}]: equal lowest U pieces, additivity does not apply")
            continue
        c = invariants_of(g * h)
        rep.pairs_checked += 1
        if not c.good or (c.nbar, c.ibar) != (cg.nbar, cg.ibar) or c.min_x != cg.min_x + ch.min_x:
            rep.failures.append(f"multi[{i1},{i2}]: product invariants do not add up")
    return rep


def pre_good_check(g: Unit) -> dict:
    """For g with all terms in J_3: g_x is good, n(g_x) = n0 + 3, n(g_x) <= nbar(g_x) <= n(g_x) + 1.

    ``n0`` is the smallest J-level of the brackets [x, a_i] over the terms a_i of g - 1.
    Returns a dict of named booleans plus the numbers involved.
    """
    cg = invariants_of(g)
    if not cg.in_breve:
        raise StructureError("g must have all terms in J_3")
    gx = phi_x(g)
    c = invariants_of(gx)
    x, _ = RElement.gens(g.cap)
    a = _as_relement_unit(g).delta
    br = x * a + a * x
    # [x, a_i] has degree i + 1 and the product with t(x)^3 adds 3 more; only
    # terms whose image b_{i+4} is still visible below the cap are usable
    visible = br.zero()
    for i in range(1, g.cap - 3):
        visible = visible + br.homogeneous_component(i + 1)
    n0 = j_level(to_J_coefficients(visible)) if not visible.is_zero() else None
    out = {"n": c.n_of, "nbar": c.nbar, "n0": n0, "good": c.good}
    out["n_is_n0_plus_3"] = n0 is not None and c.n_of == n0 + 3
    out["nbar_window"] = c.nbar is not None and c.n_of <= c.nbar <= c.n_of + 1
    return out


# -- shape checks for commutator words ----------------------------------------------------


def relement_evaluator(cap: int) -> Evaluator:
    x, y = RElement.gens(cap)
    return Evaluator(Unit(x), Unit(y))


def _bracket_factor(a: RElement):
    """``r`` with ``a = [x,y] r`` or None (uses [x,y]^2 = delta, a scalar)."""
    big = a.cap + HEADROOM
    A = a.with_cap(big)
    c = bracket_xy(big)
    P = c * A
    try:
        r = RElement(big, tuple(t.div_delta() for t in P.c))
    except DivisibilityError:
        return None
    if c * r != A:
        return None
    return r


def commutator_shape_check(w, cap: int = 14, second_derived: bool | None = None) -> dict:
    """g - 1 = [x,y] r for derived words; every term in J for second derived words."""
    if not isinstance(w, GroupWord):
        w = GroupWord.of(w)
    g = relement_evaluator(cap).word(w)
    out = {"word": str(w), "cap": cap, "trivial": g.is_identity()}
    out["bracket_shape"] = _bracket_factor(g.delta) is not None
    if second_derived is None:
        second_derived = _is_second_derived(w)
    if second_derived:
        try:
            jp = to_J_coefficients(g.delta)
            out["in_J"] = True
            out["n"] = j_level(jp)
        except MembershipError:
            out["in_J"] = False
    return out


def _is_commutator_term(t) -> bool:
    if isinstance(t, GroupWord):
        return all(_is_commutator_term(s) for s, _ in t.factors)
    return isinstance(t, Commutator)


def _is_second_derived(w: GroupWord) -> bool:
    def term_ok(t):
        if isinstance(t, GroupWord):
            return all(term_ok(s) for s, _ in t.factors)
        return isinstance(t, Commutator) and _is_commutator_term(t.left) and _is_commutator_term(t.right)

    return term_ok(w)


def breve_recipe_check(v, r: int = 1, cap: int = 24) -> dict:
    """g = [v, (1+x)^2]^(2^r) for second derived v has all terms in t(x)^(2^r) J."""
    if not isinstance(v, GroupWord):
        v = GroupWord.of(v)
    ev = relement_evaluator(cap)
    gv = ev.word(v)
    x, _ = RElement.gens(cap)
    g = gv.commutator(Unit(x) ** 2) ** (2 ** r)
    if g.is_identity():
        raise DegreeRangeError(f"g is trivial up to degree {cap}; increase the cap")
    jp = to_J_coefficients(g.delta)
    n = j_level(jp)
    return {"r": r, "cap": cap, "n": n, "ok": n >= 2 ** r}


def j_ideal_closure_check(trials: int = 50, cap: int = 12, seed: int = 0) -> dict:
    """The eight product rules with x, then random J*R and R*J products staying in J."""
    x, y = RElement.gens(cap)
    lam, _, vt = TPoly.gens(cap)
    c = bracket_xy(cap)
    cx, cy, c2, cxy = j_generators(cap)
    rules = {
        "cx_x": cx * x == cx.scale(lam),
        "cy_x": cy * x == c2 + cxy,
        "c2_x": c2 * x == cx.scale(vt) + c2.scale(lam) + cxy.scale(lam),
        "cxy_x": cxy * x == cx.scale(vt),
        "x_cx": (x * cx).is_zero(),
        "x_cy": x * cy == (c.scale(lam) + cx) * y,
        "x_c2": x * c2 == c2 * x,
        "x_cxy": (x * cxy).is_zero(),
    }
    rng = random.Random(seed)
    closed = 0
    for _ in range(trials):
        j = random_j(cap, rng).to_R()
        r = random_r(cap, rng)
        try:
            to_J_coefficients(j * r)
            to_J_coefficients(r * j)
            closed += 1
        except MembershipError:
            pass
    return {"rules": rules, "trials": trials, "closed": closed, "ok": all(rules.values()) and closed == trials}


# -- random elements -----------------------------------------------------------------------


def random_tpoly(cap: int, rng: random.Random, max_deg: int | None = None, nterms: int = 4) -> TPoly:
    max_deg = cap if max_deg is None else min(max_deg, cap)
    if max_deg < 0:
        return TPoly.zero(cap)
    monos = []
    for _ in range(nterms):
        c = rng.randint(0, max_deg // 2)
        b = rng.randint(0, max_deg - 2 * c)
        a = rng.randint(0, max_deg - 2 * c - b)
        monos.append((a, b, c))
    return TPoly.from_monomials(cap, monos)


def random_r(cap: int, rng: random.Random, max_deg: int | None = None) -> RElement:
    max_deg = cap if max_deg is None else max_deg
    return RElement(cap, tuple(random_tpoly(cap, rng, max_deg - d) for d in (0, 1, 1, 2)))


def random_j(cap: int, rng: random.Random, max_deg: int | None = None) -> JElement:
    max_deg = cap if max_deg is None else max_deg
    return JElement(cap, *(random_tpoly(cap, rng, max_deg - d) for d in J_DEGREES))


# -- catalog of good elements ------------------------------------------------------------------


def random_short_word(rng: random.Random, max_len: int = 3) -> GroupWord:
    n = rng.randint(1, max_len)
    return GroupWord(tuple((rng.choice("XY"), rng.choice((1, -1))) for _ in range(n)))


def random_second_derived(rng: random.Random, max_len: int = 2) -> Commutator:
    """[[a, b], [c, d]] with a, b, c, d random short words."""
    def first():
        return comm(random_short_word(rng, max_len), random_short_word(rng, max_len))

    return comm(first(), first())


def good_catalog(size: int = 24, cap: int = 20, seed: int = 0, max_ibar: int | None = None,
                 max_attempts: int = 2000, max_len: int = 3) -> list:
    """Good elements phi_x(w), w a random second derived word; returns ``[(word, Unit)]``.

    With ``max_ibar`` set, only elements with ``ibar <= max_ibar`` are kept.
    Duplicate values are dropped.
    """
    if cap < 12:
        raise DegreeRangeError("cap too small to hold any good element")
    max_ibar = cap if max_ibar is None else max_ibar
    rng = random.Random(seed)
    ev = relement_evaluator(cap)
    seen = set()
    out = []
    for _ in range(max_attempts):
        if len(out) >= size:
            break
        w = random_second_derived(rng, max_len)
        g = ev.term(w)
        if g.is_identity():
            continue
        gx = phi_x(g)
        if gx.is_identity() or gx in seen:
            continue
        c = invariants_of(gx)
        if c.good and c.ibar <= max_ibar:
            seen.add(gx)
            out.append((w, gx))
    return out
