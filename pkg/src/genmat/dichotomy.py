"""Rank tables and the 2-torsion in degree 7.

For odd p the degree filtration and the lower central series of the group
generated by 1+x, 1+y agree, and the ranks are read off the Lie spans.  At
p = 2 three weight-6 commutators land in degree 7 with half-integral
coordinates, giving a copy of (Z/2)^3 between the two filtrations.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .errors import DegreeRangeError
from .freealg import NCSeries
from .lie import (
    L_intersect_A_membership,
    family_generators,
    free_basis,
    free_basis_coordinates,
    hall_min_components,
    is_integral,
)
from .matrix import Mat2, lie_bracket
from .poly import QQ, padic_valuation
from .units import Unit
from .words import Evaluator, GenericPair, comm, free_evaluator, witt_l2, zubkov_m

# -- ranks -------------------------------------------------------------------------


@dataclass(frozen=True)
class RankRow:
    n: int
    l2: int
    m: int
    omega_lower: int    # rank over Z_(p) of the weight-n commutator images (equals the rational rank)
    reduction_rank: int  # rank of the same coordinate vectors reduced mod p (informational)
    p: int

    def to_json(self) -> dict:
        return {"n": self.n, "l2": self.l2, "m": self.m, "omega_lower": self.omega_lower,
                "reduction_rank": self.reduction_rank, "p": self.p}


def _lie_rank(n: int) -> int:
    return 2 if n == 1 else zubkov_m(n)


def rank_table(p: int, n_max: int, cap: int | None = None) -> list:
    """One row per degree 1..n_max computed at the rational pseudo-generic pair."""
    if n_max < 1:
        raise DegreeRangeError("n_max must be positive")
    if cap is not None and n_max > cap:
        raise DegreeRangeError(f"n_max {n_max} exceeds the cap {cap}; increase --cap")
    rows = []
    for n in range(1, n_max + 1):
        pair = GenericPair.pseudo4_rational(max(n, 1))
        if n == 1:
            vecs = [pair.x.coordinates(), pair.y.coordinates()]
        else:
            vecs = [m.coordinates() for m in hall_min_components(pair, n)]
        rows.append(RankRow(n, witt_l2(n), _lie_rank(n), linalg.rank(vecs), linalg.rank(vecs, p), p))
    return rows


# -- torsion witnesses ---------------------------------------------------------------

WITNESS_LETTERS = {"g1": ("X", "X"), "g2": ("X", "Y"), "g3": ("Y", "Y")}


def witness_term(name: str):
    """[X, Y, a, b, [X, Y]] for the letters (a, b) of the named witness."""
    a, b = WITNESS_LETTERS[name]
    return comm(comm("X", "Y", a, b), comm("X", "Y"))


def closed_form(name: str, pair: GenericPair) -> Mat2:
    """The degree-7 class of each witness modulo the integral Lie span."""
    al, be, ga = pair.alpha(), pair.beta(), pair.gamma()
    c = lie_bracket(pair.x, pair.y)
    cx, cy = lie_bracket(c, pair.x), lie_bracket(c, pair.y)
    half = Fraction(1, 2)
    two_delta = (be * be - al * ga).scale(half)
    if name == "g1":
        return two_delta * cx
    if name == "g3":
        return two_delta * cy
    f1 = (be * cx + al * cy).scale(half)
    f2 = (be * cy + ga * cx).scale(half)
    return be * f1 + be * f2


@dataclass
class TorsionWitness:
    name: str
    word: object
    min7: Mat2
    coords: dict                # free-basis label -> rational
    closed_form_ok: bool        # min7 - closed form has integral coordinates
    bch_ok: bool                # exponential route agrees modulo the integral span
    bch_exact: bool             # ... and agrees exactly

    def min_valuation(self):
        return min(padic_valuation(c, 2) for c in self.coords.values())

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "word": str(self.word),
            "coords": [[list(k), str(v)] for k, v in sorted(self.coords.items())],
            "min_valuation": self.min_valuation(),
            "closed_form_ok": self.closed_form_ok,
            "bch_ok": self.bch_ok,
            "bch_exact": self.bch_exact,
        }


def _integral_coords(d: dict) -> bool:
    return all(padic_valuation(c, 2) >= 0 for c in d.values())


def _exp_evaluator(cap: int) -> Evaluator:
    out = []
    for letter in "xy":
        g = NCSeries.generator(QQ, cap, letter)
        term, acc = g.one(), g.zero()
        for k in range(1, cap + 1):
            term = (term * g).scale(Fraction(1, k))
            acc = acc + term
        out.append(Unit(acc))
    return Evaluator(*out)


def _min7(img: Unit, pair: GenericPair) -> Mat2:
    low = img.delta.with_cap(6).substitute(*_pair_at(pair, 6))
    if not low.is_zero():
        raise DegreeRangeError("witness does not vanish below degree 7")
    return img.delta.homogeneous_component(7).with_cap(7).substitute(*_pair_at(pair, 7))


def _pair_at(pair: GenericPair, cap: int):
    q = pair.with_cap(cap)
    return q.x, q.y


def torsion_witnesses(cap: int = 8) -> list:
    """Evaluate the three witnesses as group commutators and compare with the closed forms."""
    if cap < 7:
        raise DegreeRangeError("cap must be at least 7 to see degree 7; increase --cap")
    pair = GenericPair.pseudo4_rational(7)
    direct = free_evaluator(QQ, cap)
    expo = _exp_evaluator(cap)
    out = []
    for name in ("g1", "g2", "g3"):
        t = witness_term(name)
        m = _min7(direct.term(t), pair)
        coords = free_basis_coordinates(m, 7, pair)
        cf = free_basis_coordinates(closed_form(name, pair), 7, pair)
        diff = {k: coords.get(k, 0) - cf.get(k, 0) for k in set(coords) | set(cf)}
        mb = _min7(expo.term(t), pair)
        bcoords = free_basis_coordinates(mb, 7, pair)
        bdiff = {k: coords.get(k, 0) - bcoords.get(k, 0) for k in set(coords) | set(bcoords)}
        out.append(TorsionWitness(name, t, m, coords, _integral_coords(diff), _integral_coords(bdiff), mb == m))
    return out


@dataclass
class TorsionReport:
    not_in_lattice: list
    doubles_in: list
    gf2_rank: int
    closed_forms: list
    bch: list
    in_integral_families: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (all(self.not_in_lattice) and all(self.doubles_in) and self.gf2_rank == 3
                and all(self.closed_forms) and all(self.bch) and all(self.in_integral_families))

    def to_json(self) -> dict:
        return {
            "schema": "genmat.torsion/1",
            "not_in_lattice": self.not_in_lattice,
            "doubles_in": self.doubles_in,
            "gf2_rank": self.gf2_rank,
            "closed_forms": self.closed_forms,
            "bch": self.bch,
            "in_integral_families": self.in_integral_families,
            "ok": self.ok,
        }


def torsion_group_check(witnesses: list) -> TorsionReport:
    """Each class has order 2 modulo the integral span and the three are independent."""
    labels = sorted({k for w in witnesses for k in w.coords})
    not_in, doubles, rows = [], [], []
    for w in witnesses:
        not_in.append(w.min_valuation() == -1)
        doubled = {k: 2 * c for k, c in w.coords.items()}
        doubles.append(_integral_coords(doubled))
        row = {}
        for i, k in enumerate(labels):
            c = Fraction(doubled.get(k, 0))
            if c.denominator == 1 and c.numerator % 2:
                row[i] = 1
        rows.append(row)
    members = [L_intersect_A_membership(w.min7, 7).member for w in witnesses]
    return TorsionReport(not_in, doubles, linalg.rank(rows, 2),
                         [w.closed_form_ok for w in witnesses], [w.bch_ok for w in witnesses], members)


# -- the integral lattice at p = 2 ---------------------------------------------------------


@dataclass
class RoundtripReport:
    n: int
    trials: int
    families_integral: int = 0
    members_found: int = 0
    halves_rejected: bool = False

    @property
    def ok(self) -> bool:
        return self.families_integral == self.trials and self.members_found == self.trials and self.halves_rejected

    def to_json(self) -> dict:
        return {"schema": "genmat.lattice-roundtrip/1", "n": self.n, "trials": self.trials,
                "families_integral": self.families_integral, "members_found": self.members_found,
                "halves_rejected": self.halves_rejected, "ok": self.ok}


def prop_minimal_roundtrip(n: int, trials: int = 20, seed: int = 0) -> RoundtripReport:
    """Integral combinations of the families have integer entries; integral Lie elements decompose.

    The second direction samples random integer combinations of the free basis
    and divides by 2 as long as the entries stay integral, which pushes the
    samples to the edge of the lattice.
    """
    if n < 2:
        raise DegreeRangeError("n must be at least 2")
    rng = random.Random(seed)
    pair = GenericPair.pseudo4_rational(n)
    fams = [m for _, m in family_generators(pair, n)]
    basis = [m for _, m in free_basis(pair, n)]
    rep = RoundtripReport(n, trials)
    for _ in range(trials):
        v = Mat2.zeros(pair.ring)
        for m in fams:
            c = rng.randint(-3, 3)
            if c:
                v = v + m.scale(c)
        rep.families_integral += is_integral(v)
        w = Mat2.zeros(pair.ring)
        while w.is_zero():
            for m in basis:
                c = rng.randint(-3, 3)
                if c:
                    w = w + m.scale(c)
        while is_integral(w.scale(Fraction(1, 2))):
            w = w.scale(Fraction(1, 2))
        rep.members_found += L_intersect_A_membership(w, n, pair).member
    c = lie_bracket(pair.x, pair.y)
    if n == 2:
        rep.halves_rejected = not L_intersect_A_membership(c.scale(Fraction(1, 2)), 2, pair).member
    else:
        rep.halves_rejected = not L_intersect_A_membership(basis[0].scale(Fraction(1, 4)), n, pair).member
    return rep
