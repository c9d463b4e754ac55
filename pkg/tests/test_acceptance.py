"""Acceptance checks, one test per criterion.

All comparisons are exact (integers, rationals, GF(2)); the only numeric
tolerances are the wall-clock budgets below.  The summary hook in conftest.py
prints one PASS/FAIL line per criterion after the run.
"""
import random
import time

import pytest

from genmat.char2.modules import (
    decompose_UVW,
    good_catalog,
    in_J_n,
    invariants_of,
    is_good,
    phi_x,
    random_j,
    random_r,
    verify_transport,
)
from genmat.char2.ring import JElement, RElement, TPoly, to_J_coefficients, to_R_coefficients
from genmat.dichotomy import rank_table, torsion_group_check, torsion_witnesses
from genmat.errors import UnsupportedPrimeError
from genmat.identity import (
    IdentityWord,
    build_identity,
    char2_correction_search,
    correction_step,
    seed_kernel_dimension,
    verify_identity,
)
from genmat.lie import L_n_spanning_set, rank_of_span, verify_bracket_scalars
from genmat.matrix import verify_trace_lemmas
from genmat.poly import GF2, QQ
from genmat.words import GenericPair, witt_l2, zubkov_m

# wall-clock budgets in seconds
BUDGET = {1: 60, 2: 60, 3: 60, 4: 120, 5: 300, 6: 600, 7: 60, 8: 300, 9: 300}
RANDOM_TRIALS = 200


class Clock:
    def __init__(self, k):
        self.k = k

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < BUDGET[self.k], f"criterion {self.k} took {self.elapsed:.1f} s"


@pytest.mark.criterion(1, "Witt and Lie-rank anchors; rank table 2..10")
def test_criterion_1_rank_anchors():
    with Clock(1):
        assert witt_l2(6) == 9
        assert zubkov_m(6) == 6
        pair = GenericPair.pseudo4_rational(6)
        assert rank_of_span([m.coordinates() for m in L_n_spanning_set(pair, 6)]) == 6
        rows = rank_table(3, 10)
        assert all(r.omega_lower == zubkov_m(r.n) for r in rows if r.n >= 2)


@pytest.mark.criterion(2, "trace identities and J-closure rules, cap 10, 200 random cases per ring")
def test_criterion_2_trace_identities():
    with Clock(2):
        for coeffs in (QQ, GF2):
            reports = verify_trace_lemmas(coeffs, cap=10, trials=RANDOM_TRIALS, seed=0)
            failed = [k for k, r in reports.items() if not r.passed]
            assert not failed, failed
            for name, rep in reports.items():
                assert rep.checked >= (1 if name.startswith("pseudo") else RANDOM_TRIALS)
        gf2 = verify_trace_lemmas(GF2, cap=10, trials=1, seed=0)
        rules = [k for k in gf2 if k.startswith("jclosure_")]
        symbolic = [k for k in gf2 if k.startswith("pseudo_jclosure_")]
        assert len(rules) == 8 and len(symbolic) == 8


@pytest.mark.criterion(3, "bracket scalar formulas at cap 8")
def test_criterion_3_bracket_scalars():
    with Clock(3):
        for pair in (GenericPair.generic8(QQ, 8), GenericPair.pseudo4_rational(8), GenericPair.pseudo4_char2(8)):
            assert all(verify_bracket_scalars(pair).values()), pair.flavor


@pytest.mark.criterion(4, "R/J/UVW round trips, degree bounds, level shift and trace-zero properties")
def test_criterion_4_module_structure():
    with Clock(4):
        rng = random.Random(2024)
        for _ in range(RANDOM_TRIALS):
            r = random_r(12, rng)
            assert to_R_coefficients(r.to_mat()) == r
            j = random_j(12, rng)
            assert to_J_coefficients(j.to_R()) == j
            d = decompose_UVW(j)
            assert d.recompose() == j
            assert d.bounds_ok()

        cap = 18
        lam = TPoly.gens(cap)[0]
        tx = RElement.scalar(lam)
        for _ in range(RANDOM_TRIALS):
            a = random_j(cap, rng, max_deg=10)
            b = to_J_coefficients(tx * a.to_R())
            assert all(in_J_n(a, n) == in_J_n(b, n + 1) for n in range(6))

        zero_trace = 0
        for k in range(RANDOM_TRIALS):
            a = random_j(16, rng, max_deg=8).scale(TPoly.gens(16)[0] ** (k % 4))
            if k % 2:
                a = JElement(16, a.a, a.b, a.c, TPoly.zero(16))
            if a.to_R().trace().is_zero():
                zero_trace += 1
                assert a.d.is_zero()
        assert zero_trace >= RANDOM_TRIALS // 4


@pytest.mark.criterion(5, "transport lemmas on a catalog of good elements, cap 20")
def test_criterion_5_transport():
    with Clock(5):
        roomy = [g for _, g in good_catalog(size=20, cap=20, seed=0, max_ibar=12)]
        assert len(roomy) >= 20 and all(is_good(g) for g in roomy)
        rep = verify_transport(roomy)
        assert rep.ok, rep.failures
        assert rep.checked == len(roomy)
        # the roomy elements all share (nbar, ibar) pairs that exclude each other; a wider sample supplies pairs
        wide = [g for _, g in good_catalog(size=30, cap=20, seed=0)]
        rep2 = verify_transport(wide)
        assert rep2.ok, rep2.failures
        assert rep2.pairs_checked >= 1


@pytest.mark.criterion(6, "identity word for p = 3 up to degree 12")
def test_criterion_6_identity():
    with Clock(6):
        word = build_identity(3, 12)
        cert = verify_identity(word, flavor="generic8")
        assert cert.vanishes_below_target
        assert cert.nontrivial_mod_p
        assert cert.corrections_p_integral
        for step in word.steps:
            assert step.min_valuation(3) >= 0


@pytest.mark.criterion(7, "rank table for p = 2, 3 and the degree-6 kernel")
def test_criterion_7_dichotomy_ranks():
    with Clock(7):
        for p in (2, 3):
            rows = {r.n: r for r in rank_table(p, 6)}
            for n in range(1, 6):
                assert rows[n].omega_lower == witt_l2(n)
            assert rows[6].omega_lower == 6 and rows[6].l2 == 9
        assert seed_kernel_dimension() == 3


@pytest.mark.criterion(8, "three 2-torsion witnesses in degree 7")
def test_criterion_8_torsion():
    with Clock(8):
        ws = torsion_witnesses(8)
        assert [w.name for w in ws] == ["g1", "g2", "g3"]
        for w in ws:
            assert w.closed_form_ok and w.bch_ok
            assert w.min_valuation() == -1
        rep = torsion_group_check(ws)
        assert all(rep.doubles_in) and all(rep.not_in_lattice)
        assert rep.gf2_rank == 3
        assert rep.ok


@pytest.mark.criterion(9, "p = 2 refusal and a verified char-2 correction step")
def test_criterion_9_char2():
    with Clock(9):
        with pytest.raises(UnsupportedPrimeError, match="p = 2 is not supported"):
            build_identity(2, 8)
        with pytest.raises(UnsupportedPrimeError, match="p = 2 is not supported"):
            correction_step(IdentityWord(2, 8, 3, []), 7)
        cat = [g for _, g in good_catalog(size=6, cap=24, seed=0, max_ibar=12)]
        g = phi_x(cat[0]) * phi_x(cat[1])
        res = char2_correction_search(g, cat)
        assert res.found and res.verified
        after = invariants_of(phi_x(g * res.h))
        assert (after.nbar, after.ibar) == res.after
        assert res.after > res.before
