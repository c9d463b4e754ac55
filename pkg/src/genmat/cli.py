"""Command line front end: ``genmat {verify,ranks,build-identity,dichotomy,decompose}``.

Exit status is 0 exactly when every requested check passed.  ``--json``
switches to a machine-readable report carrying a schema version.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__

SCHEMA = "genmat.cli/1"


def _suite(name: str, ok: bool, **detail) -> dict:
    return {"suite": name, "ok": bool(ok), **detail}


# -- verify --------------------------------------------------------------------------


def _verify(args) -> tuple:
    import random

    from .char2.modules import (
        commutator_shape_check,
        decompose_UVW,
        good_catalog,
        j_ideal_closure_check,
        random_j,
        random_r,
        verify_transport,
    )
    from .char2.ring import r_coefficients, to_J_coefficients
    from .lie import verify_bracket_scalars
    from .matrix import verify_bch_commutator, verify_trace_lemmas
    from .poly import GF2, QQ
    from .words import GenericPair, parse_word

    cap = args.cap or 10
    trials = args.trials or 200
    suites = []
    for label, coeffs in (("rational", QQ), ("char2", GF2)):
        reps = verify_trace_lemmas(coeffs, cap=cap, trials=trials, seed=args.seed)
        failed = sorted(k for k, r in reps.items() if not r.passed)
        suites.append(_suite(f"trace_identities_{label}", not failed,
                             checks=len(reps), failed=failed))

    pairs = [GenericPair.generic8(QQ, 8), GenericPair.pseudo4_rational(8), GenericPair.pseudo4_char2(8)]
    bad = [f"{p.flavor}:{k}" for p in pairs for k, v in verify_bracket_scalars(p).items() if not v]
    suites.append(_suite("bracket_scalars", not bad, failed=bad))
    suites.append(_suite("bch_commutator", verify_bch_commutator(4)))

    jc = j_ideal_closure_check(trials=min(trials, 100), cap=12, seed=args.seed)
    suites.append(_suite("j_ideal_closure", jc["ok"], rules=jc["rules"], closed=jc["closed"]))

    rng = random.Random(args.seed)
    mod_ok = 0
    n_mod = min(trials, 100)
    for _ in range(n_mod):
        r = random_r(12, rng)
        j = random_j(12, rng)
        d = decompose_UVW(j)
        mod_ok += r_coefficients(r) == r and to_J_coefficients(j.to_R()) == j and d.recompose() == j and d.bounds_ok()
    suites.append(_suite("module_roundtrips", mod_ok == n_mod, trials=n_mod, passed=mod_ok))

    shapes = []
    for text in ("X Y x y", "[[X,Y],[X,Y,X]]", "[[X,Y],[X,y]]", "[[X Y, y],[Y, X X]]"):
        shapes.append(commutator_shape_check(parse_word(text), cap=14))
    shape_ok = all(s["bracket_shape"] and s.get("in_J", True) for s in shapes)
    suites.append(_suite("commutator_shape", shape_ok, words=[s["word"] for s in shapes]))

    tcap = max(args.cap or 20, 16)
    # elements with headroom for the operator checks, plus a wider sample so that pairs occur
    catalog = good_catalog(size=20, cap=tcap, seed=args.seed, max_ibar=tcap - 8)
    catalog += good_catalog(size=30, cap=tcap, seed=args.seed)
    tr = verify_transport([g for _, g in catalog])
    suites.append(_suite("transport", tr.ok and tr.checked > 0, report=tr.to_json()))

    if args.force_failure:
        suites.append(_suite("forced_failure", False, note="deliberately failing check"))
    suites.sort(key=lambda s: s["suite"])
    ok = all(s["ok"] for s in suites)
    lines = [f"{'PASS' if s['ok'] else 'FAIL'}  {s['suite']}" for s in suites]
    return ok, {"suites": suites}, lines


# -- ranks ------------------------------------------------------------------------------


def _ranks(args) -> tuple:
    from .dichotomy import rank_table

    p = args.p or 3
    rows = rank_table(p, args.max_n, args.cap)
    ok = True
    for r in rows:
        if r.n <= 5 and r.omega_lower != r.l2:
            ok = False
        if r.omega_lower != r.m:
            ok = False
    lines = [f"p = {p}", f"{'n':>3} | {'l2':>4} | {'m':>4} | {'rank':>4} | {'mod p':>5}"]
    for r in rows:
        lines.append(f"{r.n:>3} | {r.l2:>4} | {r.m:>4} | {r.omega_lower:>4} | {r.reduction_rank:>5}")
    return ok, {"p": p, "rows": [r.to_json() for r in rows]}, lines


# -- build-identity -----------------------------------------------------------------------


def _build_identity(args) -> tuple:
    from .errors import UnsupportedPrimeError
    from .identity import build_identity, verify_identity

    p = args.p or 3
    try:
        word = build_identity(p, args.degree, args.k)
    except UnsupportedPrimeError as exc:
        return False, {"refused": str(exc)}, [f"refused: {exc}"]
    cert = verify_identity(word)
    doc = {"word": word.to_json(), "certificate": cert.to_json()}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
    lines = [
        f"p = {p}, N = {args.degree}, k = {word.modulus_exponent}",
        f"seed exponents: {word.seed_coordinates()}",
        *(f"degree {n}: {sum(1 for _, e in fs if e)} nonzero exponents" for n, fs in word.corrections),
        f"evaluation is 1 modulo degree {args.degree}: {cert.vanishes_below_target}",
        f"weight-6 exponents not all divisible by {p}: {cert.nontrivial_mod_p}",
        f"corrections {p}-integral: {cert.corrections_p_integral}",
        f"integer word (exponents mod {p}^{word.modulus_exponent}): lowest {p}-adic valuation below degree "
        f"{args.degree} is {cert.integer_min_valuation}",
    ]
    return cert.ok, doc, lines


# -- dichotomy --------------------------------------------------------------------------------


def _dichotomy(args) -> tuple:
    from .dichotomy import prop_minimal_roundtrip, torsion_group_check, torsion_witnesses

    cap = args.cap or 8
    if cap < 8:
        raise _UsageError(f"cap {cap} is too small for the degree-7 witnesses; increase --cap to at least 8")
    ws = torsion_witnesses(cap)
    rep = torsion_group_check(ws)
    trials = args.trials or 20
    rts = [prop_minimal_roundtrip(n, trials, args.seed) for n in range(2, 8)]
    ok = rep.ok and all(r.ok for r in rts)
    lines = []
    for w in ws:
        coords = ", ".join(f"{k}: {v}" for k, v in sorted(w.coords.items()))
        lines.append(f"{w.name} = {w.word}")
        lines.append(f"   coordinates {{{coords}}}")
        lines.append(f"   lowest 2-adic valuation {w.min_valuation()}, closed form ok {w.closed_form_ok}, "
                     f"exponential route ok {w.bch_ok}")
    lines.append(f"classes of order 2: {all(rep.not_in_lattice) and all(rep.doubles_in)}; GF(2) rank {rep.gf2_rank}"
                 + ("  => (Z/2)^3" if rep.gf2_rank == 3 else ""))
    for r in rts:
        lines.append(f"integral lattice, degree {r.n}: {'ok' if r.ok else 'FAILED'}")
    doc = {"witnesses": [w.to_json() for w in ws], "torsion": rep.to_json(),
           "lattice": [r.to_json() for r in rts]}
    return ok, doc, lines


# -- decompose ----------------------------------------------------------------------------------


def _decompose(args) -> tuple:
    from .char2.modules import decompose_UVW
    from .char2.ring import to_J_coefficients, to_R_coefficients
    from .errors import GenmatError
    from .matrix import Mat2

    src = sys.stdin if args.matrix == "-" else open(args.matrix)
    with src:
        data = json.load(src)
    m = Mat2.from_json(data)
    try:
        r = to_R_coefficients(m)
    except GenmatError as exc:
        return False, {"error": str(exc), "stage": "R"}, [f"not in R: {exc}"]
    lines = [f"R coordinates: {r}"]
    doc = {"R": r.to_json()}
    try:
        j = to_J_coefficients(r)
    except GenmatError as exc:
        lines.append(f"not in J: {exc}")
        doc["J"] = None
        doc["error"] = str(exc)
        return True, doc, lines
    dec = decompose_UVW(j)
    doc["J"] = j.to_json()
    doc["UVW"] = dec.to_json()
    lines.append(f"J coordinates: {j}")
    for (n, i), part in sorted(dec.components.items()):
        for tag, piece in (("U", part.u), ("V", part.v), ("W", part.w)):
            if not piece.is_zero():
                lines.append(f"  {tag}[n={n}, i={i}] = {piece}")
    return True, doc, lines


# -- plumbing ---------------------------------------------------------------------------------------


class _UsageError(Exception):
    pass


def _degree(text: str) -> int:
    n = int(text)
    if n < 7:
        raise argparse.ArgumentTypeError("the degree must be at least 7 (the seed lives in degree 6)")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=None, help="prime (default 3 where relevant)")
    common.add_argument("--cap", type=int, default=None, help="degree cap")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--trials", type=int, default=None, help="random trials per check")
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--out", default=None, help="also write the report to this file")

    parser = argparse.ArgumentParser(prog="genmat", description="Identities and filtrations of 2x2 matrix groups over pro-p rings.")
    parser.add_argument("--version", action="version", version=f"genmat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run every identity and lemma suite")
    v.add_argument("--force-failure", action="store_true", help="add a deliberately failing check (harness self-test)")
    v.set_defaults(run=_verify)

    r = sub.add_parser("ranks", parents=[common], help="rank table of the Lie spans")
    r.add_argument("--max-n", type=int, default=8)
    r.set_defaults(run=_ranks)

    b = sub.add_parser("build-identity", parents=[common], help="construct an identity word up to a degree")
    b.add_argument("--degree", type=_degree, default=12)
    b.add_argument("--k", type=int, default=None, help="exponents are reported mod p^k")
    b.set_defaults(run=_build_identity)

    d = sub.add_parser("dichotomy", parents=[common], help="2-torsion witnesses in degree 7")
    d.set_defaults(run=_dichotomy)

    c = sub.add_parser("decompose", parents=[common], help="R/J/UVW decomposition of a GF(2) matrix")
    c.add_argument("matrix", help="matrix JSON file, or - for stdin")
    c.set_defaults(run=_decompose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    from .errors import GenmatError

    try:
        ok, doc, lines = args.run(args)
    except (_UsageError, GenmatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    config = {k: v for k, v in vars(args).items() if k not in ("run",)}
    report = {"schema": SCHEMA, "command": args.command, "config": config, "ok": ok, **doc}
    if args.json:
        text = json.dumps(report, indent=2, sort_keys=True, default=str)
    else:
        text = "\n".join(lines + [f"overall: {'PASS' if ok else 'FAIL'}"])
    print(text)
    if args.out and args.command != "build-identity":
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
