"""Invariants of second-derived elements over GF(2) and one correction step.

Each element g of the catalog is phi_x of the image of a commutator of commutators at
pseudo-generic matrices.  g - 1 is written in the ideal generated by [x,y]
and split into U, V and W pieces; the lowest U piece and its position
(nbar, ibar) drive everything.  The operators phi_x, phi_y and psi move that
piece in a predictable way, which lets a search cancel it.
"""
from genmat.char2.modules import good_catalog, invariants_of, phi_x, phi_y, psi, verify_transport
from genmat.identity import char2_correction_search

catalog = good_catalog(size=6, cap=24, seed=0, max_ibar=12)
for word, g in catalog[:3]:
    c = invariants_of(g)
    print(f"{word}\n    n = {c.n_of}, nbar = {c.nbar}, ibar = {c.ibar}, lowest U piece = {c.min_x}")

word, g = catalog[0]
for name, op in (("phi_x", phi_x), ("phi_y", phi_y), ("psi", psi)):
    c = invariants_of(op(g))
    print(f"{name}: (nbar, ibar) -> ({c.nbar}, {c.ibar})")

rep = verify_transport([g for _, g in catalog])
print(f"transport checks: {rep.checked} elements, all exact: {rep.ok}")

elems = [g for _, g in catalog]
target = phi_x(elems[0]) * phi_x(elems[1])
res = char2_correction_search(target, elems)
print()
print(f"search on phi_x(g0) phi_x(g1): found = {res.found}, (nbar, ibar) {res.before} -> {res.after}")
