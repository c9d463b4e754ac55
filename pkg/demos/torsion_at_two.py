"""Three weight-6 commutators that land in degree 7 with half-integral coordinates.

Over the 2-adic integers the Lie span of the degree-7 images is a proper
sublattice of the integral Lie elements.  These witnesses each sit in the
bigger lattice with a coordinate of 2-adic valuation -1; doubling them lands
in the sublattice, and they are independent mod 2.
"""
from fractions import Fraction

from genmat.dichotomy import torsion_group_check, torsion_witnesses

ws = torsion_witnesses(8)
for w in ws:
    halves = {k: str(v) for k, v in w.coords.items() if isinstance(v, Fraction) and v.denominator == 2}
    print(f"{w.name}: {w.word}")
    print(f"    half-integral coordinates: {halves}")
    print(f"    matches the closed form: {w.closed_form_ok}; exp/log route agrees exactly: {w.bch_exact}")

rep = torsion_group_check(ws)
print()
print(f"rank mod 2 of the three classes: {rep.gf2_rank}")
print("so the quotient contains (Z/2)^3" if rep.ok else "check failed")
