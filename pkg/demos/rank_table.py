"""Compare the free Lie ring with the Lie span of a generic pair of 2x2 matrices.

Column l2 counts basic commutators of each weight; column m is the rank of
their images in the degree-n part of the matrix algebra.  Up to weight 5 no
information is lost.  From weight 6 on the images satisfy relations, and the
first of those relations is what the identity builder starts from.
"""
from genmat.dichotomy import rank_table
from genmat.identity import seed_kernel_dimension

print(f"{'n':>3} {'l2':>5} {'m':>5} {'mod 2':>6}")
for row in rank_table(2, 10):
    print(f"{row.n:>3} {row.l2:>5} {row.omega_lower:>5} {row.reduction_rank:>6}")

print()
print(f"relations among the nine weight-6 commutators: {seed_kernel_dimension()}")
print("The last column reduces the same images mod 2. It drops below the rational rank from")
print("weight 5 on, a first hint that the prime 2 behaves differently.")
