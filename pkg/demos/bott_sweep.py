"""Check every real Bott manifold up to dimension 4.

A strictly upper-triangular binary matrix A gives the group generated by
s_i = (diag((-1)^A[i][j]), e_i / 2).  For each one we compare 2^k with the
total Betti number, where k = rank H_1 is the dimension of the torus built
by the construction.
"""

import sys
import time

from bieberbach import catalog
from bieberbach.hcc import full_report

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 4
start = time.perf_counter()
failures = 0
for n in range(1, n_max + 1):
    tight = 0
    matrices = list(catalog.all_bott_matrices(n))
    for a in matrices:
        entry = catalog.bott(a)
        rep = full_report(entry.group)
        failures += not rep.passed
        bound, total, _ = rep.hcc.sum_bound
        tight += bound == total
    print(f"n = {n}: {len(matrices)} groups, sum bound tight for {tight}")
print(f"{failures} failures in {time.perf_counter() - start:.1f}s")
