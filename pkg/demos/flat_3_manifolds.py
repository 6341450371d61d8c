"""Invariants of the ten closed flat 3-manifolds.

For each one we print H_1, the Betti numbers, the rank of the centre and
the size k of the torus that acts, then the Halperin-Carlsson verdict.
Hantzsche-Wendt (G6) has finite H_1, so no circle acts and the bounds hold
trivially.
"""

from bieberbach import catalog
from bieberbach.hcc import full_report
from bieberbach.topology import is_orientable

print(f"{'name':5} {'orient':7} {'H_1':22} {'betti':14} {'centre':7} {'k':3} verdict")
for name in ["G1", "G2", "G3", "G4", "G5", "G6", "B1", "B2", "B3", "B4"]:
    group = catalog.get(name).group
    rep = full_report(group)
    inv = rep.invariants
    print(f"{name:5} {str(is_orientable(group)):7} {str(inv.h1):22} {str(inv.betti):14} "
          f"{inv.center_rank:<7} {rep.hcc.k:<3} {'pass' if rep.passed else 'FAIL'}")
