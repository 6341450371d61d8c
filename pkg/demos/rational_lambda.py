"""A group where the top translations λ are not integral.

Take the holonomy generator A = [[-1, 1, 0], [0, 1, 0], [0, 0, 1]] with
translation (0, 0, 1/2).  Then λ on the complement of the kernel of ν has
denominator 2, so the torus lattice B~ must be scaled by ℓ = 2 before its
image under ρ becomes a pure translation.
"""

from fractions import Fraction

from bieberbach.calabi import certificate_to_dict, torus_action
from bieberbach.cli import dumps
from bieberbach.crystal import CrystalGroup, validate

group = CrystalGroup(3, (((-1, 1, 0), (0, 1, 0), (0, 0, 1)),), ((0, 0, Fraction(1, 2)),), "half-lambda")
assert validate(group).ok
cert = torus_action(group)
print(dumps(certificate_to_dict(cert)), end="")
