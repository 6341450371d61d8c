"""Walk through the torus action on the Klein bottle step by step.

The Klein bottle group is generated by Z^2 and g = (diag(1, -1), (1/2, 0)).
We compute its first homology, split the lattice along the map to the free
part of H_1, solve for the top translations λ and read off the circle
action.
"""

from bieberbach import catalog
from bieberbach.calabi import build_tilde_B, conjugation_blocks, solve_lambda, split_lattice
from bieberbach.crystal import format_word, presentation
from bieberbach.hcc import full_report, report_to_text
from bieberbach.topology import betti, h1

group = catalog.get("klein").group

pres = presentation(group)
print("presentation:")
for r in pres.relators:
    print("   ", format_word(pres, r))

hom = h1(group)
print(f"\nH_1 = {hom}; betti numbers {betti(group)}")
print("free part of e1, e2, g1:", [hom.generator_image(x) for x in pres.generators])

split = split_lattice(group, hom)
print(f"\nkernel of ν on Z^2: {split.kernel_basis.vectors}")
print(f"complement B: {split.complement_basis.vectors}, image of index {split.image_index}")

blocks = conjugation_blocks(group, split)
lam, rho = solve_lambda(group, split, blocks, hom)
print(f"\nρ(g1) = {rho.image('g1')}")
tb = build_tilde_B(rho, lam, split)
print(f"ℓ = {tb.ell}; B~ generated by {tb.lattice_vectors}, acting as {tb.images}")

print()
print(report_to_text(full_report(group)))
