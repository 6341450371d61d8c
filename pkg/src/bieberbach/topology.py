"""Homological invariants of the flat manifold R^n / π."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Optional, Sequence

from . import linalg as la
from .crystal import CrystalGroup, Presentation, presentation
from .errors import DimensionTooLarge, NonIntegralAverage

ORACLE_MAX_DIM = 6


@dataclass(frozen=True)
class HomologyH1:
    """``H_1 = Z^free_rank ⊕ ⊕ Z/d_i``, read off a Smith form.

    ``projection_map`` is the ``free_rank x m`` integral matrix sending the
    exponent vector of a word in the ``m`` presentation generators to its
    free part; it is put in Hermite form so the choice of free basis is
    canonical.  ``torsion_map`` row ``i`` is the coordinate modulo
    ``torsion_divisors[i]``.
    """

    free_rank: int
    torsion_divisors: tuple
    projection_map: la.Matrix
    torsion_map: la.Matrix
    generators: tuple
    dim: int

    def free_part(self, exponents: Sequence[int]) -> tuple:
        return la.matvec(self.projection_map, exponents)

    def torsion_part(self, exponents: Sequence[int]) -> tuple:
        return tuple(x % d for x, d in zip(la.matvec(self.torsion_map, exponents), self.torsion_divisors))

    def lattice_projection(self) -> la.Matrix:
        """ν restricted to Z^n, as a ``free_rank x dim`` matrix."""
        return tuple(row[:self.dim] for row in self.projection_map)

    def generator_image(self, name: str) -> tuple:
        j = self.generators.index(name)
        return tuple(row[j] for row in self.projection_map)

    def __str__(self):
        parts = ["Z"] * self.free_rank + [f"Z/{d}" for d in self.torsion_divisors]
        return " + ".join(parts) if parts else "0"


@lru_cache(maxsize=256)
def _presentation(group: CrystalGroup) -> Presentation:
    return presentation(group)


@lru_cache(maxsize=256)
def h1(group: CrystalGroup) -> HomologyH1:
    """First homology as the abelianisation of :func:`presentation`."""
    pres = _presentation(group)
    m = len(pres.generators)
    diag, vcols = la.smith_columns(pres.abelianized(), m)
    r = sum(1 for d in diag if d)
    # coordinate t of x is sum_j x_j V[j][t]
    free_rows = [tuple(vcols[t].get(j, 0) for j in range(m)) for t in range(r, m)]
    projection = la.hnf(tuple(free_rows))[0] if free_rows else ()
    torsion, divisors = [], []
    for t in range(r):
        if diag[t] > 1:
            divisors.append(diag[t])
            torsion.append(tuple(vcols[t].get(j, 0) % diag[t] for j in range(m)))
    return HomologyH1(m - r, tuple(divisors), projection, tuple(torsion), pres.generators, group.dim)


def betti(group: CrystalGroup) -> tuple:
    """Betti numbers ``b_0..b_n`` as the average of ``det(I + t A_g)`` over G.

    The coefficient of ``t^j`` for ``A_g`` is the trace of ``Λ^j A_g``; its
    group average is the dimension of the invariant j-forms, which is
    ``b_j`` of the flat manifold.
    """
    hol = group.holonomy
    n = group.dim
    total = [Fraction(0)] * (n + 1)
    for a in hol.elements:
        for j, c in enumerate(la.exterior_trace_poly(a)):
            total[j] += c
    out = []
    for j, s in enumerate(total):
        avg = s / len(hol)
        if avg.denominator != 1:
            raise NonIntegralAverage(f"average trace in degree {j} is {avg}")
        out.append(int(avg))
    return tuple(out)


def betti_oracle(group: CrystalGroup, j: int) -> int:
    """``b_j`` as the rank of the averaging projector on the explicit wedge basis.

    Independent of :func:`betti`: builds every ``Λ^j A_g`` from minors.
    """
    n = group.dim
    if n > ORACLE_MAX_DIM:
        raise DimensionTooLarge(f"oracle limited to n <= {ORACLE_MAX_DIM}")
    if not 0 <= j <= n:
        return 0
    hol = group.holonomy
    size = comb(n, j)
    acc = [[Fraction(0)] * size for _ in range(size)]
    for a in hol.elements:
        wedge = la.exterior_power(a, j)
        for r in range(size):
            for c in range(size):
                acc[r][c] += wedge[r][c]
    projector = tuple(tuple(x / len(hol) for x in row) for row in acc)
    return la.rank(projector)


def center_rank(group: CrystalGroup) -> int:
    """Rank of the holonomy-fixed sublattice, i.e. of the centre of π."""
    return la.fixed_sublattice(group.holonomy.elements, group.dim).rank


def image_rank_in_h1(group: CrystalGroup, sub: la.LatticeBasis, homology: Optional[HomologyH1] = None) -> int:
    """Rank of the image of lattice translations ``sub`` in the free part of H_1."""
    homology = homology or h1(group)
    if not sub.vectors or homology.free_rank == 0:
        return 0
    proj = homology.lattice_projection()
    return la.rank(tuple(la.matvec(proj, v) for v in sub.vectors))


def is_orientable(group: CrystalGroup) -> bool:
    return all(la.det(a) == 1 for a in group.holonomy_gens)


def euler_characteristic(betti_numbers: Sequence[int]) -> int:
    return sum((-1) ** j * b for j, b in enumerate(betti_numbers))
