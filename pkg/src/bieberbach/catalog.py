"""Built-in example groups.

Tori ``torus1..torus6``, the Klein bottle, the ten closed flat 3-manifolds
(orientable ``G1..G6``, non-orientable ``B1..B4``) and real Bott groups,
which are generated on demand from names of the form ``bott-<n>-<bits>``.

Each entry is accepted only if it passes :func:`bieberbach.crystal.validate`;
the test suite checks this for every entry.  ``expected`` holds golden
values where an independent derivation exists, and ``provenance`` says
where they come from.
"""

from __future__ import annotations

import re
from math import comb
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from . import linalg as la
from .crystal import CrystalGroup, bott_matrix_from_bits, bott_name, from_bott_matrix
from .errors import BadMatrix, UnknownEntry

HALF = Fraction(1, 2)

ALIASES = {"hantzsche-wendt": "G6"}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    group: CrystalGroup
    expected: Mapping = field(default_factory=dict)
    provenance: str = ""


def _diag(*d):
    n = len(d)
    return tuple(tuple(d[i] if i == j else 0 for j in range(n)) for i in range(n))


def torus(n: int) -> CrystalGroup:
    return CrystalGroup(n, (), (), f"torus{n}")


# H_1 values for the flat 3-manifolds are the standard ones from the
# classification; betti numbers follow from the holonomy representation.
_CLASSIFICATION = "standard flat 3-manifold classification; recomputed by h1/betti in tests"

_FLAT3 = {
    "G1": ((), (), {"h1": (3, ()), "betti": (1, 3, 3, 1)}),
    "G2": ((_diag(1, -1, -1),), ((HALF, 0, 0),), {"h1": (1, (2, 2)), "betti": (1, 1, 1, 1)}),
    "G3": ((((0, -1, 0), (1, -1, 0), (0, 0, 1)),), ((0, 0, Fraction(1, 3)),),
           {"h1": (1, (3,)), "betti": (1, 1, 1, 1)}),
    "G4": ((((0, -1, 0), (1, 0, 0), (0, 0, 1)),), ((0, 0, Fraction(1, 4)),),
           {"h1": (1, (2,)), "betti": (1, 1, 1, 1)}),
    "G5": ((((1, -1, 0), (1, 0, 0), (0, 0, 1)),), ((0, 0, Fraction(1, 6)),),
           {"h1": (1, ()), "betti": (1, 1, 1, 1)}),
    "G6": ((_diag(1, -1, -1), _diag(-1, 1, -1)), ((HALF, HALF, 0), (0, HALF, HALF)),
           {"h1": (0, (4, 4)), "betti": (1, 0, 0, 1)}),
    "B1": ((_diag(1, 1, -1),), ((HALF, 0, 0),), {"h1": (2, (2,)), "betti": (1, 2, 1, 0)}),
    "B2": ((((1, 0, 0), (0, 0, 1), (0, 1, 0)),), ((HALF, 0, 0),), {"h1": (2, ()), "betti": (1, 2, 1, 0)}),
    "B3": ((_diag(1, -1, -1), _diag(1, 1, -1)), ((HALF, 0, 0), (0, HALF, 0)),
           {"h1": (1, (2, 2)), "betti": (1, 1, 0, 0)}),
    "B4": ((_diag(1, -1, -1), _diag(1, 1, -1)), ((HALF, 0, 0), (0, HALF, HALF)),
           {"h1": (1, (4,)), "betti": (1, 1, 0, 0)}),
}


def _build() -> dict:
    out = {}
    for n in range(1, 7):
        out[f"torus{n}"] = CatalogEntry(
            f"torus{n}", torus(n),
            {"h1": (n, ()), "betti": tuple(comb(n, j) for j in range(n + 1))},
            "trivial: translations only")
    out["klein"] = CatalogEntry(
        "klein", CrystalGroup(2, (_diag(1, -1),), ((HALF, 0),), "klein"),
        {"h1": (1, (2,)), "betti": (1, 1, 0)}, "abelianisation of <a, b | a b a^-1 b>")
    for name, (gens, vecs, expected) in _FLAT3.items():
        out[name] = CatalogEntry(name, CrystalGroup(3, gens, vecs, name), expected, _CLASSIFICATION)
    return out


_ENTRIES = _build()

_BOTT_NAME = re.compile(r"bott-(\d+)(?:-([01]*))?$")


def list() -> list[str]:  # noqa: A001 - mirrors the `catalog list` subcommand
    """Names of the static entries in sorted order."""
    return sorted(_ENTRIES)


def get(name: str) -> CatalogEntry:
    key = ALIASES.get(name.lower(), name)
    if key in _ENTRIES:
        return _ENTRIES[key]
    if _BOTT_NAME.match(key):
        return bott(key)
    available = ", ".join(sorted(_ENTRIES) + sorted(ALIASES))
    raise UnknownEntry(f"unknown catalog entry {name!r}; available: {available}, bott-<n>-<bits>")


def bott(name_or_matrix: Union[str, Sequence[Sequence[int]]]) -> CatalogEntry:
    """Real Bott group from a strictly upper-triangular binary matrix or its name."""
    if isinstance(name_or_matrix, str):
        m = _BOTT_NAME.match(name_or_matrix)
        if not m:
            raise BadMatrix(f"not a Bott group name: {name_or_matrix!r}")
        a = bott_matrix_from_bits(int(m.group(1)), m.group(2) or "")
    else:
        a = la.as_matrix(name_or_matrix)
    group = from_bott_matrix(a)
    return CatalogEntry(bott_name(a), group, {}, "generated from a Bott matrix")


def all_bott_matrices(n: int):
    """Every strictly upper-triangular binary n x n matrix, in bit order."""
    c = n * (n - 1) // 2
    for code in range(2 ** c):
        yield bott_matrix_from_bits(n, format(code, f"0{c}b") if c else "")
