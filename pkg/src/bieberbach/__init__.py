"""Compact flat manifolds as Bieberbach groups.

Exact computation of first homology, Betti numbers and the rank of the
centre, an explicit torus action with ``k = rank H_1`` and checks of the
Halperin-Carlsson bounds against it.
"""

from .calabi import TorusActionCertificate, torus_action
from .crystal import (AffineElement, CrystalGroup, format_group, from_affine_generators,
                      from_bott_matrix, parse_group, presentation, torsion_free_check, validate)
from .errors import BieberbachError, InputError, InternalInconsistency
from .hcc import FullReport, full_report, splitting_subgroup
from .topology import betti, betti_oracle, center_rank, h1

__version__ = "0.1.0"

__all__ = [
    "AffineElement", "CrystalGroup", "format_group", "from_affine_generators", "from_bott_matrix",
    "parse_group", "presentation", "torsion_free_check", "validate", "TorusActionCertificate",
    "torus_action", "FullReport", "full_report", "splitting_subgroup", "betti", "betti_oracle",
    "center_rank", "h1", "BieberbachError", "InputError", "InternalInconsistency",
]
