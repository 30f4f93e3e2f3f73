"""Coxeter systems, thin and thick buildings, and their triangle lemmas.

The package is organized around a canonical-word engine for Coxeter
groups (coxeter), the thin building of a Coxeter system with roots,
walls and projections (thin), building-level triangles and compatible
paths (triangles), the finite rank-2 Moufang buildings over F2 with
their root group data (f2), a seeded lemma suite (properties) and the
command-line front end (cli).
"""

from .coxeter import CoxeterMatrix, INFINITY, Identity, parse_coxeter_matrix
from .errors import (
    BallInconclusive,
    BudgetExceeded,
    ChamberlabError,
    ConstructionError,
    HypothesisError,
    LemmaViolation,
    NoSharedResidue,
    NotAdjacent,
    NotReflection,
    NotSpherical,
    ParseError,
    PreconditionFailed,
    RankError,
    ResourceLimit,
    SameWall,
    TheoremViolation,
    ValidationError,
)
from .thin import Residue, Root
from .triangles import BRes, Building, ThinBuilding

__all__ = [
    "BRes",
    "BallInconclusive",
    "BudgetExceeded",
    "Building",
    "ChamberlabError",
    "ConstructionError",
    "CoxeterMatrix",
    "HypothesisError",
    "INFINITY",
    "Identity",
    "LemmaViolation",
    "NoSharedResidue",
    "NotAdjacent",
    "NotReflection",
    "NotSpherical",
    "ParseError",
    "PreconditionFailed",
    "RankError",
    "Residue",
    "ResourceLimit",
    "Root",
    "SameWall",
    "TheoremViolation",
    "ThinBuilding",
    "ValidationError",
    "parse_coxeter_matrix",
]
