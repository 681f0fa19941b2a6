"""Exact toolkit for graded universal modal logic over finite models.

Computes the equivalence classes of the depth-d counting fragments,
their exact sizes and entropies, description-complexity bounds (with a
formula-size game and a brute-force oracle at tiny scale), and
phase-transition reports of the class-size distribution.
"""

from .classes import (
    AdmissibleTuple,
    class_size,
    enumerate_admissible,
    tuple_of_profile,
)
from .config import ScaleCapError, SearchCaps
from .formulas import (
    Formula,
    counting_depth,
    format_formula,
    negate,
    parse_formula,
    size,
)
from .models import ModelProfile, PointedProfile, evaluate, evaluate_pointed
from .vocab import Vocabulary

__version__ = "0.1.0"

__all__ = [
    "AdmissibleTuple",
    "Formula",
    "ModelProfile",
    "PointedProfile",
    "ScaleCapError",
    "SearchCaps",
    "Vocabulary",
    "class_size",
    "counting_depth",
    "enumerate_admissible",
    "evaluate",
    "evaluate_pointed",
    "format_formula",
    "negate",
    "parse_formula",
    "size",
    "tuple_of_profile",
    "__version__",
]
