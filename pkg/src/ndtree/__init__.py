"""Storage of nondominated points and segments for biobjective optimization."""
from .geometry import (
    EPS,
    ClipResult,
    Dominance,
    DominatedPairFound,
    Kind,
    ParetoElement,
    Region,
    canonicalize,
    clip,
    compare,
    dominated_region_contains,
    make_element,
    point,
    region_of,
    restrict_to_region,
    same_sets,
    segment,
)
from .nd_list import NdList
from .tree import InsertReport, Mode, NdTree, RebalancePolicy

__all__ = [
    "EPS",
    "ClipResult",
    "Dominance",
    "DominatedPairFound",
    "InsertReport",
    "Kind",
    "Mode",
    "NdList",
    "NdTree",
    "ParetoElement",
    "RebalancePolicy",
    "Region",
    "canonicalize",
    "clip",
    "compare",
    "dominated_region_contains",
    "make_element",
    "point",
    "region_of",
    "restrict_to_region",
    "same_sets",
    "segment",
]
