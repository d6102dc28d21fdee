"""Real algebraic sets: containing hypersurfaces, component counts and
tube volumes.
"""

from .bounds import auroux_degree_bound, dimension_count_holds, milnor_bound
from .containment import ContainmentWitness, containment_hypersurface, pullback_matrix
from .tube import (
    WONGKEW_COLUMNS,
    TubeEstimate,
    WongkewScan,
    loglog_slope,
    project_to_variety,
    tube_distances,
    tube_volume,
    wongkew_scan,
)
from .varieties import VarietySpec, hypersurface, polys_from_dicts, random_hypersurface

__all__ = [
    "auroux_degree_bound",
    "dimension_count_holds",
    "milnor_bound",
    "ContainmentWitness",
    "containment_hypersurface",
    "pullback_matrix",
    "WONGKEW_COLUMNS",
    "TubeEstimate",
    "WongkewScan",
    "loglog_slope",
    "project_to_variety",
    "tube_distances",
    "tube_volume",
    "wongkew_scan",
    "VarietySpec",
    "hypersurface",
    "polys_from_dicts",
    "random_hypersurface",
]
