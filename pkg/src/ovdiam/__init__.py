"""ovdiam: a workbench for orthogonal-vector diameter gadgets.

Encode set-intersection instances as orthogonal-vector instances, build
the path gadget whose diameter separates the two answers, verify every
distance guarantee with an exact BFS oracle, and measure the cut-crossing
communication of distributed programs under a two-party simulation.
"""

from .ovcore import (
    BitVector,
    DisjointnessInstance,
    OVInstance,
    are_orthogonal,
    encode_disjointness,
    encoder_dimension,
    flip,
    has_orthogonal_pair,
    index_code,
    is_intersecting,
)
from .gadget import (
    CutPartition,
    GadgetGraph,
    GadgetParams,
    build_gadget,
    cut_partition,
    exact_size,
    map_ell,
)
from .metrics import (
    Classification,
    classify,
    diameter,
    bfs,
    verify_diameter_dichotomy,
    verify_distance_bounds,
    vertex_classes,
)
from .congest import (
    BitLedger,
    NetworkConfig,
    RoundTrace,
    exact_diameter_program,
    lower_bound_budget,
    run,
    two_party_simulate,
)

__version__ = "0.1.0"

__all__ = [
    "BitVector",
    "DisjointnessInstance",
    "OVInstance",
    "are_orthogonal",
    "encode_disjointness",
    "encoder_dimension",
    "flip",
    "has_orthogonal_pair",
    "index_code",
    "is_intersecting",
    "CutPartition",
    "GadgetGraph",
    "GadgetParams",
    "build_gadget",
    "cut_partition",
    "exact_size",
    "map_ell",
    "Classification",
    "classify",
    "diameter",
    "bfs",
    "verify_diameter_dichotomy",
    "verify_distance_bounds",
    "vertex_classes",
    "BitLedger",
    "NetworkConfig",
    "RoundTrace",
    "exact_diameter_program",
    "lower_bound_budget",
    "run",
    "two_party_simulate",
    "__version__",
]
