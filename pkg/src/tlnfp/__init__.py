"""Exact analysis of competitive threshold-linear networks.

Computes fixed-point supports through the chirotope of the associated
hyperplane arrangement, verifies Grassmann-Pluecker consistency, detects
realizable mutations, and builds mutation/bifurcation graphs for the
three-neuron classification.  All classification arithmetic is exact
rational; floating point is confined to the `dynamics` module.
"""

from .errors import (
    DegeneracyError,
    DivergenceError,
    PinnedFlipError,
    SearchBudgetError,
    TlnfpError,
    VertexAtInfinityError,
)
from .exact import Matrix, Rational, det, permutation_parity, rational, sign, sign_det
from .network import (
    Digraph,
    Network,
    ParamPath,
    edge_drive,
    graph_of,
    load_network,
    network,
    parse_digraph,
    separation,
    validate,
)
from .chirotope import (
    INFINITY,
    AxisReport,
    Chirotope,
    Cocircuit,
    GroundSet,
    arrangement_matrix,
    axis_signs,
    chirotope_of,
    cocircuit,
    is_simplicial,
    support_determinant,
)
from .fixed_points import (
    FixedPoint,
    SupportFamily,
    fixed_point_detail,
    fp_chirotope,
    fp_oracle,
    singleton_rule,
)
from .mutations import (
    RepMatrix,
    full_support_flip_allowed,
    gp_check,
    is_mutation,
    is_mutation_by_flip,
    mutations_of,
    pinned_bases,
    rep_matrix,
    separation_profile,
)
from .regimes import atlas, bifurcation_graph, digraph_classes, mutation_graph
from .sweeps import sweep, unlock_path
from . import dynamics

__all__ = [name for name in dir() if not name.startswith("_")]
