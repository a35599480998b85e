"""
Finite commutative quantum compact metric spaces, tunnels and the two
worked approximation examples.
"""
from .lp import LPResult, solve_lp, solve_exact_system
from .qcms import (
    FiniteQcms, NormBoundReport, NetReport, VertexSet, line_forms, dirac, kantorovich,
    distance_table, qdiam, norm_bound_check, unit_ball_vertices, epsilon_net, ensure_proper,
)
from .tunnels import (
    TunnelSpec, ExtentReport, QuotientReport, BridgeBuilderReport, distance_to_face,
    tunnel_extent_bounds, quotient_check, bridge_distance, bridge_builder_check,
)
from .examples import (
    interval_example, interval_spaces, interval_tunnel, nbar_example, nbar_spaces, nbar_threshold,
    shift_pairs,
)

__all__ = [
    'LPResult',
    'solve_lp',
    'solve_exact_system',
    'FiniteQcms',
    'NormBoundReport',
    'NetReport',
    'VertexSet',
    'line_forms',
    'dirac',
    'kantorovich',
    'distance_table',
    'qdiam',
    'norm_bound_check',
    'unit_ball_vertices',
    'epsilon_net',
    'ensure_proper',
    'TunnelSpec',
    'ExtentReport',
    'QuotientReport',
    'BridgeBuilderReport',
    'distance_to_face',
    'tunnel_extent_bounds',
    'quotient_check',
    'bridge_distance',
    'bridge_builder_check',
    'interval_example',
    'interval_spaces',
    'interval_tunnel',
    'nbar_example',
    'nbar_threshold',
    'nbar_spaces',
    'shift_pairs',
]
