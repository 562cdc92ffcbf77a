from .jets import AnalyticJet, FDJet, SurfaceJet, builtin, equatorial_s2, from_expressions, graph_surface, hexagonal_torus
from .invariants import (
    PointInvariants,
    WillmoreResidual,
    area_s5,
    gauss_equation_residual,
    legendrian_check,
    point_invariants,
    willmore_energy_s5,
    willmore_residual,
)

__all__ = [
    "AnalyticJet", "FDJet", "SurfaceJet", "builtin", "equatorial_s2", "from_expressions",
    "graph_surface", "hexagonal_torus", "PointInvariants", "WillmoreResidual", "area_s5",
    "gauss_equation_residual", "legendrian_check", "point_invariants", "willmore_energy_s5",
    "willmore_residual",
]
