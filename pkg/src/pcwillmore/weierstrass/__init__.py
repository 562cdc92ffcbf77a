"""Weierstrass data for Legendrian surfaces: validation, energy, lifts."""

from .curve import (
    MeromorphicCurve,
    PoleCheck,
    ValidationReport,
    curvature_at,
    gauss_map_degree,
    validate_data,
)
from .energy import EnergyReport, QuadratureConfig, total_curvature, willmore_energy
from .fixtures import Fixture, family_nullity, solve_22
from .lift import (
    EndClosureReport,
    LegendrianLift,
    contact_residual,
    end_closure_check,
    legendrian_lift,
    loop_integral,
)

__all__ = [
    "EndClosureReport",
    "EnergyReport",
    "Fixture",
    "LegendrianLift",
    "MeromorphicCurve",
    "PoleCheck",
    "QuadratureConfig",
    "ValidationReport",
    "contact_residual",
    "curvature_at",
    "end_closure_check",
    "family_nullity",
    "gauss_map_degree",
    "legendrian_lift",
    "loop_integral",
    "solve_22",
    "total_curvature",
    "validate_data",
    "willmore_energy",
]
