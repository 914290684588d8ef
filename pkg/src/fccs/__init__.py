"""Filon-Clenshaw-Curtis-Smolyak quadrature for high-dimensional oscillatory integrals.

Also provides the hybrid numerical-asymptotic Helmholtz solver and the
uncertainty-quantification driver built on top of it.
"""
from .adaptive import AdaptiveResult, NodeCache, adaptive_integrate
from .cheb1d import MIDPOINT, TWO_POINT, ChebLevel, ChebSeries, LevelError, cc_nodes, interpolate
from .fcc1d import Rule1D, build_rule, integrate_1d
from .fem import FemSolution, fem_solve
from .fields import AffineModel, Field, PositivityError, Source, builtin_model, model_from_config
from .filon_weights import RegimeError, moments, oracle_weight, weights_osc, weights_zero
from .hna import HelmholtzProblem, HNASolution, ResonanceError, SpatialMesh, assemble_u1, solve
from .integrands import get_integrand
from .sparse import SparsePlan, combination_coeffs, exact_node_count, fccs_integrate, make_plan
from .uq import Adaptive, Standard, UQResult, expectation_u1, reference_expectation

__all__ = [
    "Adaptive",
    "AdaptiveResult",
    "AffineModel",
    "ChebLevel",
    "ChebSeries",
    "FemSolution",
    "Field",
    "HNASolution",
    "HelmholtzProblem",
    "LevelError",
    "MIDPOINT",
    "NodeCache",
    "PositivityError",
    "RegimeError",
    "ResonanceError",
    "Rule1D",
    "Source",
    "SparsePlan",
    "SpatialMesh",
    "Standard",
    "TWO_POINT",
    "UQResult",
    "adaptive_integrate",
    "assemble_u1",
    "build_rule",
    "builtin_model",
    "cc_nodes",
    "combination_coeffs",
    "exact_node_count",
    "expectation_u1",
    "fccs_integrate",
    "fem_solve",
    "get_integrand",
    "integrate_1d",
    "interpolate",
    "make_plan",
    "model_from_config",
    "moments",
    "oracle_weight",
    "reference_expectation",
    "solve",
    "weights_osc",
    "weights_zero",
]
