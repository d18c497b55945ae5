from .algebra import ParamPoly, PlanarPoly, HPiPoly, rat, poly_arith, substitute, \
    partial_derivative, content_and_primitive, evaluate, render, proportional
from .parser import parse_expr, parse_param_expr, parse_bindings, parse_system
from .sysdef import PlanarSystem, PerturbedSystem, eps_rescale, kukles_cubic, kukles_deg4, \
    kukles_odd, kukles_conditions, KuklesConditionReport
from .lyapunov import lyapunov_l0, focal_values, lyapunov_chain, weak_focus_order, \
    ChainStep, FocalSequence, LyapunovCertificate, LyapunovQuantity, CenterUpTo
from .melnikov import melnikov1, melnikov2, melnikov1_closed_form, b_coeffs, han_jacobian, \
    francoise_decompose, line_integral_dx, isolate_real_roots, wallis, orbit_integral, \
    MelnikovResult, FrancoiseDecomposition, RootInterval
from .invariants import lie_derivative, cofactor, dulac_divergence, symmetry_center_check, \
    rif_check, CofactorResult, DulacResult, SymmetryReport
from .numerics import NumericSystem, Trajectory, CycleEstimate, integrate, first_return, \
    poincare_return, displacement, find_cycles, melnikov_quadrature, set_global_tolerance, \
    get_global_tolerance
from .exception import CycleLabError, UsageError, MathDomainError

__all__ = ["ParamPoly", "PlanarPoly", "HPiPoly", "rat", "poly_arith", "substitute",
           "partial_derivative", "content_and_primitive", "evaluate", "render",
           "proportional"]

# system definitions
__all__ += ["parse_expr", "parse_param_expr", "parse_bindings", "parse_system",
            "PlanarSystem", "PerturbedSystem", "eps_rescale", "kukles_cubic",
            "kukles_deg4", "kukles_odd", "kukles_conditions", "KuklesConditionReport"]

# analyses
__all__ += ["lyapunov_l0", "focal_values", "lyapunov_chain", "weak_focus_order",
            "ChainStep", "FocalSequence", "LyapunovCertificate", "LyapunovQuantity",
            "CenterUpTo"]
__all__ += ["melnikov1", "melnikov2", "melnikov1_closed_form", "b_coeffs", "han_jacobian",
            "francoise_decompose", "line_integral_dx", "isolate_real_roots", "wallis",
            "orbit_integral", "MelnikovResult", "FrancoiseDecomposition", "RootInterval"]
__all__ += ["lie_derivative", "cofactor", "dulac_divergence", "symmetry_center_check",
            "rif_check", "CofactorResult", "DulacResult", "SymmetryReport"]

# numerics
__all__ += ["NumericSystem", "Trajectory", "CycleEstimate", "integrate", "first_return",
            "poincare_return", "displacement", "find_cycles", "melnikov_quadrature",
            "set_global_tolerance", "get_global_tolerance"]

__all__ += ["CycleLabError", "UsageError", "MathDomainError"]
