"""Numerical laboratory for fractional Sobolev traces on planar Jordan curves."""
from .curves import (Circle, InvertedRadial, Polygon, RadialLipschitz, SampledCurve, Side, Snowflake,
                     build_curve, geometry_constants, signed_distance, spec_from_json, spec_to_json)
from .spectral import (BoundaryFunction, HarmonicField, conjugate_on_curve, hilbert_transform,
                       hs_seminorm, parse_boundary_function, poisson_field)
from .conformal import (ConvergenceError, StarlikeMap, koebe_check, lipschitz_data, p_interval,
                        theodorsen_map)
from ._quad import DivergenceWarning
from .spaces import (douglas_norm, gradient_bound_check, holder_seminorm, littlewood_paley_norm,
                     norm_report, vsp_isometry_check, weight_exponent)
from .plemelj import (area_cauchy, beurling_apply, cauchy_transform, murai_profile,
                      operator_norm_estimate, plemelj_decompose)
from .geom_diag import admissible_region, ap_constant, estimate_h, minkowski_profile
from .dirichlet import almost_dirichlet_ratio, competitor_extension, dirichlet_sweep
from .report import render_region_svg

__all__ = [
    "Circle", "InvertedRadial", "Polygon", "RadialLipschitz", "SampledCurve", "Side", "Snowflake",
    "build_curve", "geometry_constants", "signed_distance", "spec_from_json", "spec_to_json",
    "BoundaryFunction", "HarmonicField", "conjugate_on_curve", "hilbert_transform", "hs_seminorm",
    "parse_boundary_function", "poisson_field",
    "ConvergenceError", "StarlikeMap", "koebe_check", "lipschitz_data", "p_interval", "theodorsen_map",
    "DivergenceWarning",
    "douglas_norm", "gradient_bound_check", "holder_seminorm", "littlewood_paley_norm", "norm_report",
    "vsp_isometry_check", "weight_exponent",
    "area_cauchy", "beurling_apply", "cauchy_transform", "murai_profile", "operator_norm_estimate",
    "plemelj_decompose",
    "admissible_region", "ap_constant", "estimate_h", "minkowski_profile",
    "almost_dirichlet_ratio", "competitor_extension", "dirichlet_sweep",
    "render_region_svg",
]
