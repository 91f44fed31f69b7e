"""Gauss-type quadrature for Hadamard finite-part integrals with a
cancellation-free treatment of the node nearest the singularity."""

from .bounds import (
    BoundReport,
    EllipseSpec,
    gauss_remainder_bound,
    interp_remainder_bound,
    max_on_ellipse,
    theorem41_bound,
    total_bound,
)
from .combinatorics import cycle_index_explicit, cycle_index_prefix, partitions_of
from .engine import (
    QuadratureResult,
    SearchResult,
    evaluate_baseline,
    evaluate_hfp,
    search_optimal_n,
    select_closest,
)
from .integrands import Integrand, exp_integrand, inv_sqrt_pole, monomial, rational_pole
from .interpolation import (
    CoefficientTable,
    LayoutError,
    NodeLayout,
    coefficient_table,
    confluent_divdiff_direct,
    eta_values,
    layout_nodes,
    surrogate_divdiff,
)
from .moments import MomentVector, UnsupportedWeightError, finite_part_moments
from .orthogonal import GaussRule, WeightFamily, gauss_rule, weight_mass
from .specialfn import ExactReference, exact_reference, exponential_integral

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "EllipseSpec", "gauss_remainder_bound", "interp_remainder_bound",
    "max_on_ellipse", "theorem41_bound", "total_bound",
    "cycle_index_explicit", "cycle_index_prefix", "partitions_of",
    "QuadratureResult", "SearchResult", "evaluate_baseline", "evaluate_hfp",
    "search_optimal_n", "select_closest",
    "Integrand", "exp_integrand", "inv_sqrt_pole", "monomial", "rational_pole",
    "CoefficientTable", "LayoutError", "NodeLayout", "coefficient_table",
    "confluent_divdiff_direct", "eta_values", "layout_nodes", "surrogate_divdiff",
    "MomentVector", "UnsupportedWeightError", "finite_part_moments",
    "GaussRule", "WeightFamily", "gauss_rule", "weight_mass",
    "ExactReference", "exact_reference", "exponential_integral",
]
