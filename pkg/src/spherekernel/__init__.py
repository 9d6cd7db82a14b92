"""Moment kernels, Verblunsky coefficients and Christoffel approximates for
measures on the unit sphere of C^d."""

from ._linalg import NotPositiveDefinite
from .christoffel import (
    cd_kernel,
    christoffel_sequence,
    lambda_n,
    lambda_n_via_inverse,
    lambda_rank,
    lambda_rank_via_inverse,
    lambda_tail_bracket,
    minimizer,
)
from .kernelfact import (
    VerblunskyTable,
    cholesky_window,
    determinant_identity_residual,
    reconstruct_kernel,
    verblunsky,
    verblunsky_modulus,
    verblunsky_table,
)
from .measure import (
    Atom,
    MeasureSpec,
    Polynomial,
    WeightSpec,
    herglotz_F,
    normalize,
    preset,
    schur_G,
    total_mass,
)
from .moments import (
    MomentKernel,
    check_measure_condition,
    entropy,
    kernel_window,
    moment,
    quadrature_moment,
    sigma_monomial_moment,
)
from .multiindex import MultiIndex, compare, prec, shortlex_rank, shortlex_unrank, succ
from .orthopoly import BallPolynomial, evaluate, gram_schmidt, recurrence_residual, sharp_polys, shift_succ
from .szego import (
    candidate_f_from_g,
    check_sv_hypothesis,
    counterexample_report,
    first_list_residual,
    stable_check,
    summary_report,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "BallPolynomial",
    "MeasureSpec",
    "MomentKernel",
    "MultiIndex",
    "NotPositiveDefinite",
    "Polynomial",
    "VerblunskyTable",
    "WeightSpec",
    "candidate_f_from_g",
    "cd_kernel",
    "check_measure_condition",
    "check_sv_hypothesis",
    "cholesky_window",
    "christoffel_sequence",
    "compare",
    "counterexample_report",
    "determinant_identity_residual",
    "entropy",
    "evaluate",
    "first_list_residual",
    "gram_schmidt",
    "herglotz_F",
    "kernel_window",
    "lambda_n",
    "lambda_n_via_inverse",
    "lambda_rank",
    "lambda_rank_via_inverse",
    "lambda_tail_bracket",
    "minimizer",
    "moment",
    "normalize",
    "prec",
    "preset",
    "quadrature_moment",
    "reconstruct_kernel",
    "recurrence_residual",
    "schur_G",
    "sharp_polys",
    "shift_succ",
    "shortlex_rank",
    "shortlex_unrank",
    "sigma_monomial_moment",
    "stable_check",
    "succ",
    "summary_report",
    "total_mass",
    "verblunsky",
    "verblunsky_modulus",
    "verblunsky_table",
]
