"""Exact-arithmetic linear models for crossed ANOVA layouts.

The numerator sum of squares for any linear hypothesis is the extra SSE
from fitting the restricted model; it tests exactly the estimable part
of the hypothesis, and no competing numerator does better.  Everything
up to p-values is exact rational arithmetic.
"""

from .dominance import DominanceReport, check_dominance
from .effects import (
    CellLayout,
    ContrastScheme,
    EffectId,
    all_effects,
    c_block,
    contrast_matrix,
    effect_model_matrix,
    h_projector,
    incidence,
    model_matrix,
    s_matrix,
    u_matrix,
)
from .exactlin import (
    Projector,
    Rat,
    RatMatrix,
    Subspace,
    colspace,
    column_vector,
    complement,
    intersect,
    is_nnd,
    nullspace,
    primitive_columns,
    projector,
    rank,
    solve_linear,
    subspace_sum,
    trace,
)
from .fdist import FParams, f_cdf, f_quantile, p_value, power
from .hypotest import (
    HypothesisSpec,
    LinearModel,
    ParamPoint,
    TestResult,
    adjust_rhs,
    estimable_part,
    f_statistic,
    ncp,
    restriction_nullbasis,
    rmfm_projector,
    rmfm_ss,
    sse,
    testing_target,
    type_numerator,
    type_ss,
)
from .reference import builtin_layout, target_span

__version__ = "0.1.0"

__all__ = [
    "Rat",
    "RatMatrix",
    "Subspace",
    "Projector",
    "colspace",
    "nullspace",
    "projector",
    "complement",
    "intersect",
    "subspace_sum",
    "rank",
    "trace",
    "is_nnd",
    "solve_linear",
    "primitive_columns",
    "column_vector",
    "EffectId",
    "all_effects",
    "ContrastScheme",
    "CellLayout",
    "u_matrix",
    "s_matrix",
    "h_projector",
    "contrast_matrix",
    "c_block",
    "effect_model_matrix",
    "incidence",
    "model_matrix",
    "LinearModel",
    "HypothesisSpec",
    "ParamPoint",
    "TestResult",
    "restriction_nullbasis",
    "rmfm_projector",
    "rmfm_ss",
    "sse",
    "estimable_part",
    "testing_target",
    "type_numerator",
    "type_ss",
    "ncp",
    "f_statistic",
    "adjust_rhs",
    "DominanceReport",
    "check_dominance",
    "FParams",
    "f_cdf",
    "f_quantile",
    "p_value",
    "power",
    "builtin_layout",
    "target_span",
    "__version__",
]
