"""Restricted-vs-full-model hypothesis testing for linear models.

For a model with design matrix X and a linear hypothesis G'beta = 0, the
numerator sum of squares used throughout is the extra SSE incurred by
fitting the restricted model: its projector is P_X - P_XN, where the
columns of N span the orthogonal complement of sp(G).  That quadratic
form tests exactly the estimable part of the hypothesis,
sp(X') intersect sp(G), with no tolerance anywhere: all of this module
is exact rational arithmetic.  Floats appear only in p-values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fdist
from .effects import (
    CellLayout,
    ContrastScheme,
    EffectId,
    all_effects,
    effect_model_matrix,
    incidence,
)
from .exactlin import (
    Projector,
    RatMatrix,
    Subspace,
    colspace,
    column_vector,
    intersect,
    projector,
    solve_linear,
)

__all__ = [
    "LinearModel",
    "HypothesisSpec",
    "ParamPoint",
    "TestResult",
    "SS_TYPES",
    "restriction_nullbasis",
    "rmfm_projector",
    "rmfm_ss",
    "sse",
    "estimable_part",
    "testing_target",
    "type_model_set",
    "type_numerator",
    "type_ss",
    "ncp",
    "f_statistic",
    "adjust_rhs",
    "quad_form",
]

SS_TYPES = (1, 2, 3)


class LinearModel:
    """A fixed design matrix with its cached projector and rank."""

    def __init__(self, x: RatMatrix):
        if x.ncols < 1:
            raise ValueError("design matrix needs at least one column")
        if x.is_zero:
            raise ValueError("design matrix needs at least one nonzero entry")
        self.x = x
        self.projector = projector(x)
        self.nu = self.projector.nu

    @property
    def n(self) -> int:
        return self.x.nrows

    @property
    def ncoef(self) -> int:
        return self.x.ncols

    def residual_projector(self) -> Projector:
        return self.projector.complement()

    def __repr__(self) -> str:
        return f"LinearModel(n={self.n}, coef={self.ncoef}, rank={self.nu})"


class HypothesisSpec:
    """The matrix G of a linear hypothesis G'beta = 0."""

    def __init__(self, g: RatMatrix):
        if g.ncols < 1:
            raise ValueError("hypothesis matrix needs at least one column")
        self.g = g

    @property
    def ncoef(self) -> int:
        return self.g.nrows

    def __repr__(self) -> str:
        return f"HypothesisSpec({self.g.nrows}x{self.g.ncols})"


@dataclass(frozen=True)
class ParamPoint:
    """A parameter point (beta, sigma^2) at which to evaluate noncentrality."""

    beta: tuple[Fraction, ...]
    sigma2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(Fraction(b) for b in self.beta))
        object.__setattr__(self, "sigma2", Fraction(self.sigma2))
        if self.sigma2 <= 0:
            raise ValueError("sigma^2 must be positive")


@dataclass
class TestResult:
    """Numerator and denominator sums of squares with their F statistic.

    f_value is defined only when the numerator has positive degrees of
    freedom and the denominator sum of squares is positive; otherwise it
    (and the p-value) is None.  estimable_part carries the subspace the
    numerator actually tests, when the caller supplies enough context to
    name one.
    """

    ss_num: Fraction
    nu_num: int
    ss_den: Fraction
    nu_den: int
    f_value: Fraction | None
    estimable_part: Subspace | None = None
    p_value: float | None = None


def _check_pair(model: LinearModel, spec: HypothesisSpec) -> None:
    if spec.ncoef != model.ncoef:
        raise ValueError(
            f"hypothesis has {spec.ncoef} coefficient rows, model has {model.ncoef} coefficients"
        )


def quad_form(y: Sequence[Fraction | int | str], p: RatMatrix) -> Fraction:
    """y' P y as an exact rational."""
    yv = column_vector(y)
    if yv.nrows != p.nrows:
        raise ValueError("response length does not match the matrix")
    return (yv.transpose() @ p @ yv).entry(0, 0)


def restriction_nullbasis(spec: HypothesisSpec) -> RatMatrix:
    """Basis N of the orthogonal complement of sp(G); the restricted model
    {X b : G'b = 0} is then spanned by X N."""
    return colspace(spec.g).complement().basis


def rmfm_projector(model: LinearModel, spec: HypothesisSpec) -> Projector:
    """Projector of the restricted-minus-full extra SSE: P_X - P_XN."""
    _check_pair(model, spec)
    n_basis = restriction_nullbasis(spec)
    restricted = projector(model.x @ n_basis)
    return model.projector.minus(restricted)


def rmfm_ss(y: Sequence[Fraction | int | str], model: LinearModel, spec: HypothesisSpec) -> Fraction:
    """Extra sum of squares from imposing G'beta = 0 on the model."""
    return quad_form(y, rmfm_projector(model, spec).matrix)


def sse(y: Sequence[Fraction | int | str], x: RatMatrix) -> Fraction:
    """Residual sum of squares of y against the column space of x."""
    resid = projector(x).complement()
    return quad_form(y, resid.matrix)


def estimable_part(model: LinearModel, spec: HypothesisSpec) -> Subspace:
    """The testable portion of the hypothesis: sp(X') intersect sp(G).

    Computed two ways (directly, and as sp(X' P_H) through the numerator
    projector); the routes provably agree, and disagreement would mean a
    defect in the subspace calculus, so it is checked.
    """
    _check_pair(model, spec)
    direct = intersect(colspace(model.x.transpose()), colspace(spec.g))
    via_projector = colspace(model.x.transpose() @ rmfm_projector(model, spec).matrix)
    if direct != via_projector:
        raise AssertionError("estimable-part routes disagree; subspace calculus is broken")
    return direct


def testing_target(m: RatMatrix, k: RatMatrix, p: Projector) -> Subspace:
    """What a numerator SS tests about the cell means, in the model
    whose cell-mean matrix is m: the span of P_m K' P."""
    if k.nrows != p.ambient:
        raise ValueError("incidence rows must match the projector's space")
    if k.ncols != m.nrows:
        raise ValueError("incidence columns must match the cell-mean model rows")
    return colspace(projector(m).matrix @ k.transpose() @ p.matrix)


def type_model_set(t: int, effect: EffectId) -> frozenset[EffectId]:
    """Effect set of the model in which a type-t SS removes `effect`:
    type 1 is mean plus the effect, type 2 the additive model, type 3
    the saturated model.  Two-factor naming."""
    if effect.nfactors != 2:
        raise ValueError("type-based SS naming is defined for two-factor layouts")
    if t == 1:
        return frozenset({EffectId((0, 0)), effect})
    if t == 2:
        return frozenset({EffectId((0, 0)), EffectId((1, 0)), EffectId((0, 1))})
    if t == 3:
        return frozenset(all_effects(2))
    raise ValueError("SS type must be 1, 2, or 3")


def type_numerator(
    t: int,
    effect: EffectId,
    layout: CellLayout,
    scheme: ContrastScheme | None = None,
) -> Projector:
    """Numerator projector of the type-t SS for `effect`: the projector
    difference from dropping the effect's columns out of its model."""
    model_set = type_model_set(t, effect)
    if effect not in model_set:
        raise ValueError(f"effect {effect} is not in the type-{t} model")
    k = incidence(layout)
    full = projector(k @ effect_model_matrix(model_set, layout.dims, scheme))
    rest = model_set - {effect}
    if rest:
        reduced = projector(k @ effect_model_matrix(rest, layout.dims, scheme))
    else:
        reduced = Projector.zero(layout.n)
    return full.minus(reduced)


def type_ss(
    t: int,
    effect: EffectId,
    layout: CellLayout,
    y: Sequence[Fraction | int | str],
    scheme: ContrastScheme | None = None,
    *,
    report_set: frozenset[EffectId] | None = None,
    denominator: Projector | None = None,
) -> TestResult:
    """Type-t sum of squares for one effect of a two-factor layout.

    The denominator defaults to the saturated-model residual, with
    n - rank(K) degrees of freedom.  `report_set` picks the model in
    which the testing target is reported (default: the SS's own model).
    `denominator` overrides the residual projector.
    """
    if effect not in type_model_set(t, effect):
        raise ValueError(f"effect {effect} is not in the type-{t} model")
    yv = [Fraction(v) for v in y]
    if len(yv) != layout.n:
        raise ValueError(f"need {layout.n} responses, got {len(yv)}")
    k = incidence(layout)
    p_num = type_numerator(t, effect, layout, scheme)
    ss_num = quad_form(yv, p_num.matrix)
    nu_num = p_num.nu
    if denominator is None:
        q = projector(k).complement()
    else:
        q = denominator
        if not (p_num.matrix @ q.matrix).is_zero:
            raise ValueError("denominator projector must be orthogonal to the numerator")
    ss_den = quad_form(yv, q.matrix)
    nu_den = q.nu
    f_value: Fraction | None = None
    p: float | None = None
    if nu_num > 0 and nu_den > 0 and ss_den > 0:
        f_value = (ss_num / nu_num) / (ss_den / nu_den)
        p = fdist.p_value_from(float(f_value), nu_num, nu_den)
    target_set = report_set if report_set is not None else type_model_set(t, effect)
    m = effect_model_matrix(target_set, layout.dims, scheme)
    target = testing_target(m, k, p_num)
    return TestResult(
        ss_num=ss_num,
        nu_num=nu_num,
        ss_den=ss_den,
        nu_den=nu_den,
        f_value=f_value,
        estimable_part=target,
        p_value=p,
    )


def ncp(p: Projector, model: LinearModel, point: ParamPoint) -> Fraction:
    """Noncentrality beta' X' P X beta / sigma^2 of the quadratic form."""
    if len(point.beta) != model.ncoef:
        raise ValueError("beta length must match the model's coefficient count")
    if point.sigma2 <= 0:
        raise ValueError("sigma^2 must be positive")
    mu = model.x @ column_vector(point.beta)
    return quad_form([mu.entry(i, 0) for i in range(mu.nrows)], p.matrix) / point.sigma2


def f_statistic(
    y: Sequence[Fraction | int | str], p: Projector, q: Projector
) -> TestResult:
    """Exact F statistic (SS_P/nu_P)/(SS_Q/nu_Q).

    Requires P Q = 0; the caller must supply a denominator projector
    orthogonal to the model space.  Raises when the statistic is
    undefined (zero numerator df, or zero denominator SS).
    """
    if p.ambient != q.ambient:
        raise ValueError("projectors act on different spaces")
    if not (p.matrix @ q.matrix).is_zero:
        raise ValueError("numerator and denominator projectors must be orthogonal")
    if p.nu == 0:
        raise ValueError("numerator has zero degrees of freedom; F is undefined")
    ss_p = quad_form(y, p.matrix)
    ss_q = quad_form(y, q.matrix)
    if q.nu == 0 or ss_q == 0:
        raise ValueError("denominator sum of squares is zero; F is undefined")
    f_value = (ss_p / p.nu) / (ss_q / q.nu)
    return TestResult(
        ss_num=ss_p,
        nu_num=p.nu,
        ss_den=ss_q,
        nu_den=q.nu,
        f_value=f_value,
        estimable_part=None,
        p_value=fdist.p_value_from(float(f_value), p.nu, q.nu),
    )


def adjust_rhs(
    y: Sequence[Fraction | int | str],
    model: LinearModel,
    spec: HypothesisSpec,
    c0: Sequence[Fraction | int | str],
) -> list[Fraction]:
    """Shift the response so a nonzero right-hand side G'beta = c0 reduces
    to the homogeneous case: returns y - X b0 for the minimum-norm b0
    with G'b0 = c0.  Raises if no such b0 exists."""
    _check_pair(model, spec)
    c_vec = column_vector(c0)
    if c_vec.nrows != spec.g.ncols:
        raise ValueError("right-hand side length must match the hypothesis columns")
    particular = solve_linear(spec.g.transpose(), c_vec)
    if particular is None:
        raise ValueError("inconsistent right-hand side: no b0 satisfies G'b0 = c0")
    b0 = projector(spec.g).apply(column_vector(particular))
    shifted = column_vector(y) - model.x @ b0
    return [shifted.entry(i, 0) for i in range(shifted.nrows)]
