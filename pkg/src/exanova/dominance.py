"""Checks that no competing numerator beats the restricted-minus-full one.

Given a design X, a matrix H with sp(H) inside sp(X), and any L whose
quadratic form tests the same thing (sp(X'L) = sp(X'H)), four facts
hold: projecting L back into the model recovers sp(H); L lives inside
sp(H) plus the residual space; the noncentrality-governing matrix
X'P_H X - X'P_L X is nonnegative definite; and the degrees of freedom
satisfy nu_H = nu_{P_X L} <= nu_L <= nu_H + n - nu_X.  All four are
decided exactly over the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactlin import RatMatrix, colspace, is_nnd, projector

__all__ = ["DominanceReport", "check_dominance"]


@dataclass(frozen=True)
class DominanceReport:
    """Outcome of the four competing-numerator conclusions.

    When the preconditions hold these are all True; a False field means
    a bug, not a property of the inputs (violated preconditions raise
    instead of reporting).
    """

    span_recovered: bool
    containment: bool
    nnd_holds: bool
    nu_h: int
    nu_pxl: int
    nu_l: int
    df_slack: int  # n - nu_X
    df_bounds_hold: bool

    @property
    def all_hold(self) -> bool:
        return (
            self.span_recovered
            and self.containment
            and self.nnd_holds
            and self.df_bounds_hold
        )


def check_dominance(x: RatMatrix, h: RatMatrix, l: RatMatrix) -> DominanceReport:
    """Evaluate the four conclusions for a competing numerator matrix L.

    Preconditions, checked first and raised on failure:
    sp(H) inside sp(X), and sp(X'L) = sp(X'H).
    """
    n = x.nrows
    if h.nrows != n or l.nrows != n:
        raise ValueError("X, H, L must have the same number of rows")
    p_x = projector(x)
    if p_x.matrix @ h != h:
        raise ValueError("precondition failed: sp(H) is not contained in sp(X)")
    xt = x.transpose()
    if colspace(xt @ l) != colspace(xt @ h):
        raise ValueError("precondition failed: sp(X'L) differs from sp(X'H)")

    p_h = projector(h)
    p_l = projector(l)
    resid = p_x.complement()

    span_recovered = colspace(p_x.matrix @ l) == colspace(h)
    # sp(H) and sp(X)-perp are orthogonal, so the projector onto their sum
    # is the plain sum of projectors; containment iff it fixes L
    enlarged = p_h.matrix + resid.matrix
    containment = enlarged @ l == l
    nnd_holds = is_nnd(xt @ p_h.matrix @ x - xt @ p_l.matrix @ x)

    nu_h = p_h.nu
    nu_pxl = (p_x.matrix @ l).rank()
    nu_l = p_l.nu
    slack = n - p_x.nu
    df_bounds_hold = nu_h == nu_pxl <= nu_l <= nu_h + slack

    return DominanceReport(
        span_recovered=span_recovered,
        containment=containment,
        nnd_holds=nnd_holds,
        nu_h=nu_h,
        nu_pxl=nu_pxl,
        nu_l=nu_l,
        df_slack=slack,
        df_bounds_hold=df_bounds_hold,
    )


def auxiliary_projector(x: RatMatrix, h: RatMatrix, l: RatMatrix) -> RatMatrix:
    """The matrix P_H + (I - P_X) - P_L, symmetric idempotent whenever the
    dominance preconditions hold; exposed for verification suites."""
    p_h = projector(h)
    p_l = projector(l)
    resid = projector(x).complement()
    return p_h.matrix + resid.matrix - p_l.matrix
