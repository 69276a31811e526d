"""The Jaulent-Miodek system

    u0_t = (1/4) u1_xxx + (1/2) u0 u1_x + (1/2)(u0 u1)_x
    u1_t = u0_x + (3/2) u1 u1_x

its linearization, the recursion operator on tangent pairs, and residual
evaluators mirroring the dispersive-water-wave ones.

The flow is implemented in this expanded local form; the operator route
(apply_psi composed with u_x, where the trailing antidifferentiation cancels)
exists as a cross-check oracle in the tests, not as the flow itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .dww import time_derivative
from .errors import GridError
from .grid import EDGE_EXCLUDE, Field, antiderivative, diff, norm_inf


@dataclass(frozen=True)
class JmState:
    """State pair u = (u0, u1) on a shared grid."""

    u0: Field
    u1: Field

    def __post_init__(self):
        if self.u0.grid != self.u1.grid:
            raise GridError("u0 and u1 must share a grid")

    @property
    def grid(self):
        return self.u0.grid


@dataclass(frozen=True)
class JmTangent:
    """Tangent pair (p1, p2) of the Jaulent-Miodek flow."""

    p1: Field
    p2: Field

    def __post_init__(self):
        if self.p1.grid != self.p2.grid:
            raise GridError("tangent components must share a grid")

    @property
    def grid(self):
        return self.p1.grid


def jm_rhs(u: JmState) -> JmTangent:
    """Local right-hand side H(u)."""
    u0, u1 = u.u0, u.u1
    h1 = 0.25 * diff(diff(diff(u1))) + 0.5 * u0 * diff(u1) + 0.5 * diff(u0 * u1)
    h2 = diff(u0) + 1.5 * u1 * diff(u1)
    return JmTangent(h1, h2)


def jm_linearized_rhs(u: JmState, p: JmTangent) -> JmTangent:
    """Directional derivative of jm_rhs at u in direction p."""
    u0, u1 = u.u0, u.u1
    p1, p2 = p.p1, p.p2
    h1 = 0.25 * diff(diff(diff(p2))) + 0.5 * (p1 * diff(u1) + u0 * diff(p2)) + 0.5 * diff(p1 * u1 + u0 * p2)
    h2 = diff(p1) + 1.5 * (p2 * diff(u1) + u1 * diff(p2))
    return JmTangent(h1, h2)


def apply_psi(u: JmState, p: JmTangent, c_inv: float) -> JmTangent:
    """Recursion operator applied to a tangent pair.

    With P2 the antiderivative of p2 (constant c_inv):

      row 1: (1/4) p2_xx + (1/2) u0 p2 + (1/2)(u0 P2)_x
      row 2: p1 + (1/2) u1 p2 + (1/2)(u1 P2)_x
    """
    u0, u1 = u.u0, u.u1
    p1, p2 = p.p1, p.p2
    P2 = antiderivative(p2, c_inv)
    row1 = 0.25 * diff(diff(p2)) + 0.5 * u0 * p2 + 0.5 * diff(u0 * P2)
    row2 = p1 + 0.5 * u1 * p2 + 0.5 * diff(u1 * P2)
    return JmTangent(row1, row2)


def jm_tangent_norm_rel(res: JmTangent, ref: JmTangent) -> float:
    """Relative max norm of a tangent pair, normalized by the pair's scale."""
    num = max(
        norm_inf(res.p1, exclude_edges=EDGE_EXCLUDE),
        norm_inf(res.p2, exclude_edges=EDGE_EXCLUDE),
    )
    den = max(
        norm_inf(ref.p1, exclude_edges=EDGE_EXCLUDE),
        norm_inf(ref.p2, exclude_edges=EDGE_EXCLUDE),
        1.0,
    )
    return num / den


def jm_eigen_residual(u: JmState, p: JmTangent, lam: float, c_inv: float) -> float:
    """Relative residual of the eigen relation at lam."""
    out = apply_psi(u, p, c_inv)
    res = JmTangent(out.p1 - lam * p.p1, out.p2 - lam * p.p2)
    return jm_tangent_norm_rel(res, p)


def jm_pde_residual(series: Sequence[JmState], dt: float) -> float:
    """Max relative PDE residual of an equally spaced state series (>= 5 samples)."""
    if len(series) < 5:
        raise ValueError(f"need at least 5 time samples, got {len(series)}")
    u0s = [u.u0 for u in series]
    u1s = [u.u1 for u in series]
    worst = 0.0
    for j in range(2, len(series) - 2):
        h = jm_rhs(series[j])
        res = JmTangent(time_derivative(u0s, dt, j) - h.p1, time_derivative(u1s, dt, j) - h.p2)
        worst = max(worst, jm_tangent_norm_rel(res, h))
    return worst
