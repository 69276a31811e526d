"""The dispersive water wave system

    q_t = (1/2)(2 q r - q_x)_x
    r_t = (1/2)(r_x + r^2 + 2 q)_x

its linearization, the recursion operator acting on tangent pairs, and the
residual evaluators used to verify claimed solutions and eigenfunctions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import GridError
from .grid import EDGE_EXCLUDE, Field, antiderivative, diff, norm_inf


@dataclass(frozen=True)
class DwwState:
    """State pair v = (q, r) on a shared grid."""

    q: Field
    r: Field

    def __post_init__(self):
        if self.q.grid != self.r.grid:
            raise GridError("q and r must share a grid")

    @property
    def grid(self):
        return self.q.grid


@dataclass(frozen=True)
class DwwTangent:
    """Tangent pair (s1, s2): a symmetry direction or a state time-derivative."""

    s1: Field
    s2: Field

    def __post_init__(self):
        if self.s1.grid != self.s2.grid:
            raise GridError("tangent components must share a grid")

    @property
    def grid(self):
        return self.s1.grid


def dww_rhs(v: DwwState) -> DwwTangent:
    """Right-hand side K(v) = ((1/2)(2qr - q_x)_x, (1/2)(r_x + r^2 + 2q)_x)."""
    q, r = v.q, v.r
    k1 = 0.5 * diff(2.0 * q * r - diff(q))
    k2 = 0.5 * diff(diff(r) + r * r + 2.0 * q)
    return DwwTangent(k1, k2)


def dww_linearized_rhs(v: DwwState, s: DwwTangent) -> DwwTangent:
    """Directional derivative of dww_rhs at v in direction s."""
    q, r = v.q, v.r
    s1, s2 = s.s1, s.s2
    k1 = 0.5 * diff(2.0 * s1 * r + 2.0 * q * s2 - diff(s1))
    k2 = 0.5 * diff(diff(s2) + 2.0 * r * s2 + 2.0 * s1)
    return DwwTangent(k1, k2)


def apply_phi(v: DwwState, s: DwwTangent, c_inv: float) -> DwwTangent:
    """Recursion operator applied to a tangent pair.

    Row 1: -s1_x + r s1 + 2 q s2 + q_x * P   with P the antiderivative of s2
    Row 2:  2 s1 + s2_x + (r P)_x

    The operator contains one antidifferentiation; its constant c_inv is an
    explicit argument because eigen-relations are sensitive to it.
    """
    q, r = v.q, v.r
    s1, s2 = s.s1, s.s2
    P = antiderivative(s2, c_inv)
    row1 = -diff(s1) + r * s1 + 2.0 * q * s2 + diff(q) * P
    row2 = 2.0 * s1 + diff(s2) + diff(r * P)
    return DwwTangent(row1, row2)


def tangent_norm_rel(res: DwwTangent, ref: DwwTangent) -> float:
    """Relative max norm of a tangent pair against the reference pair.

    Both components are normalized by the pair's common scale: residual rows
    mix both components, so per-component normalization would misgrade them
    when the scales differ by orders of magnitude.
    """
    num = max(
        norm_inf(res.s1, exclude_edges=EDGE_EXCLUDE),
        norm_inf(res.s2, exclude_edges=EDGE_EXCLUDE),
    )
    den = max(
        norm_inf(ref.s1, exclude_edges=EDGE_EXCLUDE),
        norm_inf(ref.s2, exclude_edges=EDGE_EXCLUDE),
        1.0,
    )
    return num / den


def dww_eigen_residual(v: DwwState, s: DwwTangent, lam: float, c_inv: float) -> float:
    """Relative residual of the eigen relation (recursion operator) at lam."""
    out = apply_phi(v, s, c_inv)
    res = DwwTangent(out.s1 - lam * s.s1, out.s2 - lam * s.s2)
    return tangent_norm_rel(res, s)


def time_derivative(series: Sequence[Field], dt: float, j: int) -> Field:
    """4th-order central first time-derivative at index j (needs j-2..j+2)."""
    if j < 2 or j > len(series) - 3:
        raise ValueError("central stencil needs two samples on each side")
    return (series[j - 2] - 8.0 * series[j - 1] + 8.0 * series[j + 1] - series[j + 2]) / (12.0 * dt)


def dww_pde_residual(series: Sequence[DwwState], dt: float) -> float:
    """Max relative PDE residual of an equally spaced state series.

    Central 4th-order differences in t are compared against dww_rhs at every
    interior sample (those with two neighbours on each side), so at least 5
    samples are required.
    """
    if len(series) < 5:
        raise ValueError(f"need at least 5 time samples, got {len(series)}")
    qs = [v.q for v in series]
    rs = [v.r for v in series]
    worst = 0.0
    for j in range(2, len(series) - 2):
        k = dww_rhs(series[j])
        res = DwwTangent(time_derivative(qs, dt, j) - k.s1, time_derivative(rs, dt, j) - k.s2)
        worst = max(worst, tangent_norm_rel(res, k))
    return worst
