"""Invertible change of variables between the Jaulent-Miodek and dispersive
water wave systems, and the induced map on eigenfunction pairs.

Forward:  q = u0 + (1/4) u1^2 - (1/2) u1_x,   r = u1
Inverse:  u1 = r,                             u0 = q - (1/4) r^2 + (1/2) r_x

On eigenfunctions the map is triangular and depends on r only:

  psi1 = s1 + (1/2) s2_x - (1/2) r s2,   psi2 = s2

A tangent at eigenvalue lam of the water-wave recursion operator maps to a
tangent at eigenvalue lam/2 of the Jaulent-Miodek one.
"""
from __future__ import annotations

from .dww import DwwState, DwwTangent
from .grid import Field, diff
from .jm import JmState, JmTangent


def miura_fwd(u: JmState) -> DwwState:
    q = u.u0 + 0.25 * u.u1 * u.u1 - 0.5 * diff(u.u1)
    return DwwState(q, u.u1)


def miura_inv(v: DwwState) -> JmState:
    u0 = v.q - 0.25 * v.r * v.r + 0.5 * diff(v.r)
    return JmState(u0, v.r)


def eigen_map_fwd(s: DwwTangent, r: Field) -> JmTangent:
    p1 = s.s1 + 0.5 * diff(s.s2) - 0.5 * r * s.s2
    return JmTangent(p1, s.s2)


def eigen_map_inv(p: JmTangent, r: Field) -> DwwTangent:
    s1 = p.p1 - 0.5 * diff(p.p2) + 0.5 * r * p.p2
    return DwwTangent(s1, p.p2)


def map_eigenvalue_fwd(lam_dww: float) -> float:
    """Eigenvalue carried by eigen_map_fwd."""
    return 0.5 * lam_dww


def map_eigenvalue_inv(lam_jm: float) -> float:
    return 2.0 * lam_jm
