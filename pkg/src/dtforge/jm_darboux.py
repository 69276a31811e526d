"""Direct Darboux transformation of the Jaulent-Miodek system.

All antiderivatives of the second eigenfunction component are materialized as
the stored field P2 with its constant fixed at construction; the constant is
pinned by the identity

    derivative of [(lam - u1/2) P2 - psi2/2]  ==  sigma1,

where sigma1 is the first component of the water-wave image of the pair.
That identity is asserted when a potential is built rather than trusted,
because it silently fixes the integration constants the transformation
formulas depend on.

With G = lam1 - u1/2 + psi2,1/(2 P2,1) the state map reads

    u1[1] = u1 + E,             E = G_x / G
    u0[1] = u0 + ((1/2) u1 + psi2,1/(2 P2,1))_x + (1/2) E_x - (1/4) E (E + 2 u1)

and the eigenfunction map, with denom = (lam1 - u1/2) P2,1 + psi2,1/2,

    F       = ((B + psi2 P2,1)/denom)_x
    psi2[1] = psi2 - F
    psi1[1] = psi1 - (B/P2,1)_x - F_x/2 - (1/2)(E psi2 - F (u1 + E))
    P2[1]   = P2 - (B + psi2 P2,1)/denom

Like the water-wave transport, B carries one meaningful constant, solved for
by default so that the transported pair satisfies the first integral of the
water-wave image at the transformed state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .darboux import _require_regular, _solve_b_shift
from .errors import EigenMismatchError, GridError, SingularDenominatorError
from .grid import Field, antiderivative, diff, norm_rel
from .jets import (
    Jet,
    jet_add,
    jet_div,
    jet_integrate,
    jet_mul,
    jet_scale,
    jet_shift,
    jet_sub,
)
from .jm import JmState, JmTangent, jm_tangent_norm_rel
from .miura import eigen_map_inv

ATTACH_TOL = 1e-4
IDENTITY_TOL = 1e-4


def _field_jet(head: Field, derivs: tuple[Field, ...], order: int) -> Jet:
    stack = [head.values, *(d.values for d in derivs)]
    f = derivs[-1] if derivs else head
    while len(stack) < order + 1:
        f = diff(f)
        stack.append(f.values)
    return [np.asarray(a) for a in stack[: order + 1]]


@dataclass(frozen=True)
class JmEigenPotential:
    """Eigenpair (psi1, psi2) with its bound antiderivative P2 at eigenvalue lam."""

    psi1: Field
    psi2: Field
    P2: Field
    lam: float
    psi1_derivs: tuple[Field, ...] = ()
    psi2_derivs: tuple[Field, ...] = ()

    def __post_init__(self):
        for f in (self.psi2, self.P2, *self.psi1_derivs, *self.psi2_derivs):
            if f.grid != self.psi1.grid:
                raise GridError("potential components must share a grid")

    @property
    def grid(self):
        return self.psi1.grid

    def jet_psi1(self, order: int) -> Jet:
        return _field_jet(self.psi1, self.psi1_derivs, order)

    def jet_psi2(self, order: int) -> Jet:
        return _field_jet(self.psi2, self.psi2_derivs, order)

    def jet_P2(self, order: int) -> Jet:
        if order == 0:
            return [self.P2.values]
        return [self.P2.values, *self.jet_psi2(order - 1)]

    @property
    def stored_order(self) -> int:
        return min(len(self.psi1_derivs), len(self.psi2_derivs))

    def tangent(self) -> JmTangent:
        return JmTangent(self.psi1, self.psi2)

    def scaled(self, k: float) -> "JmEigenPotential":
        return JmEigenPotential(
            k * self.psi1,
            k * self.psi2,
            k * self.P2,
            self.lam,
            tuple(k * d for d in self.psi1_derivs),
            tuple(k * d for d in self.psi2_derivs),
        )


def make_jm_eigenpotential(
    u: JmState,
    psi1: Field,
    psi2: Field,
    P2: Field,
    lam: float,
    psi1_derivs: tuple[Field, ...] = (),
    psi2_derivs: tuple[Field, ...] = (),
    identity_tol: float = IDENTITY_TOL,
) -> JmEigenPotential:
    """Construct a potential, asserting the constant-binding identities.

    Checks diff(P2) = psi2 and that the derivative of
    (lam - u1/2) P2 - psi2/2 reproduces the water-wave image sigma1.
    """
    eig = JmEigenPotential(psi1, psi2, P2, lam, psi1_derivs, psi2_derivs)
    d1 = norm_rel(diff(P2) - psi2, psi2, exclude_edges=4)
    if d1 > identity_tol:
        raise EigenMismatchError(f"diff(P2) != psi2: relative deviation {d1:.3e}")
    w1 = (lam - 0.5 * u.u1) * P2 - 0.5 * psi2
    sigma1 = eigen_map_inv(eig.tangent(), u.u1).s1
    d2 = norm_rel(diff(w1) - sigma1, sigma1, exclude_edges=4)
    if d2 > identity_tol:
        raise EigenMismatchError(
            f"integration constants of P2 are inconsistent: identity deviation {d2:.3e}"
        )
    return eig


def jm_eigen_stationary_residual(u: JmState, eig: JmEigenPotential) -> float:
    """Eigen-relation residual computed with the stored P2 (no free constant)."""
    u0, u1 = u.u0, u.u1
    g = eig.grid
    p1, p2, P2 = eig.psi1, eig.psi2, eig.P2
    p2xx = g.field(eig.jet_psi2(2)[2])
    row1 = 0.25 * p2xx + 0.5 * u0 * p2 + 0.5 * diff(u0 * P2) - eig.lam * p1
    row2 = p1 + 0.5 * u1 * p2 + 0.5 * diff(u1 * P2) - eig.lam * p2
    return jm_tangent_norm_rel(JmTangent(row1, row2), eig.tangent())


def _check_attached(u: JmState, eig: JmEigenPotential, attach_tol: float):
    res = jm_eigen_stationary_residual(u, eig)
    if res > attach_tol:
        raise EigenMismatchError(
            f"not an eigenpotential of this state: residual {res:.3e} > {attach_tol:.0e}"
        )


def _state_jet(f: Field, order: int) -> Jet:
    return _field_jet(f, (), order)


def _G_jet(u: JmState, eig1: JmEigenPotential, order: int) -> Jet:
    u1_jet = _state_jet(u.u1, order)
    ratio = jet_div(eig1.jet_psi2(order), jet_scale(eig1.jet_P2(order), 2.0))
    G = jet_sub(ratio, jet_scale(u1_jet, 0.5))
    G[0] = G[0] + eig1.lam
    return G


def jm_aux_E(u: JmState, eig1: JmEigenPotential) -> Field:
    """E = G_x/G with G = lam1 - u1/2 + psi2,1/(2 P2,1), in log-free form."""
    _require_regular(eig1.P2.values, "jm_aux_E P2,1")
    G = _G_jet(u, eig1, 1)
    _require_regular(G[0], "jm_aux_E log argument")
    return u.u1.grid.field(G[1] / G[0])


def dt_jm_state(u: JmState, eig1: JmEigenPotential, attach_tol: float = ATTACH_TOL) -> JmState:
    """One transformation step applied to the state."""
    _check_attached(u, eig1, attach_tol)
    g = u.grid
    _require_regular(eig1.P2.values, "dt_jm_state P2,1")
    G = _G_jet(u, eig1, 2)
    _require_regular(G[0], "dt_jm_state log argument")
    E = jet_div(jet_shift(G), G)  # [E, E_x]
    u1_jet = _state_jet(u.u1, 1)
    drift = jet_add(jet_scale(u1_jet, 0.5), jet_div(eig1.jet_psi2(1), jet_scale(eig1.jet_P2(1), 2.0)))
    u1_new = u.u1 + g.field(E[0])
    u0_new = (
        u.u0
        + g.field(drift[1])
        + 0.5 * g.field(E[1])
        - 0.25 * g.field(E[0] * (E[0] + 2.0 * u.u1.values))
    )
    return JmState(u0_new, u1_new)


def jm_aux_B(p: JmTangent, eig1: JmEigenPotential, u1: Field, cB: float) -> Field:
    """Bilinear antiderivative in psi variables, B(x0) = cB.

    The integrand is sigma1 * P2,1 + psi2 * w1,1 where sigma1 is the
    water-wave image of p and w1,1 = (lam1 - u1/2) P2,1 - psi2,1/2.
    """
    if p.grid != eig1.grid:
        raise GridError("tangent and potential live on different grids")
    sigma1 = eigen_map_inv(p, u1).s1
    w1_1 = (eig1.lam - 0.5 * u1) * eig1.P2 - 0.5 * eig1.psi2
    return antiderivative(sigma1 * eig1.P2 + p.p2 * w1_1, cB)


def _w1_jet(u1_jet: Jet, eig: JmEigenPotential, order: int) -> Jet:
    """Jet of (lam - u1/2) P2 - psi2/2, the water-wave w1 of a pair."""
    lam_minus = jet_scale(u1_jet[: order + 1], -0.5)
    lam_minus[0] = lam_minus[0] + eig.lam
    return jet_sub(
        jet_mul(lam_minus, eig.jet_P2(order)), jet_scale(eig.jet_psi2(order), 0.5)
    )


def dt_jm_eigen(
    u: JmState,
    eig1: JmEigenPotential,
    eig: JmEigenPotential,
    cB: float | None = None,
    attach_tol: float = ATTACH_TOL,
) -> JmEigenPotential:
    """Transport a second potential through the step generated by eig1.

    As in the water-wave case the constant of B matters; cB=None (default)
    solves for the value making the transported pair satisfy the
    constant-binding first integral at the transformed state.
    """
    if eig.lam == eig1.lam:
        raise SingularDenominatorError(
            f"degenerate transformation unsupported (lam = lam1 = {eig.lam})"
        )
    _check_attached(u, eig1, attach_tol)
    _check_attached(u, eig, attach_tol)
    g = u.grid

    depth = max(min(eig.stored_order, eig1.stored_order) - 1, 1)
    u1_jet = _state_jet(u.u1, depth + 1)
    P2t = eig1.jet_P2(depth + 1)
    psi2t = eig1.jet_psi2(depth + 1)
    P2g = eig.jet_P2(depth + 1)
    psi2g = eig.jet_psi2(depth)
    psi1g = eig.jet_psi1(depth)
    w1t = _w1_jet(u1_jet, eig1, depth + 1)
    w1g = _w1_jet(u1_jet, eig, depth)

    _require_regular(P2t[0], "dt_jm_eigen P2,1")
    denom = jet_add(w1t, psi2t)  # (lam1 - u1/2) P2,1 + psi2,1/2  ==  w1,1 + psi2,1
    denom = jet_sub(denom, jet_scale(psi2t, 0.5))
    _require_regular(denom[0], "dt_jm_eigen F denominator")

    integrand = jet_add(jet_mul(jet_shift(w1g), P2t), jet_mul(psi2g, w1t))
    Bvals = antiderivative(g.field(integrand[0]), 0.0 if cB is None else cB).values
    Bjet = jet_integrate(Bvals, integrand)

    out = dt_jm_state(u, eig1, attach_tol)

    if cB is None:
        # water-wave first integral of the transported pair (lam_dww = 2 lam)
        w1tr = jet_sub(w1g, jet_div(Bjet, P2t))
        num2 = jet_add(Bjet, jet_mul(psi2g, P2t))
        w2tr = jet_sub(P2g, jet_div(num2, denom))
        lam_dww = 2.0 * eig.lam
        rid0 = lam_dww * w2tr[0] - w2tr[1] - 2.0 * w1tr[0] - out.u1.values * w2tr[0]
        ones = [np.ones(g.n), np.zeros(g.n)]
        g1 = jet_div(ones, P2t[:2])
        g2 = jet_div(ones, denom[:2])
        phi = (lam_dww - out.u1.values) * g2[0] - g2[1] - 2.0 * g1[0]
        delta = _solve_b_shift(rid0, phi, g.periodic)
        Bjet = jet_integrate(Bvals + delta, integrand)

    num2 = jet_add(Bjet, jet_mul(psi2g, P2t))
    ratio2 = jet_div(num2, denom)  # depth orders
    Fjet = jet_shift(ratio2)
    ratio1 = jet_div(Bjet, P2t)
    E = out.u1 - u.u1
    psi2_new = jet_sub(psi2g, Fjet)
    psi1_new = (
        eig.psi1
        - g.field(ratio1[1])
        - 0.5 * g.field(Fjet[1])
        - 0.5 * (E * eig.psi2 - g.field(Fjet[0]) * (u.u1 + E))
    )
    P2_new = g.field(P2g[0] - ratio2[0])
    return make_jm_eigenpotential(
        out,
        psi1_new,
        g.field(psi2_new[0]),
        P2_new,
        eig.lam,
        psi1_derivs=(),
        psi2_derivs=tuple(g.field(a) for a in psi2_new[1:]),
    )
