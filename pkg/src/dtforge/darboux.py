"""Darboux transformation of the dispersive water wave system.

Everything is phrased in the potential ("w") form: the eigenobject is a pair
(w1, w2) whose x-derivatives form the symmetry eigenfunction.  Working with
the potentials absorbs every antidifferentiation constant of the sigma-form
formulas into the definition of the object, which makes the transformation
deterministic.  A valid potential satisfies, against its state (q, r) and
eigenvalue lam,

  stationary:  -w1_xx + r w1_x + 2 q w2_x + q_x w2 = lam w1_x
               2 w1_x + (w2_x + r w2)_x           = lam w2_x
  time:        2 w1_t = 2 r w1_x + 2 q w2_x - w1_xx
               2 w2_t =   w2_xx + 2 r w2_x + 2 w1_x

plus the two undifferentiated first integrals (fixing the constants)

  r = lam - (w2_x + 2 w1)/w2        q = (w1_x w2 + w1^2)/w2^2

which double as the state-reconstruction identities.

One step of the transformation maps (q, r) and a potential at lam1 to

  q[1] = q - (w1/w2)_x
  r[1] = r + (ln((w1 + w2_x)/w2))_x      [evaluated log-free]

and transports any second potential at lam != lam1 via the bilinear
antiderivative B (compute_B).  B is defined up to a constant; exactly one
value makes the transported potential satisfy the first integrals at the
transformed state, and dt_eigen solves for it by default.

Potentials may carry derivative stacks (see jets module).  The catalogued
seeds supply them analytically and the transport propagates them
algebraically; missing orders fall back to grid differentiation, which is
accurate in relative terms but cannot resolve the order-1 residues that
r[1] extracts from exponentially large w fields.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dww import DwwState, DwwTangent, tangent_norm_rel, time_derivative
from .errors import EigenMismatchError, GridError, SingularDenominatorError
from .grid import EDGE_EXCLUDE, Field, antiderivative, diff, norm_inf
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

# Denominators must be sign-definite and within this dynamic range of their max.
REGULARITY_RANGE = 1e-13
# Default gate on the stationary residual when attaching a potential to a state.
ATTACH_TOL = 1e-4


@dataclass(frozen=True)
class EigenPotential:
    """Eigenobject (w1, w2, lam) attached to a DwwState (not stored here).

    w1_derivs / w2_derivs optionally hold (w_x, w_xx, ...) as Fields; orders
    beyond what is stored are produced by grid differentiation on demand.
    W_stack optionally holds (W, W_x, ...) for W = w1 + w2_x, whose value is
    an exponentially deep cancellation between w1 and w2_x wherever the
    potential grows; carrying it explicitly keeps r[1] clean.
    """

    w1: Field
    w2: Field
    lam: float
    w1_derivs: tuple[Field, ...] = ()
    w2_derivs: tuple[Field, ...] = ()
    W_stack: tuple[Field, ...] = ()

    def __post_init__(self):
        for f in (self.w2, *self.w1_derivs, *self.w2_derivs, *self.W_stack):
            if f.grid != self.w1.grid:
                raise GridError("all potential components must share a grid")

    @property
    def grid(self):
        return self.w1.grid

    def _jet(self, head: Field, derivs: tuple[Field, ...], order: int) -> Jet:
        stack = [head.values, *(d.values for d in derivs)]
        f = derivs[-1] if derivs else head
        while len(stack) < order + 1:
            f = diff(f)
            stack.append(f.values)
        return [np.asarray(a) for a in stack[: order + 1]]

    def jet1(self, order: int) -> Jet:
        return self._jet(self.w1, self.w1_derivs, order)

    def jet2(self, order: int) -> Jet:
        return self._jet(self.w2, self.w2_derivs, order)

    def jetW(self, order: int) -> Jet:
        """Jet of W = w1 + w2_x."""
        if self.W_stack:
            return self._jet(self.W_stack[0], self.W_stack[1:], order)
        return jet_add(self.jet1(order), jet_shift(self.jet2(order + 1)))

    @property
    def stored_order(self) -> int:
        return min(len(self.w1_derivs), len(self.w2_derivs))

    @property
    def sigma1(self) -> Field:
        return self.w1_derivs[0] if self.w1_derivs else diff(self.w1)

    @property
    def sigma2(self) -> Field:
        return self.w2_derivs[0] if self.w2_derivs else diff(self.w2)

    def tangent(self) -> DwwTangent:
        return DwwTangent(self.sigma1, self.sigma2)

    def scaled(self, k: float) -> "EigenPotential":
        return EigenPotential(
            k * self.w1,
            k * self.w2,
            self.lam,
            tuple(k * d for d in self.w1_derivs),
            tuple(k * d for d in self.w2_derivs),
            tuple(k * d for d in self.W_stack),
        )


@dataclass(frozen=True)
class DtStep:
    """Audit record of one transformation step."""

    lam: float
    state_in: DwwState
    state_out: DwwState
    min_abs_w2: float
    min_abs_w1_plus_w2x: float


def _require_regular(values: np.ndarray, what: str) -> float:
    """Sign-definite and not vanishing relative to its own maximum."""
    m = float(np.min(np.abs(values)))
    big = float(np.max(np.abs(values)))
    if np.min(values) < 0.0 < np.max(values) or m < REGULARITY_RANGE * big or big == 0.0:
        raise SingularDenominatorError(
            f"{what}: denominator crosses or approaches zero "
            f"(min |.| = {m:.3e}, max |.| = {big:.3e})"
        )
    return m


# -- residuals and reconstruction ---------------------------------------------

def eigen_stationary_residual(v: DwwState, eig: EigenPotential) -> float:
    """Relative residual of the stationary potential-form system at (v, lam)."""
    q, r = v.q, v.r
    j1 = eig.jet1(2)
    j2 = eig.jet2(2)
    g = eig.grid
    s1, s2 = g.field(j1[1]), g.field(j2[1])
    r1 = -g.field(j1[2]) + r * s1 + 2.0 * q * s2 + diff(q) * eig.w2 - eig.lam * s1
    # (r w2)_x expanded by the product rule: differentiating the raw product
    # would re-introduce scheme error at the product's (large) scale
    r2 = 2.0 * s1 + g.field(j2[2]) + diff(r) * eig.w2 + r * s2 - eig.lam * s2
    return tangent_norm_rel(DwwTangent(r1, r2), DwwTangent(s1, s2))


def eigen_time_residual(
    states: Sequence[DwwState], eigs: Sequence[EigenPotential], dt: float
) -> float:
    """Relative residual of the potential-form time system along a series."""
    if len(states) != len(eigs) or len(states) < 5:
        raise ValueError("need matching series of at least 5 samples")
    w1s = [e.w1 for e in eigs]
    w2s = [e.w2 for e in eigs]
    worst = 0.0
    for j in range(2, len(states) - 2):
        q, r = states[j].q, states[j].r
        e = eigs[j]
        g = e.grid
        j1, j2 = e.jet1(2), e.jet2(2)
        s1, s2 = g.field(j1[1]), g.field(j2[1])
        rhs1 = r * s1 + q * s2 - 0.5 * g.field(j1[2])
        rhs2 = 0.5 * g.field(j2[2]) + r * s2 + s1
        res = DwwTangent(time_derivative(w1s, dt, j) - rhs1, time_derivative(w2s, dt, j) - rhs2)
        worst = max(worst, tangent_norm_rel(res, DwwTangent(rhs1, rhs2)))
    return worst


def reconstruct_r_from_eigen(eig: EigenPotential) -> Field:
    """r = lam - (w2_x + 2 w1)/w2, the first integral solved for r."""
    _require_regular(eig.w2.values, "reconstruct_r w2")
    return eig.lam - (eig.sigma2 + 2.0 * eig.w1) / eig.w2


def reconstruct_q_from_eigen(eig: EigenPotential) -> Field:
    """q = (w1_x w2 + w1^2)/w2^2, the second first integral solved for q."""
    _require_regular(eig.w2.values, "reconstruct_q w2")
    return (eig.sigma1 * eig.w2 + eig.w1 * eig.w1) / (eig.w2 * eig.w2)


def _check_attached(v: DwwState, eig: EigenPotential, attach_tol: float):
    res = eigen_stationary_residual(v, eig)
    if res > attach_tol:
        raise EigenMismatchError(
            f"not an eigenpotential of this state: stationary residual "
            f"{res:.3e} > {attach_tol:.0e}"
        )


# -- one transformation step ---------------------------------------------------

def dt_state(v: DwwState, eig: EigenPotential, attach_tol: float = ATTACH_TOL) -> DwwState:
    """One transformation step applied to the state.

    r[1] uses the expanded logarithmic derivative
    (w1_x + w2_xx)/(w1 + w2_x) - w2_x/w2, never a log: the ratio under the
    log may be negative, its log-derivative is still well defined.
    """
    _check_attached(v, eig, attach_tol)
    g = eig.grid
    j1 = eig.jet1(1)
    j2 = eig.jet2(1)
    _require_regular(j2[0], "dt_state w2")
    W = eig.jetW(1)
    _require_regular(W[0], "dt_state w1 + w2_x")
    ratio = jet_div(j1, j2)  # w1/w2 to first order
    q1 = v.q - g.field(ratio[1])
    r1 = v.r + g.field(W[1] / W[0] - j2[1] / j2[0])
    return DwwState(q1, r1)


def dt_state_sigma_form(v: DwwState, eig: EigenPotential, attach_tol: float = ATTACH_TOL) -> DwwState:
    """Same step computed in the sigma rendering.

    The eigenfunction pair is re-antidifferentiated with constants w(x0) and
    the formulas are evaluated with grid differentiation throughout; exists
    solely to cross-check the two renderings, at the differentiation scheme's
    own accuracy.
    """
    _check_attached(v, eig, attach_tol)
    s1, s2 = eig.sigma1, eig.sigma2
    u1 = antiderivative(s1, float(eig.w1.values[0]))
    u2 = antiderivative(s2, float(eig.w2.values[0]))
    _require_regular(u2.values, "dt_state_sigma_form w2")
    W = u1 + s2
    _require_regular(W.values, "dt_state_sigma_form w1 + w2_x")
    q1 = v.q - diff(u1 / u2)
    r1 = v.r + (diff(u1) + diff(s2)) / W - diff(u2) / u2
    return DwwState(q1, r1)


def compute_B(s: DwwTangent, eig1: EigenPotential, cB: float) -> Field:
    """B = antiderivative of (s1 w2,1 + s2 w1,1) with B(x0) = cB.

    This is the bilinear coupling between the tangent being transported and
    the transforming potential.
    """
    if s.grid != eig1.grid:
        raise GridError("tangent and potential live on different grids")
    return antiderivative(s.s1 * eig1.w2 + s.s2 * eig1.w1, cB)


def _solve_b_shift(rid0: np.ndarray, phi: np.ndarray, periodic: bool) -> float:
    """Least-squares constant delta with rid0 = delta * phi on interior points."""
    sl = slice(None) if periodic else slice(EDGE_EXCLUDE, -EDGE_EXCLUDE)
    a = phi[sl]
    b = rid0[sl]
    denom = float(a @ a)
    if denom == 0.0:
        return 0.0
    return float(a @ b) / denom


def dt_eigen(
    v: DwwState,
    eig1: EigenPotential,
    eig: EigenPotential,
    cB: float | None = None,
    attach_tol: float = ATTACH_TOL,
) -> EigenPotential:
    """Transport a second potential through the step generated by eig1.

      w1[1] = w1 - B / w2,1
      w2[1] = w2 - (B + w2_x w2,1) / (w1,1 + w2,1x)

    B is defined up to a constant.  With cB=None (default) the constant is
    solved for so that the transported potential satisfies the r first
    integral at the transformed state; that residual is an affine function of
    the constant, so the solve is exact up to quadrature error.  Passing an
    explicit cB anchors B(x0) = cB instead and skips the normalization.

    Derivative stacks are propagated algebraically: the output carries one
    order less than the inputs store.
    """
    if eig.lam == eig1.lam:
        raise SingularDenominatorError(
            f"degenerate transformation unsupported (lam = lam1 = {eig.lam})"
        )
    _check_attached(v, eig1, attach_tol)
    _check_attached(v, eig, attach_tol)
    g = eig.grid

    # transported jets need one spare order on the input stacks
    depth = max(min(eig.stored_order, eig1.stored_order) - 1, 1)
    j1t, j2t = eig1.jet1(depth), eig1.jet2(depth + 1)
    j1g, j2g = eig.jet1(depth), eig.jet2(depth + 1)
    Wt = eig1.jetW(depth)
    Wg = eig.jetW(depth)

    _require_regular(j2t[0], "dt_eigen w2,1")
    _require_regular(Wt[0], "dt_eigen w1,1 + w2,1x")

    # B with its exact derivative stack (the integrand and its derivatives)
    integrand = jet_add(jet_mul(jet_shift(j1g), j2t), jet_mul(jet_shift(j2g), j1t))
    B0 = antiderivative(g.field(integrand[0]), 0.0 if cB is None else cB).values
    # num2 = B + sigma2 w2,1 is integrated separately from its fused,
    # cancellation-free integrand  W_x w2,1 + sigma2 Wt  (W of the potential
    # being transported); same additive constant as B by construction.
    integrand2 = jet_add(jet_mul(jet_shift(Wg), j2t), jet_mul(jet_shift(j2g), Wt))
    c2 = B0[0] + j2g[1][0] * j2t[0][0]
    num2_0 = antiderivative(g.field(integrand2[0]), c2).values

    def assemble(delta: float):
        Bjet = jet_integrate(B0 + delta, integrand)
        num2 = jet_integrate(num2_0 + delta, integrand2)
        w1t = jet_sub(j1g, jet_div(Bjet, j2t))
        w2t = jet_sub(j2g, jet_div(num2, Wt))
        return w1t, w2t

    delta = 0.0
    w1t_jet, w2t_jet = assemble(delta)

    if cB is None:
        out = dt_state(v, eig1, attach_tol)
        # r first integral of the output, affine in a constant shift of B:
        # rid(delta) = rid0 - delta * phi
        rid0 = (
            eig.lam * w2t_jet[0] - w2t_jet[1] - 2.0 * w1t_jet[0] - out.r.values * w2t_jet[0]
        )
        ones = [np.ones(g.n), np.zeros(g.n)]
        g1 = jet_div(ones, j2t[:2])
        g2 = jet_div(ones, Wt[:2])
        phi = (eig.lam - out.r.values) * g2[0] - g2[1] - 2.0 * g1[0]
        delta = _solve_b_shift(rid0, phi, g.periodic)
        w1t_jet, w2t_jet = assemble(delta)

    Wout = jet_add(w1t_jet, jet_shift(w2t_jet))
    return EigenPotential(
        g.field(w1t_jet[0]),
        g.field(w2t_jet[0]),
        eig.lam,
        tuple(g.field(a) for a in w1t_jet[1:]),
        tuple(g.field(a) for a in w2t_jet[1:]),
        tuple(g.field(a) for a in Wout),
    )


def dt_iterate(
    v0: DwwState,
    eigs: Sequence[EigenPotential],
    cB_list: Sequence[float | None] | None = None,
    attach_tol: float = ATTACH_TOL,
) -> tuple[DwwState, list[DtStep]]:
    """Fold dt_state/dt_eigen over an ordered list of potentials.

    Transforms with eigs[0], transports the remaining potentials forward,
    recurses.  Returns the final state and one audit record per step.
    """
    lams = [e.lam for e in eigs]
    if len(set(lams)) != len(lams):
        raise SingularDenominatorError(f"eigenvalues must be pairwise distinct, got {lams}")
    if cB_list is not None and len(cB_list) != len(eigs):
        raise ValueError("cB_list must match eigs in length")
    v = v0
    pending = list(eigs)
    consts: list[float | None] = list(cB_list) if cB_list is not None else [None] * len(eigs)
    trail: list[DtStep] = []
    for step in range(len(eigs)):
        lead = pending[0]
        try:
            out = dt_state(v, lead, attach_tol)
            pending = [
                dt_eigen(v, lead, e, cB=c, attach_tol=attach_tol)
                for e, c in zip(pending[1:], consts[1:])
            ]
        except (SingularDenominatorError, EigenMismatchError) as exc:
            raise SingularDenominatorError(f"chain aborted at step {step}: {exc}") from exc
        trail.append(
            DtStep(
                lam=lead.lam,
                state_in=v,
                state_out=out,
                min_abs_w2=float(np.min(np.abs(lead.w2.values))),
                min_abs_w1_plus_w2x=float(np.min(np.abs(lead.jetW(0)[0]))),
            )
        )
        consts = consts[1:]
        v = out
    return v, trail
