"""Independent method-of-lines integrator used as a cross-check oracle, plus
an exact Burgers solver for the q = 0 reduction of the water-wave system.

The integrator is a soft oracle only: the q-equation carries the
anti-diffusive term -(1/2) q_xx, so forward integration is conditionally
meaningful at best (short horizons, filtered spectrum, smooth data) and must
fail loudly otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dww import DwwState
from .errors import BlowupError, GridError, PeriodicMeanError
from .grid import Field, Grid, diff
from .jm import JmState


def _spectral_dx(grid: Grid):
    k = 2.0 * np.pi * np.fft.rfftfreq(grid.n, d=grid.h)
    ik = 1j * k

    def dx(v: np.ndarray) -> np.ndarray:
        vh = np.fft.rfft(v)
        vh *= ik
        vh[-1] = 0.0
        return np.fft.irfft(vh, n=grid.n)

    return dx


def _mode_filter(grid: Grid, keep: float):
    nmodes = grid.n // 2 + 1
    cut = int(np.floor(keep * (grid.n // 2)))
    mask = np.zeros(nmodes)
    mask[: cut + 1] = 1.0

    def apply(v: np.ndarray) -> np.ndarray:
        return np.fft.irfft(np.fft.rfft(v) * mask, n=grid.n)

    return apply


def _dww_rhs_arrays(dx) -> Callable:
    def rhs(a: np.ndarray, b: np.ndarray):
        q, r = a, b
        k1 = 0.5 * dx(2.0 * q * r - dx(q))
        k2 = 0.5 * dx(dx(r) + r * r + 2.0 * q)
        return k1, k2

    return rhs


def _jm_rhs_arrays(dx) -> Callable:
    def rhs(a: np.ndarray, b: np.ndarray):
        u0, u1 = a, b
        h1 = 0.25 * dx(dx(dx(u1))) + 0.5 * u0 * dx(u1) + 0.5 * dx(u0 * u1)
        h2 = dx(u0) + 1.5 * u1 * dx(u1)
        return h1, h2

    return rhs


@dataclass(frozen=True)
class EvolveResult:
    times: list[float]
    states: list  # DwwState or JmState


def integrate(
    system: str,
    initial,
    t_end: float,
    dt: float,
    filter_frac: float = 2.0 / 3.0,
    store_every: int = 1,
) -> EvolveResult:
    """Classical 4-stage Runge-Kutta on the spectrally semidiscretized flow.

    A sharp cutoff keeping the lowest `filter_frac` of modes is applied to the
    state after every step (and to the initial state).  Non-finite values
    abort with the failing step index.
    """
    grid = initial.grid
    if not grid.periodic:
        raise GridError("integrate requires a periodic spectral grid")
    if not 0.0 < filter_frac <= 1.0:
        raise ValueError("filter_frac must lie in (0, 1]")
    if dt <= 0.0 or t_end < 0.0:
        raise ValueError("need dt > 0 and t_end >= 0")
    dx = _spectral_dx(grid)
    filt = _mode_filter(grid, filter_frac)
    if system == "dww":
        rhs = _dww_rhs_arrays(dx)
        pack = lambda a, b: DwwState(grid.field(a), grid.field(b))
        a, b = initial.q.values.copy(), initial.r.values.copy()
    elif system == "jm":
        rhs = _jm_rhs_arrays(dx)
        pack = lambda a, b: JmState(grid.field(a), grid.field(b))
        a, b = initial.u0.values.copy(), initial.u1.values.copy()
    else:
        raise ValueError(f"unknown system {system!r}")

    nsteps = int(round(t_end / dt))
    if abs(nsteps * dt - t_end) > 1e-9 * max(t_end, dt):
        raise ValueError("t_end must be an integer number of steps")
    a, b = filt(a), filt(b)
    times = [0.0]
    states = [pack(a, b)]
    for step in range(1, nsteps + 1):
        k1a, k1b = rhs(a, b)
        k2a, k2b = rhs(a + 0.5 * dt * k1a, b + 0.5 * dt * k1b)
        k3a, k3b = rhs(a + 0.5 * dt * k2a, b + 0.5 * dt * k2b)
        k4a, k4b = rhs(a + dt * k3a, b + dt * k3b)
        a = a + (dt / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        b = b + (dt / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        a, b = filt(a), filt(b)
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise BlowupError(step, step * dt)
        if step % store_every == 0 or step == nsteps:
            times.append(step * dt)
            states.append(pack(a, b))
    return EvolveResult(times, states)


def burgers_cole_hopf(r0: Field, t: float) -> Field:
    """Exact solution at time t of  r_t = (1/2) r_xx + r r_x  from r(x,0) = r0.

    Uses the logarithmic substitution r = (ln phi)_x, under which phi obeys
    the heat equation phi_t = (1/2) phi_xx, solved exactly mode by mode.
    Requires a periodic grid and a mean-free r0 (otherwise phi is not
    periodic), and a positive transformed variable.
    """
    grid = r0.grid
    if not grid.periodic:
        raise GridError("burgers_cole_hopf requires a periodic grid")
    mean = float(np.mean(r0.values))
    if abs(mean) > 1e-10:
        raise PeriodicMeanError(f"r0 must be mean-free for a periodic solution (mean {mean:.3e})")
    F = np.fft.rfft(r0.values)
    k = 2.0 * np.pi * np.fft.rfftfreq(grid.n, d=grid.h)
    Fh = np.zeros_like(F)
    Fh[1:] = F[1:] / (1j * k[1:])
    Fh[-1] = 0.0
    logphi0 = np.fft.irfft(Fh, n=grid.n)
    phi0 = np.exp(logphi0 - np.max(logphi0))
    if np.min(phi0) <= 0.0:
        raise ValueError("transformed variable must stay positive")
    ph = np.fft.rfft(phi0)
    ph *= np.exp(-0.5 * k * k * t)
    phi = np.fft.irfft(ph, n=grid.n)
    if np.min(phi) <= 0.0:
        raise ValueError("transformed variable lost positivity during evolution")
    return diff(grid.field(phi)) / grid.field(phi)
