"""Discrete 1-D calculus: uniform grids, sampled fields, differentiation,
antidifferentiation and max norms.

Two differentiation backends sit behind one interface:

* periodic grids use FFT (spectral) differentiation,
* non-periodic grids use 4th-order central differences with 4th-order
  one-sided closures at the boundary.

``antiderivative`` is spectral (division by the wavenumber) on periodic
grids and a cumulative 9-point interpolatory quadrature on non-periodic
ones.  The quadrature is 8th order, deliberately above diff's order:
transformation formulas divide antiderivatives of exponentially large
fields and need the extra accuracy.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import solve_banded

from .errors import GridError, PeriodicMeanError

# Number of points dropped at each end of a non-periodic grid when residual
# norms are evaluated (boundary stencils would otherwise dominate).
EDGE_EXCLUDE = 4


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D grid on [x0, x1].

    Periodic grids treat x1 as identified with x0 and omit it from the point
    set, so h = (x1-x0)/n; non-periodic grids include both endpoints with
    h = (x1-x0)/(n-1).
    """

    x0: float
    x1: float
    n: int
    periodic: bool = False

    def __post_init__(self):
        if not self.x1 > self.x0:
            raise GridError(f"x1 must exceed x0 (got {self.x0}, {self.x1})")
        if self.n < 16:
            raise GridError(f"n must be at least 16 (got {self.n})")
        if self.periodic and self.n % 2:
            raise GridError(f"periodic grids need even n (got {self.n})")

    @property
    def h(self) -> float:
        span = self.x1 - self.x0
        return span / self.n if self.periodic else span / (self.n - 1)

    @property
    def length(self) -> float:
        return self.x1 - self.x0

    @property
    def x(self) -> np.ndarray:
        return _grid_points(self.x0, self.x1, self.n, self.periodic)

    def field(self, values) -> "Field":
        return Field(self, np.asarray(values, dtype=float))

    def field_from(self, fn) -> "Field":
        return Field(self, np.asarray(fn(self.x), dtype=float))

    def zeros(self) -> "Field":
        return Field(self, np.zeros(self.n))

    def constant(self, value: float) -> "Field":
        return Field(self, np.full(self.n, float(value)))


@lru_cache(maxsize=64)
def _grid_points(x0: float, x1: float, n: int, periodic: bool) -> np.ndarray:
    x = np.linspace(x0, x1, n, endpoint=not periodic)
    x.setflags(write=False)
    return x


def make_grid(x0: float, x1: float, n: int, periodic: bool = False) -> Grid:
    """Validated Grid constructor."""
    return Grid(float(x0), float(x1), int(n), bool(periodic))


class Field:
    """Real samples of a function of x on one Grid at a fixed time.

    Immutable value semantics; arithmetic requires identical grids and every
    constructor rejects non-finite values.
    """

    __slots__ = ("grid", "values")

    def __init__(self, grid: Grid, values: np.ndarray):
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n,):
            raise GridError(f"expected {grid.n} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise GridError("field values must be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    def _peer(self, other) -> np.ndarray:
        if isinstance(other, Field):
            if other.grid != self.grid:
                raise GridError("fields live on different grids")
            return other.values
        return np.asarray(other, dtype=float)

    def __add__(self, other):
        return Field(self.grid, self.values + self._peer(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Field(self.grid, self.values - self._peer(other))

    def __rsub__(self, other):
        return Field(self.grid, self._peer(other) - self.values)

    def __mul__(self, other):
        return Field(self.grid, self.values * self._peer(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Field(self.grid, self.values / self._peer(other))

    def __rtruediv__(self, other):
        return Field(self.grid, self._peer(other) / self.values)

    def __neg__(self):
        return Field(self.grid, -self.values)

    def __repr__(self):
        return f"Field(n={self.grid.n}, range=[{self.values.min():.3g}, {self.values.max():.3g}])"


def _check_same_grid(f: Field, g: Field):
    if f.grid != g.grid:
        raise GridError("fields live on different grids")


# -- differentiation ---------------------------------------------------------

def _wavenumbers(grid: Grid) -> np.ndarray:
    return 2.0 * np.pi * np.fft.rfftfreq(grid.n, d=grid.h)


def _diff_periodic(v: np.ndarray, grid: Grid) -> np.ndarray:
    fh = np.fft.rfft(v)
    dh = 1j * _wavenumbers(grid) * fh
    dh[-1] = 0.0  # Nyquist derivative not representable for real data
    return np.fft.irfft(dh, n=grid.n)


def _diff_open(v: np.ndarray, h: float) -> np.ndarray:
    out = np.empty_like(v)
    out[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
    out[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h)
    out[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h)
    out[-2] = (3.0 * v[-1] + 10.0 * v[-2] - 18.0 * v[-3] + 6.0 * v[-4] - v[-5]) / (12.0 * h)
    out[-1] = (25.0 * v[-1] - 48.0 * v[-2] + 36.0 * v[-3] - 16.0 * v[-4] + 3.0 * v[-5]) / (12.0 * h)
    return out


def diff(f: Field) -> Field:
    """d/dx of a field: spectral when periodic, 4th-order FD otherwise."""
    if f.grid.periodic:
        return Field(f.grid, _diff_periodic(f.values, f.grid))
    return Field(f.grid, _diff_open(f.values, f.grid.h))


def diff2(f: Field) -> Field:
    """Second derivative by composing diff."""
    return diff(diff(f))


# -- antidifferentiation -----------------------------------------------------

_QUAD_STENCIL = 9  # 9-point interpolatory quadrature: 8th-order antiderivative


def _solve_rational(A: list, rhs: list) -> list:
    """Gaussian elimination over fractions (tiny systems, exact weights)."""
    m = len(rhs)
    for col in range(m):
        piv = max(range(col, m), key=lambda r: abs(A[r][col]))
        A[col], A[piv] = A[piv], A[col]
        rhs[col], rhs[piv] = rhs[piv], rhs[col]
        inv = 1 / A[col][col]
        A[col] = [a * inv for a in A[col]]
        rhs[col] = rhs[col] * inv
        for r in range(m):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
                rhs[r] = rhs[r] - f * rhs[col]
    return rhs


@lru_cache(maxsize=4)
def _panel_weight_table(width: int):
    """Weights integrating the width-point interpolant over [at, at+1].

    Row `at` gives w with  integral = h * sum_j w[j] f[window_start + j]
    for the unit-interval panel starting at offset `at` inside the window.
    Exact rational moment solve: sum_j w_j j^p = ((at+1)^(p+1) - at^(p+1))/(p+1).
    """
    from fractions import Fraction

    rows = []
    for at in range(width - 1):
        A = [[Fraction(j) ** p for j in range(width)] for p in range(width)]
        rhs = [
            (Fraction(at + 1) ** (p + 1) - Fraction(at) ** (p + 1)) / (p + 1)
            for p in range(width)
        ]
        rows.append(np.array([float(w) for w in _solve_rational(A, rhs)]))
    return rows


def _cumulative_quadrature(v: np.ndarray, h: float) -> np.ndarray:
    """Running integral by per-panel interpolatory quadrature (order h^8)."""
    n = v.size
    width = _QUAD_STENCIL
    half = width // 2
    rows = _panel_weight_table(width)
    increments = np.zeros(n - 1)
    # interior panels share one centered window position; vectorize them
    lo = half - 1  # panels 0..lo-1 need left-clamped windows
    hi = n - 1 - (width - half)  # panels >= hi need right-clamped windows
    w_mid = rows[half - 1]
    if hi > lo:
        windows = np.lib.stride_tricks.sliding_window_view(v, width)
        starts = np.arange(lo, hi) - (half - 1)
        increments[lo:hi] = windows[starts] @ w_mid
    for i in range(0, min(lo, n - 1)):
        increments[i] = rows[i] @ v[0:width]
    for i in range(max(hi, 0), n - 1):
        start = n - width
        increments[i] = rows[i - start] @ v[start : start + width]
    F = np.empty(n)
    F[0] = 0.0
    np.cumsum(increments, out=F[1:])
    return h * F


# Absolute mean threshold above which a periodic field has no antiderivative.
PERIODIC_MEAN_TOL = 1e-12


def antiderivative(f: Field, c0: float, remove_mean: bool = False) -> Field:
    """F with diff(F) = f and F(x0) = c0.

    The integration constant is always explicit: transformation formulas are
    sensitive to it, so callers must choose.  Periodic fields must be
    mean-free (or pass remove_mean=True) since x -> x+L periodicity admits no
    antiderivative otherwise.
    """
    g = f.grid
    if g.periodic:
        fh = np.fft.rfft(f.values)
        mean = fh[0].real / g.n
        if abs(mean) > PERIODIC_MEAN_TOL and not remove_mean:
            raise PeriodicMeanError(
                f"no periodic antiderivative: field mean {mean:.3e} exceeds "
                f"{PERIODIC_MEAN_TOL:.0e} (pass remove_mean=True to project it out)"
            )
        k = _wavenumbers(g)
        Fh = np.zeros_like(fh)
        Fh[1:] = fh[1:] / (1j * k[1:])
        Fh[-1] = 0.0
        F = np.fft.irfft(Fh, n=g.n)
        return Field(g, F + (c0 - F[0]))
    if g.n < _QUAD_STENCIL:
        raise GridError("grid too small for the quadrature stencil")
    return Field(g, c0 + _cumulative_quadrature(f.values, g.h))


# -- norms -------------------------------------------------------------------

def norm_inf(f: Field, exclude_edges: int = 0) -> float:
    """Max absolute value, optionally dropping boundary points (non-periodic)."""
    v = f.values
    if exclude_edges and not f.grid.periodic:
        v = v[exclude_edges:-exclude_edges]
    return float(np.max(np.abs(v)))


def norm_rel(f: Field, ref: Field, exclude_edges: int = 0) -> float:
    """norm_inf(f) divided by max(norm_inf(ref), 1)."""
    _check_same_grid(f, ref)
    return norm_inf(f, exclude_edges) / max(norm_inf(ref, exclude_edges), 1.0)
