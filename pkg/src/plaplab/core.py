"""Radial grids, weighted quadrature, and shared problem data.

Everything is posed on the unit ball and reduced to radial form: for a
radial integrand h, integrals are reported as ``int_0^1 h(r) r^(n-1) dr``.
The angular factor |S^(n-1)| is dropped consistently (norms, energies,
quadratic forms), which leaves every identity, inequality, and eigenvalue
sign unchanged.

Grids are uniform in log r on [r_min, 1]; the interesting behavior of the
solutions lives at r -> 0 and log spacing resolves power-law profiles with
uniform relative accuracy.  The quadrature rule integrates the piecewise
cubic (in log r) interpolant of the integrand against the exact weight
r^n d(log r), so a constant integrand reproduces 1/n to machine precision
and smooth integrands converge at fourth order.  A head term covers
[0, r_min] assuming the integrand is constant there; the induced error is
O(r_min^n * h(r_min)).
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass, field

from typing import Callable, Union

import numpy as np
from numpy.polynomial.legendre import leggauss


class ParameterError(ValueError):
    """An argument violates a documented precondition."""


class EvaluationError(ValueError):
    """A nonlinearity or profile was evaluated outside its admissible range."""


class ConsistencyError(RuntimeError):
    """An internal invariant failed; indicates a bug, not a math outcome."""


def signed_power(x, q):
    """sign(x) * |x|^q, the odd power map used by the flux variable."""
    return np.sign(x) * np.abs(x) ** q


# ---------------------------------------------------------------------------
# nonlinearities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Exponential:
    """g(u) = scale * e^u."""

    scale: float = 1.0

    def value(self, u):
        return self.scale * np.exp(u)

    def derivative(self, u):
        return self.scale * np.exp(u)

    def antiderivative(self, u):
        return self.scale * np.exp(u)

    def with_scale(self, factor: float) -> "Exponential":
        return Exponential(self.scale * factor)

    def scalar_value(self) -> Callable[[float], float]:
        s = self.scale
        return lambda u: s * math.exp(min(u, 700.0))

    @property
    def increasing(self) -> bool:
        return self.scale > 0

    def positive_at_zero(self) -> bool:
        return self.scale > 0


@dataclass(frozen=True)
class Power:
    """g(u) = scale * (1 + u)^m, defined for u > -1."""

    m: float
    scale: float = 1.0

    def value(self, u):
        return self.scale * (1.0 + u) ** self.m

    def derivative(self, u):
        return self.scale * self.m * (1.0 + u) ** (self.m - 1.0)

    def antiderivative(self, u):
        if self.m == -1.0:
            return self.scale * np.log(1.0 + u)
        return self.scale * (1.0 + u) ** (self.m + 1.0) / (self.m + 1.0)

    def with_scale(self, factor: float) -> "Power":
        return Power(self.m, self.scale * factor)

    def scalar_value(self) -> Callable[[float], float]:
        s, m = self.scale, self.m
        return lambda u: s * (1.0 + u) ** m

    @property
    def increasing(self) -> bool:
        return self.scale > 0 and self.m > 0

    def positive_at_zero(self) -> bool:
        return self.scale > 0


def _hermite_eval(t, knots, values, slopes, want_derivative=False):
    t = np.asarray(t, dtype=float)
    if np.any(t < knots[0] - 1e-12) or np.any(t > knots[-1] + 1e-12):
        raise EvaluationError(
            f"tabulated nonlinearity evaluated outside [{knots[0]}, {knots[-1]}]"
        )
    idx = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, len(knots) - 2)
    h = knots[idx + 1] - knots[idx]
    s = (t - knots[idx]) / h
    y0, y1 = values[idx], values[idx + 1]
    d0, d1 = slopes[idx], slopes[idx + 1]
    if want_derivative:
        dh00 = 6 * s * s - 6 * s
        dh10 = 3 * s * s - 4 * s + 1
        dh01 = -dh00
        dh11 = 3 * s * s - 2 * s
        return (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    return h00 * y0 + h01 * y1 + h * (h10 * d0 + h11 * d1)


@dataclass(frozen=True)
class Tabulated:
    """g given at nodes (t, g(t), g'(t)); cubic Hermite interpolation between
    nodes, hard error outside the table.

    For monotone data the supplied slopes are limited into the
    Fritsch-Carlson region, so the interpolant preserves monotonicity (the
    minimal-solution iteration depends on it)."""

    t: tuple
    g: tuple
    gp: tuple
    scale: float = 1.0

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        if t.ndim != 1 or len(t) < 2:
            raise ParameterError("tabulated nonlinearity needs at least two nodes")
        if not np.all(np.diff(t) > 0):
            raise ParameterError("tabulated nodes must be strictly increasing in t")
        if len(self.g) != len(t) or len(self.gp) != len(t):
            raise ParameterError("tabulated arrays must have equal length")
        object.__setattr__(self, "t", tuple(float(x) for x in t))
        object.__setattr__(self, "g", tuple(float(x) for x in self.g))
        object.__setattr__(self, "gp", tuple(float(x) for x in self.gp))

    def _arrays(self):
        t = np.asarray(self.t)
        g = np.asarray(self.g)
        gp = np.asarray(self.gp, dtype=float).copy()
        secants = np.diff(g) / np.diff(t)
        if np.all(secants >= 0) and np.all(gp >= 0):
            cap = 3.0 * np.minimum(
                np.concatenate([secants[:1], secants]),
                np.concatenate([secants, secants[-1:]]),
            )
            gp = np.minimum(gp, cap)
        return t, g, gp

    def value(self, u):
        t, g, gp = self._arrays()
        return self.scale * _hermite_eval(u, t, g, gp)

    def derivative(self, u):
        t, g, gp = self._arrays()
        return self.scale * _hermite_eval(u, t, g, gp, want_derivative=True)

    def antiderivative(self, u):
        raise EvaluationError(
            "no closed-form antiderivative for a tabulated nonlinearity; "
            "supply G values explicitly"
        )

    def with_scale(self, factor: float) -> "Tabulated":
        return Tabulated(self.t, self.g, self.gp, self.scale * factor)

    def scalar_value(self) -> Callable[[float], float]:
        return lambda u: float(self.value(u))

    @property
    def increasing(self) -> bool:
        g = np.asarray(self.g)
        gp = np.asarray(self.gp)
        mono = np.all(np.diff(g) >= 0) and np.all(gp >= 0)
        return bool(mono if self.scale > 0 else False)

    def positive_at_zero(self) -> bool:
        if not (self.t[0] <= 0.0 <= self.t[-1]):
            return False
        return float(self.value(0.0)) > 0


Nonlinearity = Union[Exponential, Power, Tabulated]


@dataclass(frozen=True)
class ProblemSpec:
    """Dimension n >= 1 (real values allowed), exponent p > 1, reaction term."""

    n: float
    p: float
    nonlinearity: Nonlinearity

    def __post_init__(self):
        if not (self.p > 1.0):
            raise ParameterError(f"p must exceed 1, got {self.p}")
        if not (self.n >= 1.0):
            raise ParameterError(f"n must be at least 1, got {self.n}")

    @property
    def non_integer_dimension(self) -> bool:
        return abs(self.n - round(self.n)) > 1e-12


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialGrid:
    """Log-uniform nodes on [r_min, 1]; t = log r is the working variable."""

    r_min: float
    t: np.ndarray
    r: np.ndarray
    dt: float

    @property
    def size(self) -> int:
        return len(self.r)


def make_grid(r_min: float, count: int) -> RadialGrid:
    if not (0.0 < r_min < 1.0):
        raise ParameterError(f"r_min must lie in (0, 1), got {r_min}")
    if count < 16:
        raise ParameterError(f"need at least 16 nodes, got {count}")
    t = np.linspace(math.log(r_min), 0.0, count)
    r = np.exp(t)
    r[0] = r_min
    r[-1] = 1.0
    dt = (t[-1] - t[0]) / (count - 1)
    return RadialGrid(r_min=r_min, t=t, r=r, dt=dt)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = leggauss(6)


def _exp_moments(offsets, n, dt):
    """ints over [0, dt] of L_j(s) e^(n s) ds for the Lagrange basis on the
    given node offsets.  Gauss panels keep n*dt large cases accurate."""
    m = len(offsets)
    panels = 1 + int(abs(n) * dt)
    out = np.zeros(m)
    for k in range(panels):
        a = dt * k / panels
        b = dt * (k + 1) / panels
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        s = mid + half * _GL_NODES
        w = half * _GL_WEIGHTS * np.exp(n * s)
        for j in range(m):
            lj = np.ones_like(s)
            for i in range(m):
                if i != j:
                    lj *= (s - offsets[i]) / (offsets[j] - offsets[i])
            out[j] += np.dot(w, lj)
    return out


@dataclass(frozen=True)
class QuadratureRule:
    """Weights for int_0^1 h(r) r^(n-1) dr on a log-uniform grid.

    ``weights`` includes the head term h(r_min) * r_min^n / n on node 0.
    Cell-level integrals back the cumulative forms used by the solvers.
    """

    grid: RadialGrid
    n: float
    weights: np.ndarray
    head: float
    _cw_first: np.ndarray
    _cw_interior: np.ndarray
    _cw_last: np.ndarray
    _rn_cells: np.ndarray
    _stencil: int = 4

    def _check(self, h: np.ndarray) -> np.ndarray:
        h = np.asarray(h, dtype=float)
        if h.shape != self.grid.r.shape:
            raise ParameterError("integrand values must match the grid")
        if not np.all(np.isfinite(h)):
            raise ParameterError("integrand contains non-finite values")
        return h

    def integrate(self, h) -> float:
        return float(np.dot(self.weights, self._check(h)))

    def cell_integrals(self, h) -> np.ndarray:
        h = self._check(h)
        m = len(h)
        cells = np.empty(m - 1)
        if self._stencil == 2:
            windows = np.lib.stride_tricks.sliding_window_view(h, 2)
            return (windows @ self._cw_interior) * self._rn_cells
        windows = np.lib.stride_tricks.sliding_window_view(h, 4)
        cells[1:-1] = (windows @ self._cw_interior) * self._rn_cells[1:-1]
        cells[0] = (h[:4] @ self._cw_first) * self._rn_cells[0]
        cells[-1] = (h[-4:] @ self._cw_last) * self._rn_cells[-1]
        return cells

    def cumulative_from_zero(self, h) -> np.ndarray:
        """F with F[j] ~ int_0^{r_j} h r^(n-1) dr, head term included."""
        h = self._check(h)
        out = np.empty(len(h))
        out[0] = self.head * h[0]
        np.cumsum(self.cell_integrals(h), out=out[1:])
        out[1:] += out[0]
        return out

    def cumulative_to_one(self, h) -> np.ndarray:
        """G with G[j] = int_{r_j}^1 h r^(n-1) dr; G[-1] = 0 exactly."""
        h = self._check(h)
        cells = self.cell_integrals(h)
        out = np.zeros(len(h))
        out[:-1] = np.cumsum(cells[::-1])[::-1]
        return out


def make_rule(grid: RadialGrid, n: float) -> QuadratureRule:
    """Piecewise-cubic product rule; falls back to the piecewise-linear one
    (positive by construction) on coarse grids where n * dt is large enough
    to push outer-stencil weights negative."""
    if n < 1.0:
        raise ParameterError(f"dimension must be at least 1, got {n}")
    dt = grid.dt
    m = grid.size
    rn_cells = np.exp(n * grid.t[:-1])
    head = math.exp(n * grid.t[0]) / n

    for stencil in (4, 2):
        if stencil == 4:
            cw_first = _exp_moments(np.array([0.0, 1.0, 2.0, 3.0]) * dt, n, dt)
            cw_interior = _exp_moments(np.array([-1.0, 0.0, 1.0, 2.0]) * dt, n, dt)
            cw_last = _exp_moments(np.array([-2.0, -1.0, 0.0, 1.0]) * dt, n, dt)
            weights = np.zeros(m)
            weights[:4] += cw_first * rn_cells[0]
            for j in range(4):
                weights[j : j + m - 3] += cw_interior[j] * rn_cells[1:-1]
            weights[-4:] += cw_last * rn_cells[-1]
        else:
            cw_first = cw_interior = cw_last = _exp_moments(
                np.array([0.0, 1.0]) * dt, n, dt
            )
            weights = np.zeros(m)
            for j in range(2):
                weights[j : j + m - 1] += cw_interior[j] * rn_cells
        weights[0] += head
        if np.all(weights > 0):
            return QuadratureRule(
                grid=grid,
                n=n,
                weights=weights,
                head=head,
                _cw_first=cw_first,
                _cw_interior=cw_interior,
                _cw_last=cw_last,
                _rn_cells=rn_cells,
                _stencil=stencil,
            )
    raise ConsistencyError("quadrature produced non-positive weights")


def integrate_radial(h, rule: QuadratureRule) -> float:
    return rule.integrate(h)


# ---------------------------------------------------------------------------
# finite differences on the log-uniform grid
# ---------------------------------------------------------------------------


def _fornberg_weights(x0: float, nodes: np.ndarray, order: int) -> np.ndarray:
    """Finite-difference weights for d^order/dx^order at x0 on given nodes."""
    n = len(nodes)
    c = np.zeros((n, order + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = nodes[0] - x0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = nodes[i] - x0
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            for k in range(mn, 0, -1):
                c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
            c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def derivative_log_uniform(values, dt: float) -> np.ndarray:
    """Sixth-order d/dt of nodal values on a uniform t-grid (7-point
    stencils, one-sided at the edges)."""
    v = np.asarray(values, dtype=float)
    m = len(v)
    if m < 7:
        raise ParameterError("need at least 7 nodes for the derivative stencil")
    nodes = np.arange(7.0)
    out = np.empty(m)
    center = _fornberg_weights(3.0, nodes, 1)
    windows = np.lib.stride_tricks.sliding_window_view(v, 7)
    out[3 : m - 3] = windows @ center
    for i in range(3):
        out[i] = np.dot(_fornberg_weights(float(i), nodes, 1), v[:7])
        out[m - 1 - i] = np.dot(_fornberg_weights(6.0 - i, nodes, 1), v[-7:])
    return out / dt


def _cubic_interp_log(tq, t, values, dt):
    """Cubic Lagrange interpolation of nodal values at query points tq."""
    tq = np.asarray(tq, dtype=float)
    m = len(t)
    pos = (tq - t[0]) / dt
    if np.any(pos < -1e-9) or np.any(pos > m - 1 + 1e-9):
        raise EvaluationError("profile evaluated outside its grid")
    base = np.clip(np.floor(pos).astype(int) - 1, 0, m - 4)
    out = np.zeros_like(tq)
    for j in range(4):
        lj = np.ones_like(tq)
        for i in range(4):
            if i != j:
                lj *= (tq - t[base + i]) / (t[base + j] - t[base + i])
        out += lj * values[base + j]
    return out


# ---------------------------------------------------------------------------
# radial profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialProfile:
    """Discrete radial solution: values u, flux w = r^(n-1)|u_r|^(p-2) u_r,
    and the radial derivative derived from w.

    Solutions of interest are radially decreasing, so u is nonincreasing and
    w <= 0; both are validated (small slack for roundoff) unless check=False.
    """

    grid: RadialGrid
    n: float
    p: float
    u: np.ndarray
    w: np.ndarray
    u_r: np.ndarray = field(init=False)
    check: InitVar[bool] = True

    def __post_init__(self, check):
        u = np.asarray(self.u, dtype=float)
        w = np.asarray(self.w, dtype=float)
        if u.shape != self.grid.r.shape or w.shape != self.grid.r.shape:
            raise ParameterError("profile arrays must match the grid")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(w))):
            raise ParameterError("profile contains non-finite values")
        if check:
            slack = 1e-10 * (1.0 + float(np.max(np.abs(u))))
            if np.any(np.diff(u) > slack):
                raise ParameterError("u must be nonincreasing in r")
            if np.any(w > 1e-10 * (1.0 + float(np.max(np.abs(w))))):
                raise ParameterError("flux w must be nonpositive")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "w", w)
        # log-space evaluation keeps r^(1-n) from overflowing for large n
        q = 1.0 / (self.p - 1.0)
        with np.errstate(divide="ignore"):
            mag = q * (np.log(np.maximum(-w, 0.0)) + (1.0 - self.n) * self.grid.t)
        u_r = -np.exp(mag)
        object.__setattr__(self, "u_r", u_r)

    def rule(self) -> QuadratureRule:
        return make_rule(self.grid, self.n)

    def u_at(self, r):
        return _cubic_interp_log(np.log(r), self.grid.t, self.u, self.grid.dt)

    def u_r_at(self, r):
        return _cubic_interp_log(np.log(r), self.grid.t, self.u_r, self.grid.dt)

    def u_rr_at(self, r):
        durdt = derivative_log_uniform(self.u_r, self.grid.dt)
        vals = _cubic_interp_log(np.log(r), self.grid.t, durdt, self.grid.dt)
        return vals / np.asarray(r, dtype=float)


def energy(profile: RadialProfile, G) -> float:
    """(1/p) int |grad u|^p - int G(u) over the unit ball, radial units.

    G is the antiderivative of the reaction term, passed as a callable or as
    nodal values (tabulated reaction terms have no closed form).
    """
    rule = profile.rule()
    kinetic = rule.integrate(np.abs(profile.u_r) ** profile.p) / profile.p
    g_vals = G(profile.u) if callable(G) else np.asarray(G, dtype=float)
    return kinetic - rule.integrate(g_vals)
