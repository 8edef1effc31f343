"""Second-variation quadratic form, discrete spectra, and the weighted
inequalities it implies.

A radially decreasing solution is semi-stable when

    Q(xi) = int { (p-1) |u_r|^(p-2) xi_r^2 - g'(u) xi^2 }  >= 0

for every radial xi compactly supported away from the origin and boundary.
On solutions, the substitution xi = u_r eta removes the reaction term:

    Q(u_r eta) = int |u_r|^p { (p-1) eta_r^2 - (n-1) eta^2 / r^2 },

so the right-hand side needs no access to g at all, and replacing eta by
r eta turns semi-stability into the constant-free inequality

    (n-1) int |u_r|^p eta^2  <=  (p-1) int |u_r|^p ((r eta)_r)^2.

The discrete verdict comes from a P1 pencil on [r_trunc, 1]: truncation
replaces "compact support away from 0" (test functions there exclude the
origin anyway), the pencil is exactly tridiagonal, and a Sturm-sequence
bisection certifies the minimal eigenvalue bracket.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .core import (
    ConsistencyError,
    ParameterError,
    RadialProfile,
    make_grid,
)

_GL4_NODES, _GL4_WEIGHTS = leggauss(4)


# ---------------------------------------------------------------------------
# test function families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerCutoff:
    """eta(r) = eps^(-alpha) - 1 for r <= eps, r^(-alpha) - 1 beyond;
    Lipschitz, vanishes at r = 1, constant (not zero) near the origin."""

    alpha: float
    eps: float

    def __post_init__(self):
        if not (0.0 < self.eps < 1.0):
            raise ParameterError(f"eps must lie in (0,1), got {self.eps}")
        if self.alpha <= 0.0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")

    support_lo = 0.0

    @property
    def kinks(self):
        return (self.eps,)

    def value(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= self.eps, self.eps**-self.alpha - 1.0, r**-self.alpha - 1.0)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= self.eps, 0.0, -self.alpha * r ** (-self.alpha - 1.0))


@dataclass(frozen=True)
class SineModes:
    """sin(j pi log r / log r_trunc) on [r_trunc, 1], zero below."""

    mode: int
    r_trunc: float

    def __post_init__(self):
        if self.mode < 1:
            raise ParameterError("mode index must be at least 1")
        if not (0.0 < self.r_trunc < 1.0):
            raise ParameterError(f"r_trunc must lie in (0,1), got {self.r_trunc}")

    @property
    def support_lo(self):
        return self.r_trunc

    kinks = ()

    def _theta(self, r):
        return np.log(r) / math.log(self.r_trunc)

    def value(self, r):
        r = np.asarray(r, dtype=float)
        inside = (r >= self.r_trunc) & (r <= 1.0)
        return np.where(inside, np.sin(self.mode * math.pi * self._theta(r)), 0.0)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        inside = (r >= self.r_trunc) & (r <= 1.0)
        scale = self.mode * math.pi / math.log(self.r_trunc)
        return np.where(
            inside, np.cos(self.mode * math.pi * self._theta(r)) * scale / r, 0.0
        )


@dataclass(frozen=True)
class RScaled:
    """The map eta -> r eta applied to an inner test function."""

    inner: object

    @property
    def support_lo(self):
        return self.inner.support_lo

    @property
    def kinks(self):
        return self.inner.kinks

    def value(self, r):
        r = np.asarray(r, dtype=float)
        return r * self.inner.value(r)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        return self.inner.value(r) + r * self.inner.derivative(r)


@dataclass(frozen=True)
class Nodal:
    """Discrete hat function on a node set: 1 at nodes[index], piecewise
    linear, zero outside the two adjacent cells."""

    nodes: tuple
    index: int

    def __post_init__(self):
        nodes = tuple(float(x) for x in self.nodes)
        if not 1 <= self.index <= len(nodes) - 2:
            raise ParameterError("hat index must be interior")
        object.__setattr__(self, "nodes", nodes)

    @property
    def support_lo(self):
        return self.nodes[self.index - 1]

    @property
    def kinks(self):
        return (self.nodes[self.index - 1], self.nodes[self.index], self.nodes[self.index + 1])

    @property
    def exact_cells(self):
        # integrate on the two supporting cells themselves so the quadratic
        # form matches the assembled pencil bit-for-bit
        return self.kinks

    def value(self, r):
        r = np.asarray(r, dtype=float)
        lo, mid, hi = self.kinks
        up = (r - lo) / (mid - lo)
        down = (hi - r) / (hi - mid)
        return np.clip(np.minimum(up, down), 0.0, 1.0)

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        lo, mid, hi = self.kinks
        out = np.zeros_like(r)
        out[(r > lo) & (r < mid)] = 1.0 / (mid - lo)
        out[(r >= mid) & (r < hi)] = -1.0 / (hi - mid)
        return out


# ---------------------------------------------------------------------------
# quadrature over test-function supports
# ---------------------------------------------------------------------------


def _integration_cells(profile: RadialProfile, xi) -> np.ndarray:
    """Cell boundaries in t for integrals against xi: the profile's log
    cells, clipped to the support, split at the family's kink radii.
    Families with their own exact cell decomposition (nodal hats) use it."""
    own = getattr(xi, "exact_cells", None)
    if own is not None:
        return np.log(np.asarray(own, dtype=float))
    t = profile.grid.t
    lo = max(xi.support_lo, profile.grid.r_min)
    t_lo = math.log(lo) if lo > 0 else t[0]
    pts = set(float(tt) for tt in t if tt >= t_lo - 1e-12)
    pts.add(t_lo)
    for kink in xi.kinks:
        if lo <= kink <= 1.0:
            pts.add(math.log(kink))
    return np.array(sorted(pts))


def _gauss_points(bounds: np.ndarray, n: float):
    """4-point Gauss nodes/weights per cell, flattened; wide cells are
    subdivided so the r^n weight stays resolved."""
    tg_parts, wg_parts = [], []
    for a, b in zip(bounds[:-1], bounds[1:]):
        panels = 1 + int((n + 8.0) * (b - a) / 0.25)
        edges = np.linspace(a, b, panels + 1)
        mid = 0.5 * (edges[:-1] + edges[1:])
        half = 0.5 * np.diff(edges)
        tg_parts.append((mid[:, None] + half[:, None] * _GL4_NODES).ravel())
        wg_parts.append((half[:, None] * _GL4_WEIGHTS).ravel())
    return np.concatenate(tg_parts), np.concatenate(wg_parts)


def q_apply(profile: RadialProfile, g_prime, xi) -> float:
    """Quadrature value of the second-variation form at the profile for one
    test function (values and derivatives supplied by the family).

    For p < 2 the coefficient |u_r|^(p-2) blows up where u_r = 0; supports
    reaching such radii are rejected.
    """
    n, p = profile.n, profile.p
    bounds = _integration_cells(profile, xi)
    tg, wg = _gauss_points(bounds, n)
    rg = np.exp(tg)
    ur = np.asarray(profile.u_r_at(rg), dtype=float)
    if p < 2.0 and np.any(np.abs(ur) < 1e-300):
        raise ParameterError(
            "test function supported where u_r = 0 with p < 2 "
            "(degenerate coefficient)"
        )
    with np.errstate(divide="ignore"):
        coeff = (p - 1.0) * np.abs(ur) ** (p - 2.0)
    uu = np.asarray(profile.u_at(rg), dtype=float)
    xv = np.asarray(xi.value(rg), dtype=float)
    xd = np.asarray(xi.derivative(rg), dtype=float)
    gp = np.asarray(g_prime(uu), dtype=float)
    integrand = coeff * xd**2 - gp * xv**2
    value = float(np.dot(wg, integrand * np.exp(n * tg)))
    # head term over [0, r_min] for families that do not vanish there
    if xi.support_lo < profile.grid.r_min:
        r0 = profile.grid.r_min
        ur0 = float(profile.u_r_at(r0))
        x0 = float(xi.value(r0))
        xd0 = float(xi.derivative(r0))
        gp0 = float(g_prime(float(profile.u_at(r0))))
        head = ((p - 1.0) * abs(ur0) ** (p - 2.0) * xd0**2 - gp0 * x0**2) * r0**n / n
        value += head
    if not math.isfinite(value):
        raise ConsistencyError("quadratic form evaluated to a non-finite value")
    return value


# ---------------------------------------------------------------------------
# P1 pencil and Sturm bisection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tridiagonal:
    diag: np.ndarray
    off: np.ndarray  # superdiagonal, length len(diag) - 1


@dataclass(frozen=True)
class QPencil:
    """Assembled stiffness A, reaction mass B, plain mass M, and eigen nodes;
    the quadratic form of a nodal vector is exactly x^T (A - B) x."""

    a: Tridiagonal
    b: Tridiagonal
    m: Tridiagonal
    nodes: np.ndarray


def assemble_q(profile: RadialProfile, g_prime, r_trunc: float, n_eig: int) -> QPencil:
    """P1 hats on a log-uniform eigen grid over [r_trunc, 1], zero at both
    ends; coefficients are evaluated at interior Gauss points, so u_r = 0 is
    never sampled on the truncated domain."""
    if n_eig < 32:
        raise ParameterError(f"need at least 32 eigen nodes, got {n_eig}")
    if r_trunc < profile.grid.r_min:
        raise ParameterError("r_trunc must not undercut the profile grid")
    n, p = profile.n, profile.p
    eigen_grid = make_grid(r_trunc, n_eig + 2)
    s = eigen_grid.r
    k = n_eig  # interior unknowns

    a_diag = np.zeros(k)
    a_off = np.zeros(k - 1)
    b_diag = np.zeros(k)
    b_off = np.zeros(k - 1)
    m_diag = np.zeros(k)
    m_off = np.zeros(k - 1)

    tg, wg = _gauss_points(eigen_grid.t, n)
    per_cell = len(tg) // (k + 1)
    if per_cell * (k + 1) != len(tg):
        raise ConsistencyError("uneven Gauss panels on a uniform eigen grid")
    tg = tg.reshape(k + 1, per_cell)
    wg = wg.reshape(k + 1, per_cell)
    rg = np.exp(tg)
    ur = np.asarray(profile.u_r_at(rg.ravel()), dtype=float).reshape(k + 1, per_cell)
    uu = np.asarray(profile.u_at(rg.ravel()), dtype=float).reshape(k + 1, per_cell)
    gp = np.asarray(g_prime(uu.ravel()), dtype=float).reshape(k + 1, per_cell)
    if not (np.all(np.isfinite(ur)) and np.all(np.isfinite(gp))):
        raise ParameterError("coefficient non-finite on an eigen cell")
    coeff = (p - 1.0) * np.abs(ur) ** (p - 2.0)
    weight = wg * np.exp(n * tg)

    h = np.diff(s)
    # basis on cell c: left hat (s[c+1]-r)/h, right hat (r-s[c])/h
    for c in range(k + 1):
        rr = rg[c]
        left = (s[c + 1] - rr) / h[c]
        right = (rr - s[c]) / h[c]
        dleft, dright = -1.0 / h[c], 1.0 / h[c]
        wa = weight[c] * coeff[c]
        wb = weight[c] * gp[c]
        wm = weight[c]
        # indices: left basis -> node c, right basis -> node c+1 (eigen grid);
        # interior unknowns are nodes 1..k, matrix index = node - 1
        il, ir = c - 1, c
        if il >= 0:
            a_diag[il] += np.sum(wa) * dleft * dleft
            b_diag[il] += np.dot(wb, left * left)
            m_diag[il] += np.dot(wm, left * left)
        if ir < k:
            a_diag[ir] += np.sum(wa) * dright * dright
            b_diag[ir] += np.dot(wb, right * right)
            m_diag[ir] += np.dot(wm, right * right)
        if il >= 0 and ir < k:
            a_off[il] += np.sum(wa) * dleft * dright
            b_off[il] += np.dot(wb, left * right)
            m_off[il] += np.dot(wm, left * right)

    return QPencil(
        a=Tridiagonal(a_diag, a_off),
        b=Tridiagonal(b_diag, b_off),
        m=Tridiagonal(m_diag, m_off),
        nodes=s,
    )


def nodal_family(pencil: QPencil):
    """Hat-function test objects matching the pencil's eigen nodes."""
    return [Nodal(tuple(pencil.nodes), i) for i in range(1, len(pencil.nodes) - 1)]


def quadratic_form_value(pencil: QPencil, x: np.ndarray) -> float:
    """x^T (A - B) x for a nodal coefficient vector."""
    td, to = pencil.a.diag - pencil.b.diag, pencil.a.off - pencil.b.off
    return float(np.dot(x, td * x) + 2.0 * np.dot(x[:-1], to * x[1:]))


def _negative_count(t_diag, t_off, m_diag, m_off, mu: float) -> int:
    """Inertia of (A - B) - mu M via the tridiagonal LDL^T recurrence."""
    d = t_diag - mu * m_diag
    e = t_off - mu * m_off
    count = 0
    prev = d[0]
    if prev == 0.0:
        prev = -1e-300
    if prev < 0:
        count += 1
    for i in range(1, len(d)):
        val = d[i] - e[i - 1] ** 2 / prev
        if val == 0.0:
            val = -1e-300
        if val < 0:
            count += 1
        prev = val
    return count


def min_eigenvalue(a: Tridiagonal, b: Tridiagonal, m: Tridiagonal) -> float:
    """Minimal mu with (A - B) x = mu M x, by Sturm-sequence bisection on the
    tridiagonal pencil; the returned midpoint carries a certified bracket of
    width below 1e-10 of the Rayleigh scale (or a few ulps)."""
    t_diag, t_off = a.diag - b.diag, a.off - b.off
    m_diag, m_off = m.diag, m.off
    if np.any(m_diag <= 0):
        raise ParameterError("mass form is singular on a cell")
    hi = float(np.min(t_diag / m_diag))  # basis-vector Rayleigh quotient
    while _negative_count(t_diag, t_off, m_diag, m_off, hi) < 1:
        hi = hi + max(1.0, abs(hi))
    # A is positive semidefinite, so mu_1 >= -lambda_max(B, M); a pencil
    # Gershgorin row bound on (B, M) keeps the initial bracket physical
    pad = lambda v: np.concatenate([[0.0], np.abs(v)]) + np.concatenate(
        [np.abs(v), [0.0]]
    )
    m_row = m_diag - pad(m_off)
    m_row = np.where(m_row > 0, m_row, np.min(m_diag) * 0.1)
    lo = -float(np.max((np.abs(b.diag) + pad(b.off)) / m_row)) - 1.0
    lo = min(lo, hi - 1.0)
    while _negative_count(t_diag, t_off, m_diag, m_off, lo) > 0:
        lo = 2.0 * lo - 1.0
    # width target follows the shrinking bracket so the certificate is
    # relative to the eigenvalue itself, not to the stiffest basis quotient
    while True:
        target = max(
            1e-10 * max(abs(lo), abs(hi), 1.0), 8 * math.ulp(max(abs(lo), abs(hi)))
        )
        if hi - lo <= target:
            break
        mid = 0.5 * (lo + hi)
        if _negative_count(t_diag, t_off, m_diag, m_off, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _min_mode_vector(pencil: QPencil, mu: float) -> np.ndarray:
    """Eigenvector witness at the certified eigenvalue via a twisted
    factorization of (A - B) - mu M (robust under the extreme row scaling a
    log grid with an r^n weight produces)."""
    a = pencil.a.diag - pencil.b.diag - mu * pencil.m.diag
    b = pencil.a.off - pencil.b.off - mu * pencil.m.off
    k = len(a)
    tiny = 1e-300
    d_fwd = np.empty(k)
    d_fwd[0] = a[0]
    for i in range(1, k):
        prev = d_fwd[i - 1]
        d_fwd[i] = a[i] - b[i - 1] ** 2 / (prev if prev != 0 else tiny)
    d_bwd = np.empty(k)
    d_bwd[-1] = a[-1]
    for i in range(k - 2, -1, -1):
        nxt = d_bwd[i + 1]
        d_bwd[i] = a[i] - b[i] ** 2 / (nxt if nxt != 0 else tiny)
    gamma = d_fwd + d_bwd - a
    # row weights vary over many decades (r^n on a log grid), so the twist
    # index must minimize gamma relative to the local row scale
    row_scale = np.abs(a)
    row_scale[:-1] += np.abs(b)
    row_scale[1:] += np.abs(b)
    twist = int(np.argmin(np.abs(gamma) / np.maximum(row_scale, tiny)))
    x = np.zeros(k)
    x[twist] = 1.0
    for i in range(twist - 1, -1, -1):
        df = d_fwd[i]
        x[i] = -b[i] * x[i + 1] / (df if df != 0 else tiny)
    for i in range(twist, k - 1):
        db = d_bwd[i + 1]
        x[i + 1] = -b[i] * x[i] / (db if db != 0 else tiny)
    norm = np.max(np.abs(x))
    return x / (norm if norm > 0 else 1.0)


def _rayleigh_of_min_mode(pencil: QPencil, mu: float) -> float:
    x = _min_mode_vector(pencil, mu)
    td = pencil.a.diag - pencil.b.diag
    to = pencil.a.off - pencil.b.off
    md, mo = pencil.m.diag, pencil.m.off
    num = np.dot(x, td * x) + 2 * np.dot(x[:-1], to * x[1:])
    den = np.dot(x, md * x) + 2 * np.dot(x[:-1], mo * x[1:])
    return float(num / den)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilityReport:
    mu_1: float
    rayleigh_min: float
    verdict: str  # "semi-stable" | "unstable" | "marginal"
    scale: float
    r_trunc: float
    n_eig: int
    mu_1_alt: float  # same pencil with r_trunc one decade larger
    r_trunc_alt: float
    hardy_witness_ok: bool = True

    def as_dict(self) -> dict:
        return {
            "mu_1": self.mu_1,
            "rayleigh_min": self.rayleigh_min,
            "verdict": self.verdict,
            "scale": self.scale,
            "r_trunc": self.r_trunc,
            "n_eig": self.n_eig,
            "mu_1_alt": self.mu_1_alt,
            "r_trunc_alt": self.r_trunc_alt,
            "hardy_witness_ok": self.hardy_witness_ok,
        }


def stability_report(
    profile: RadialProfile,
    g_prime,
    *,
    r_trunc: float = 1e-6,
    n_eig: int = 500,
    tol_eig: float = 1e-8,
) -> StabilityReport:
    """Discrete semi-stability verdict for a profile.

    The threshold is tol_eig times the largest mass-form diagonal; the
    unstable verdict requires one extra decade of margin, with "marginal"
    in between (the fold genuinely has mu_1 = 0).  A discrete nonnegative
    verdict certifies semi-stability on the discretized test space only.
    """
    pencil = assemble_q(profile, g_prime, r_trunc, n_eig)
    mu1 = min_eigenvalue(pencil.a, pencil.b, pencil.m)
    rayleigh = _rayleigh_of_min_mode(pencil, mu1)
    scale = float(np.max(pencil.m.diag))
    threshold = tol_eig * scale
    if mu1 >= -threshold:
        verdict = "semi-stable"
    elif mu1 < -10.0 * threshold:
        verdict = "unstable"
    else:
        verdict = "marginal"
    hardy_ok = True
    if verdict == "semi-stable":
        # a nonnegative form forces the constant-free weighted inequality;
        # a violating witness overrules the subspace spectrum
        witnesses = [SineModes(j, r_trunc) for j in (1, 2, 3)]
        witnesses += [PowerCutoff(alpha, 10.0 * r_trunc) for alpha in (0.5, 1.0, 2.0)]
        hardy_ok = all(c.satisfied for c in hardy_inequality_check(profile, witnesses))
        if not hardy_ok:
            verdict = "unstable"
    alt_trunc = min(10.0 * r_trunc, 0.5)
    pencil_alt = assemble_q(profile, g_prime, alt_trunc, n_eig)
    mu1_alt = min_eigenvalue(pencil_alt.a, pencil_alt.b, pencil_alt.m)
    return StabilityReport(
        mu_1=mu1,
        rayleigh_min=rayleigh,
        verdict=verdict,
        scale=scale,
        r_trunc=r_trunc,
        n_eig=n_eig,
        mu_1_alt=mu1_alt,
        r_trunc_alt=alt_trunc,
        hardy_witness_ok=hardy_ok,
    )


# ---------------------------------------------------------------------------
# identities and inequalities on solutions
# ---------------------------------------------------------------------------


def reaction_free_identity(
    profile: RadialProfile,
    g_prime,
    eta,
    *,
    residual: float | None = None,
    residual_bound: float = 1e-6,
) -> tuple[float, float, float]:
    """Both sides of the reaction-free identity for xi = u_r eta.

    lhs evaluates the second-variation form at xi = u_r eta (this needs
    g'); rhs is int |u_r|^p { (p-1) eta_r^2 - (n-1) eta^2 / r^2 } and never
    touches the reaction term.  The identity holds on solutions only, so
    callers pass the profile's flux-form residual for the precondition.
    """
    if residual is not None and residual > residual_bound:
        raise ParameterError(
            f"identity requires an accurate solution: residual {residual:.3e} "
            f"exceeds bound {residual_bound:.3e}"
        )
    n, p = profile.n, profile.p
    bounds = _integration_cells(profile, eta)
    tg, wg = _gauss_points(bounds, n)
    rg = np.exp(tg)
    ur = np.asarray(profile.u_r_at(rg), dtype=float)
    urr = np.asarray(profile.u_rr_at(rg), dtype=float)
    uu = np.asarray(profile.u_at(rg), dtype=float)
    ev = np.asarray(eta.value(rg), dtype=float)
    ed = np.asarray(eta.derivative(rg), dtype=float)
    gp = np.asarray(g_prime(uu), dtype=float)
    wvol = wg * np.exp(n * tg)

    xi_r = urr * ev + ur * ed
    with np.errstate(divide="ignore"):
        coeff = (p - 1.0) * np.abs(ur) ** (p - 2.0)
    lhs = float(np.dot(wvol, coeff * xi_r**2 - gp * (ur * ev) ** 2))
    rhs = float(
        np.dot(wvol, np.abs(ur) ** p * ((p - 1.0) * ed**2 - (n - 1.0) * ev**2 / rg**2))
    )
    floor = 1e-300
    denom = max(abs(lhs), abs(rhs), floor)
    rel = abs(lhs - rhs) / denom if max(abs(lhs), abs(rhs)) > 0 else 0.0
    return lhs, rhs, rel


@dataclass(frozen=True)
class HardyCheck:
    lhs: float
    rhs: float
    satisfied: bool


def hardy_inequality_check(profile: RadialProfile, eta_family) -> list[HardyCheck]:
    """Constant-free inequality (n-1) int |u_r|^p eta^2 <=
    (p-1) int |u_r|^p ((r eta)_r)^2 for each supplied eta.

    Semi-stable profiles satisfy every instance; an unstable one is
    witnessed by some violating member.
    """
    n, p = profile.n, profile.p
    out = []
    for eta in eta_family:
        bounds = _integration_cells(profile, eta)
        tg, wg = _gauss_points(bounds, n)
        rg = np.exp(tg)
        urp = np.abs(np.asarray(profile.u_r_at(rg), dtype=float)) ** p
        ev = np.asarray(eta.value(rg), dtype=float)
        scaled_d = ev + rg * np.asarray(eta.derivative(rg), dtype=float)
        wvol = wg * np.exp(n * tg)
        lhs = (n - 1.0) * float(np.dot(wvol, urp * ev**2))
        rhs = (p - 1.0) * float(np.dot(wvol, urp * scaled_d**2))
        ok = lhs <= rhs * (1.0 + 1e-8) + 1e-300
        out.append(HardyCheck(lhs=lhs, rhs=rhs, satisfied=bool(ok)))
    return out


def weighted_gradient_integral(profile: RadialProfile, alpha: float) -> tuple[float, float]:
    """Weighted integral int |u_r|^p r^(-2 alpha) over the ball and the
    implied constant ratio against the gradient energy.

    Admissible range: 1 <= alpha < 1 + sqrt((n-1)/(p-1)), open at the top.
    """
    n, p = profile.n, profile.p
    alpha_max = 1.0 + math.sqrt((n - 1.0) / (p - 1.0))
    if not (1.0 <= alpha < alpha_max):
        raise ParameterError(
            f"alpha must lie in [1, {alpha_max:.6g}), got {alpha}"
        )
    rule = profile.rule()
    urp = np.abs(profile.u_r) ** p
    value = rule.integrate(urp * profile.grid.r ** (-2.0 * alpha))
    grad = rule.integrate(urp)
    factor = (n - 1.0) - (alpha - 1.0) ** 2 * (p - 1.0)
    implied = value * factor / grad if grad > 0 else 0.0
    return float(value), float(implied)


def random_eta_family(rng, r_trunc: float, count: int = 20):
    """Mixed bag of admissible test functions for randomized checks."""
    out = []
    for i in range(count):
        if i % 2 == 0:
            out.append(SineModes(mode=1 + int(rng.integers(1, 6)), r_trunc=r_trunc))
        else:
            alpha = float(rng.uniform(0.3, 2.5))
            eps = float(10 ** rng.uniform(-5, -1))
            out.append(PowerCutoff(alpha=alpha, eps=eps))
    return out
