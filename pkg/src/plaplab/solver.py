"""Numerical solution machinery for the radial reaction problem.

All integrations work in the flux variable w = r^(n-1)|u_r|^(p-2) u_r, which
turns the equation into the non-degenerate first-order system

    u' = sgn(w) (|w| r^(1-n))^(1/(p-1)),      w' = -r^(n-1) g(u),

avoiding the coefficient |u_r|^(p-2) that is singular (p < 2) or degenerate
(p > 2) where u_r vanishes.

Three routes to solutions:

  * ``shoot`` integrates from the center value u(0) = M with a startup
    series at r_min (fourth-order single steps on the log grid);
  * ``minimal_iterate`` runs the monotone iteration from u = 0, inverting
    the radial p-Laplacian by nested quadrature; iterates increase
    pointwise, and the limit is the minimal solution when one exists;
  * ``lambda_star_estimate`` bisects the parameter between convergent and
    divergent iterations and reports a bracket for the extremal parameter,
    never a point value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ConsistencyError,
    Nonlinearity,
    ParameterError,
    ProblemSpec,
    QuadratureRule,
    RadialGrid,
    RadialProfile,
    make_rule,
)

#: flux scaling r^(n-1) underflows double precision headroom past this
SOLVER_MAX_DIMENSION = 30.0


class BlowUpError(RuntimeError):
    """Shooting trajectory exceeded the overflow guard before r = 1."""


class BracketingError(RuntimeError):
    """No divergent (or no convergent) parameter found; carries a diagnosis."""


@dataclass(frozen=True)
class IterationControls:
    tol_abs: float = 1e-11
    tol_rel: float = 1e-10
    u_max: float = 1e6
    k_max: int = 10000


@dataclass(frozen=True)
class Divergence:
    lam: float
    iterations: int
    sup_u: float
    reason: str


@dataclass(frozen=True)
class ShootResult:
    profile: RadialProfile
    boundary_value: float
    steps: int
    min_step: float
    warnings: tuple = ()


@dataclass(frozen=True)
class LambdaRecord:
    lam: float
    converged: bool
    iterations: int
    sup_norm: float
    w1p_norm: float
    f_l1_norm: float


@dataclass(frozen=True)
class BifurcationPoint:
    center_value: float
    lam: float
    boundary_residual: float
    converged: bool
    iterations: int


@dataclass(frozen=True)
class ContinuationResult:
    lambda_lo: float
    lambda_hi: float
    records: tuple
    profile_lo: RadialProfile


def _check_solver_dimension(n: float) -> None:
    if n > SOLVER_MAX_DIMENSION:
        raise ParameterError(
            f"solver supports n <= {SOLVER_MAX_DIMENSION:g} "
            f"(flux scaling r^(n-1) loses double-precision headroom), got n={n}"
        )


# ---------------------------------------------------------------------------
# shooting
# ---------------------------------------------------------------------------


def shoot(
    spec: ProblemSpec,
    center_value: float,
    grid: RadialGrid,
    *,
    seed: tuple[float, float] | None = None,
    substeps: int = 2,
    u_guard: float = 1e6,
) -> ShootResult:
    """Integrate the flux system outward from r_min with u(0) = M.

    The startup series u(r) ~ M - (p-1)/p (g(M)/n)^(1/(p-1)) r^(p/(p-1)),
    w(r) ~ -r^n g(M)/n seeds the integration at r_min (error
    O(r_min^(2p/(p-1)))); ``seed`` overrides it with explicit
    (u(r_min), w(r_min)) values, which is the right choice when targeting a
    solution that is singular at the origin.
    """
    _check_solver_dimension(spec.n)
    n, p = spec.n, spec.p
    q = 1.0 / (p - 1.0)
    g = spec.nonlinearity.scalar_value()
    t = grid.t
    dt = grid.dt / substeps

    if seed is None:
        g_m = g(center_value)
        u0 = center_value - math.copysign(
            (p - 1.0) / p * (abs(g_m) / n) ** q * grid.r_min ** (p / (p - 1.0)), g_m
        )
        w0 = -grid.r_min**n * g_m / n
    else:
        u0, w0 = seed

    def du_dt(t_, w_):
        if w_ == 0.0:
            return 0.0
        mag = q * (math.log(abs(w_)) + (1.0 - n) * t_) + t_
        return math.copysign(math.exp(mag), w_)

    def dw_dt(t_, u_):
        return -math.exp(n * t_) * g(u_)

    u_nodes = np.empty(grid.size)
    w_nodes = np.empty(grid.size)
    u_nodes[0], w_nodes[0] = u0, w0
    u, w = u0, w0
    steps = 0
    warnings: list[str] = []
    try:
        for k in range(grid.size - 1):
            tk = t[k]
            for s in range(substeps):
                t0 = tk + s * dt
                k1u = du_dt(t0, w)
                k1w = dw_dt(t0, u)
                k2u = du_dt(t0 + dt / 2, w + dt / 2 * k1w)
                k2w = dw_dt(t0 + dt / 2, u + dt / 2 * k1u)
                k3u = du_dt(t0 + dt / 2, w + dt / 2 * k2w)
                k3w = dw_dt(t0 + dt / 2, u + dt / 2 * k2u)
                k4u = du_dt(t0 + dt, w + dt * k3w)
                k4w = dw_dt(t0 + dt, u + dt * k3u)
                u += dt / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)
                w += dt / 6 * (k1w + 2 * k2w + 2 * k3w + k4w)
                steps += 1
                if not (math.isfinite(u) and math.isfinite(w)) or abs(u) > u_guard:
                    raise BlowUpError(
                        f"|u| exceeded {u_guard:g} at r = {math.exp(t0):.3e}"
                    )
            u_nodes[k + 1], w_nodes[k + 1] = u, w
    except OverflowError as exc:
        raise BlowUpError(f"overflow during integration: {exc}") from exc

    if np.any(np.diff(u_nodes) > 1e-10 * (1.0 + np.max(np.abs(u_nodes)))):
        warnings.append("u is not monotone along the trajectory")
    if np.any(w_nodes > 0):
        warnings.append("flux changed sign along the trajectory")
    profile = RadialProfile(
        grid=grid, n=n, p=p, u=u_nodes, w=np.minimum(w_nodes, 0.0), check=False
    )
    return ShootResult(
        profile=profile,
        boundary_value=float(u_nodes[-1]),
        steps=steps,
        min_step=dt,
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# monotone iteration
# ---------------------------------------------------------------------------


def _require_admissible_reaction(f: Nonlinearity) -> None:
    if not f.increasing:
        raise ParameterError("minimal-solution iteration requires increasing f")
    if not f.positive_at_zero():
        raise ParameterError("minimal-solution iteration requires f(0) > 0")


def _iteration_step(u, lam, f, rule_src: QuadratureRule, rule_out: QuadratureRule, rpow, q):
    """One sweep of the monotone iteration; returns (next u, flux integral F).

    The source integral carries the r^(n-1) weight; the outer integral
    int_r^1 v(s) ds is unweighted (rule built with n = 1).
    """
    with np.errstate(over="ignore", invalid="ignore"):
        fv = lam * np.asarray(f.value(u), dtype=float)
    if not np.all(np.isfinite(fv)):
        return None, None
    F = rule_src.cumulative_from_zero(fv)
    v = (F * rpow) ** q
    return rule_out.cumulative_to_one(v), F


def _minimal_iterate_counted(
    spec: ProblemSpec,
    lam: float,
    grid: RadialGrid,
    controls: IterationControls,
):
    n, p = spec.n, spec.p
    f = spec.nonlinearity
    q = 1.0 / (p - 1.0)
    rule_src = make_rule(grid, n)
    rule_out = make_rule(grid, 1.0)
    rpow = grid.r ** (1.0 - n)

    u = np.zeros(grid.size)
    for k in range(1, controls.k_max + 1):
        u_next, F = _iteration_step(u, lam, f, rule_src, rule_out, rpow, q)
        if u_next is None or not np.all(np.isfinite(u_next)):
            return Divergence(lam=lam, iterations=k, sup_u=math.inf, reason="overflow"), k
        slack = 1e-12 * (1.0 + float(np.max(u_next)))
        if np.any(u_next < u - slack):
            raise ConsistencyError(
                "monotone iteration decreased somewhere; quadrature bug"
            )
        sup = float(np.max(u_next))
        if sup > controls.u_max:
            return Divergence(lam=lam, iterations=k, sup_u=sup, reason="exceeded u_max"), k
        delta = float(np.max(np.abs(u_next - u)))
        u = u_next
        if delta < controls.tol_abs + controls.tol_rel * sup:
            # one more sweep makes (u, w) an exactly consistent pair
            u_final, F_final = _iteration_step(u, lam, f, rule_src, rule_out, rpow, q)
            return RadialProfile(grid=grid, n=n, p=p, u=u_final, w=-F_final), k
    return (
        Divergence(
            lam=lam,
            iterations=controls.k_max,
            sup_u=float(np.max(u)),
            reason="iteration cap",
        ),
        controls.k_max,
    )


def minimal_iterate(
    spec: ProblemSpec,
    lam: float,
    grid: RadialGrid,
    controls: IterationControls | None = None,
):
    """Monotone iteration from u = 0: returns the fixed-point RadialProfile,
    or a Divergence record when iterates pass u_max / the iteration cap."""
    _check_solver_dimension(spec.n)
    if lam < 0:
        raise ParameterError(f"lambda must be nonnegative, got {lam}")
    _require_admissible_reaction(spec.nonlinearity)
    outcome, _count = _minimal_iterate_counted(
        spec, lam, grid, controls or IterationControls()
    )
    return outcome


def _profile_norms(profile: RadialProfile, f: Nonlinearity):
    rule = profile.rule()
    p = profile.p
    w1p = (
        rule.integrate(np.abs(profile.u) ** p) + rule.integrate(np.abs(profile.u_r) ** p)
    ) ** (1.0 / p)
    f_l1 = rule.integrate(np.asarray(f.value(profile.u), dtype=float))
    return w1p, f_l1


def lambda_star_estimate(
    spec: ProblemSpec,
    grid: RadialGrid,
    controls: IterationControls | None = None,
    *,
    tol_lambda: float = 1e-3,
    lam_init: float = 1.0,
    lam_cap: float = 1e8,
    max_bisect: int = 200,
) -> ContinuationResult:
    """Bracket the extremal parameter by bisection between the largest
    convergent and smallest divergent iteration outcome.

    Every probe is recorded with its norms so the uniform-bound behavior of
    the minimal branch can be audited from the result alone.
    """
    _check_solver_dimension(spec.n)
    f = spec.nonlinearity
    _require_admissible_reaction(f)
    controls = controls or IterationControls()
    records: list[LambdaRecord] = []
    profiles: dict[float, RadialProfile] = {}

    def probe(lam: float) -> bool:
        out, count = _minimal_iterate_counted(spec, lam, grid, controls)
        if isinstance(out, Divergence):
            records.append(
                LambdaRecord(
                    lam=lam,
                    converged=False,
                    iterations=out.iterations,
                    sup_norm=out.sup_u,
                    w1p_norm=math.inf,
                    f_l1_norm=math.inf,
                )
            )
            return False
        w1p, f_l1 = _profile_norms(out, f)
        records.append(
            LambdaRecord(
                lam=lam,
                converged=True,
                iterations=count,
                sup_norm=float(np.max(out.u)),
                w1p_norm=w1p,
                f_l1_norm=f_l1,
            )
        )
        profiles[lam] = out
        return True

    lam = lam_init
    if probe(lam):
        lo = lam
        while True:
            lam *= 2.0
            if lam > lam_cap:
                raise BracketingError(
                    f"no divergence found below the cap {lam_cap:g}; "
                    "the reaction appears effectively sublinear on this range"
                )
            if not probe(lam):
                hi = lam
                break
            lo = lam
    else:
        hi = lam
        while True:
            lam *= 0.5
            if lam < 1e-12 * lam_init:
                raise BracketingError(
                    "no convergent parameter found; check f(0) > 0 and the grid"
                )
            if probe(lam):
                lo = lam
                break
            hi = lam

    for _ in range(max_bisect):
        if hi - lo <= tol_lambda * lo or (hi - lo) <= 8 * math.ulp(hi):
            break
        mid = 0.5 * (lo + hi)
        if probe(mid):
            lo = mid
        else:
            hi = mid

    ordered = tuple(sorted(records, key=lambda rec: rec.lam))
    return ContinuationResult(
        lambda_lo=lo, lambda_hi=hi, records=ordered, profile_lo=profiles[lo]
    )


def extremal_profile(result: ContinuationResult) -> RadialProfile:
    """Minimal solution at the largest convergent parameter of the bracket;
    an approximation of the limiting solution, tagged only by lambda_lo."""
    if result.profile_lo is None:
        raise ParameterError("continuation result carries no convergent profile")
    return result.profile_lo


# ---------------------------------------------------------------------------
# bifurcation curve
# ---------------------------------------------------------------------------


def bifurcation_curve(
    spec: ProblemSpec,
    center_values,
    grid: RadialGrid,
    *,
    boundary_rtol: float = 1e-8,
    max_iter: int = 60,
) -> list[BifurcationPoint]:
    """Parameter-versus-center-value curve: for each M, a secant iteration
    on lambda drives the shoot boundary value u(1) to zero (bisection
    fallback once a sign change is seen).  Non-convergence for a given M is
    recorded, not fatal."""
    _check_solver_dimension(spec.n)
    ms = [float(m) for m in center_values]
    if any(m <= 0 for m in ms) or any(b >= a for a, b in zip(ms[1:], ms[:-1])):
        raise ParameterError("center values must be positive and increasing")
    f = spec.nonlinearity
    points: list[BifurcationPoint] = []
    lam_prev: float | None = None

    for m_val in ms:
        f_mid = float(np.asarray(f.value(0.5 * m_val), dtype=float))
        lam0 = lam_prev if lam_prev else spec.n * (
            m_val * spec.p / (spec.p - 1.0)
        ) ** (spec.p - 1.0) / max(f_mid, 1e-300)
        lam1 = 0.8 * lam0

        def boundary(lam: float) -> float:
            run = shoot(
                ProblemSpec(spec.n, spec.p, f.with_scale(lam)), m_val, grid
            )
            return run.boundary_value

        try:
            phi0, phi1 = boundary(lam0), boundary(lam1)
        except BlowUpError:
            points.append(BifurcationPoint(m_val, math.nan, math.inf, False, 0))
            continue
        bracket = None
        converged = False
        iterations = 0
        lam_a, lam_b, phi_a, phi_b = lam0, lam1, phi0, phi1
        lam_cur, phi_cur = lam_b, phi_b
        for iterations in range(1, max_iter + 1):
            if abs(phi_cur) < boundary_rtol * max(m_val, 1.0):
                converged = True
                break
            if phi_a * phi_cur < 0:
                bracket = (min(lam_a, lam_cur), max(lam_a, lam_cur))
            denom = phi_cur - phi_a
            if denom != 0 and math.isfinite(denom):
                lam_next = lam_cur - phi_cur * (lam_cur - lam_a) / denom
            else:
                lam_next = math.nan
            if bracket and not (
                math.isfinite(lam_next) and bracket[0] < lam_next < bracket[1]
            ):
                lam_next = 0.5 * (bracket[0] + bracket[1])
            elif not (math.isfinite(lam_next) and lam_next > 0):
                lam_next = 0.5 * lam_cur
            lam_a, phi_a = lam_cur, phi_cur
            lam_cur = lam_next
            try:
                phi_cur = boundary(lam_cur)
            except BlowUpError:
                phi_cur = math.inf
        points.append(
            BifurcationPoint(
                center_value=m_val,
                lam=lam_cur,
                boundary_residual=abs(phi_cur),
                converged=converged,
                iterations=iterations,
            )
        )
        if converged:
            lam_prev = lam_cur
    return points
