import math

import numpy as np
import pytest

from plaplab import (
    Exponential,
    Nodal,
    ParameterError,
    PowerCutoff,
    ProblemSpec,
    RScaled,
    SineModes,
    assemble_q,
    exact_exponential,
    exact_power,
    hardy_inequality_check,
    weighted_gradient_integral,
    reaction_free_identity,
    make_grid,
    min_eigenvalue,
    minimal_iterate,
    ode_residual,
    q_apply,
    stability_report,
)
from plaplab.core import RadialProfile
from plaplab.stability import nodal_family, quadratic_form_value, random_eta_family


class ZeroEta:
    support_lo = 0.5
    kinks = ()

    def value(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def derivative(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))


# --- the quadratic form -----------------------------------------------------


def test_q_apply_zero_test_function(grid2000):
    sol = exact_exponential(10.0, 2.0)
    prof = sol.sample(grid2000)
    assert q_apply(prof, sol.g_prime(), ZeroEta()) == 0.0


def test_q_apply_positive_without_reaction(grid2000):
    sol = exact_exponential(10.0, 2.0)
    prof = sol.sample(grid2000)
    val = q_apply(prof, lambda u: 0.0 * np.asarray(u), SineModes(1, 1e-3))
    assert val > 0.0


def test_q_apply_matches_dense_reference(grid2000):
    # independent check: trapezoid quadrature of the closed-form integrand
    # on a fine kink-aligned grid, for a mid-grid hat function
    sol = exact_exponential(10.0, 2.0)
    prof = sol.sample(grid2000)
    nodes = (0.01, 0.02, 0.04)
    hat = Nodal(nodes, 1)
    val = q_apply(prof, sol.g_prime(), hat)

    ref = 0.0
    for lo, hi in ((nodes[0], nodes[1]), (nodes[1], nodes[2])):
        r = np.linspace(lo, hi, 200001)
        if hi == nodes[1]:
            xi = (r - lo) / (nodes[1] - lo)
            xi_r = np.full_like(r, 1.0 / (nodes[1] - lo))
        else:
            xi = (hi - r) / (hi - nodes[1])
            xi_r = np.full_like(r, -1.0 / (hi - nodes[1]))
        gp = sol.lambda_star * r**-2.0
        integrand = (xi_r**2 - gp * xi**2) * r**9.0
        ref += np.trapezoid(integrand, r)
    assert abs(val - ref) < 1e-8 * max(abs(val), abs(ref))


def test_q_apply_rejects_degenerate_support():
    grid = make_grid(1e-8, 1000)
    u = np.linspace(1.0, 0.0, grid.size)
    prof = RadialProfile(grid=grid, n=2.0, p=1.5, u=u, w=np.zeros(grid.size))
    with pytest.raises(ParameterError):
        q_apply(prof, lambda v: 0.0 * np.asarray(v), SineModes(1, 1e-3))


# --- assembly and eigenvalues ------------------------------------------------


def test_assembled_form_matches_q_apply(grid2000):
    sol = exact_exponential(10.0, 2.0)
    prof = sol.sample(grid2000)
    pencil = assemble_q(prof, sol.g_prime(), 1e-6, 64)
    hats = nodal_family(pencil)
    for idx in (0, 5, 31, 62):
        x = np.zeros(64)
        x[idx] = 1.0
        qa = q_apply(prof, sol.g_prime(), hats[idx])
        qf = quadratic_form_value(pencil, x)
        assert abs(qa - qf) <= 1e-12 * max(abs(qa), abs(qf))


def test_assemble_rejects_small_problems(grid2000):
    sol = exact_exponential(10.0, 2.0)
    prof = sol.sample(grid2000)
    with pytest.raises(ParameterError):
        assemble_q(prof, sol.g_prime(), 1e-6, 16)
    with pytest.raises(ParameterError):
        assemble_q(prof, sol.g_prime(), 1e-9, 64)


def test_pure_stiffness_eigenvalue_positive(grid2000):
    sol = exact_exponential(10.0, 2.0)
    prof = sol.sample(grid2000)
    pencil = assemble_q(prof, lambda u: 0.0 * np.asarray(u), 1e-4, 128)
    mu = min_eigenvalue(pencil.a, pencil.b, pencil.m)
    assert mu > 0.0


def test_eigenvalue_refinement_order(grid2000):
    sol = exact_exponential(11.0, 2.0)
    prof = sol.sample(grid2000)
    mus = []
    for n_eig in (125, 250, 500, 1000):
        pencil = assemble_q(prof, sol.g_prime(), 1e-6, n_eig)
        mus.append(min_eigenvalue(pencil.a, pencil.b, pencil.m))
    d1, d2, d3 = (abs(mus[i + 1] - mus[i]) for i in range(3))
    assert math.log2(d1 / d2) > 1.7
    assert math.log2(d2 / d3) > 1.7


# --- the singular-solution threshold -----------------------------------------

# For u with |u_r| = p/r the verdict reduces to the weighted quotient
# comparison (p-1)((n-p)/2)^2 against p(n-p): equality at n = p + 4p/(p-1).


@pytest.mark.parametrize(
    "n,p,expected",
    [
        (8.0, 2.0, "unstable"),  # 9 < 12
        (9.0, 2.0, "unstable"),  # 12.25 < 14
        (11.0, 2.0, "semi-stable"),  # 20.25 >= 18
        (12.0, 2.0, "semi-stable"),  # 25 >= 20
        (8.0, 3.0, "unstable"),
        (10.0, 3.0, "semi-stable"),
    ],
)
def test_singular_solution_threshold(grid2000, n, p, expected):
    sol = exact_exponential(n, p)
    rep = stability_report(sol.sample(grid2000), sol.g_prime())
    assert rep.verdict == expected


def test_threshold_brackets_critical_dimension(grid2000):
    mus = {}
    for n in (9.0, 11.0):
        sol = exact_exponential(n, 2.0)
        rep = stability_report(sol.sample(grid2000), sol.g_prime())
        mus[n] = rep.mu_1
    assert mus[9.0] < 0.0 < mus[11.0]


def test_report_sensitivity_fields(grid2000):
    sol = exact_exponential(11.0, 2.0)
    rep = stability_report(sol.sample(grid2000), sol.g_prime())
    assert rep.r_trunc_alt == 10.0 * rep.r_trunc
    assert rep.mu_1_alt > 0.0
    assert abs(rep.rayleigh_min - rep.mu_1) < 1e-4 * max(abs(rep.mu_1), 1.0)
    assert rep.hardy_witness_ok


def test_minimal_solutions_semi_stable(grid2000, minimal_disk_lam1):
    rep = stability_report(minimal_disk_lam1, Exponential(1.0).derivative)
    assert rep.verdict == "semi-stable"
    assert rep.mu_1 > 0.0


# --- reaction-free identity ---------------------------------------------------


def test_identity_zero_eta(grid2000, minimal_disk_lam1):
    lhs, rhs, rel = reaction_free_identity(
        minimal_disk_lam1, Exponential(1.0).derivative, ZeroEta()
    )
    assert (lhs, rhs, rel) == (0.0, 0.0, 0.0)


def test_identity_on_minimal_solution(grid2000, minimal_disk_lam1):
    res = ode_residual(minimal_disk_lam1, Exponential(1.0))
    lhs, rhs, rel = reaction_free_identity(
        minimal_disk_lam1,
        Exponential(1.0).derivative,
        SineModes(1, 1e-3),
        residual=res,
    )
    assert rel < 1e-4


def test_identity_on_exact_solutions(grid2000):
    for sol, eta in (
        (exact_exponential(12.0, 2.0), PowerCutoff(1.0, 1e-2)),
        (exact_power(15.0, 2.0, 5.0), SineModes(2, 1e-4)),
    ):
        prof = sol.sample(grid2000)
        lhs, rhs, rel = reaction_free_identity(prof, sol.g_prime(), eta)
        assert rel < 1e-4


def test_identity_requires_accurate_solution(grid2000, minimal_disk_lam1):
    with pytest.raises(ParameterError):
        reaction_free_identity(
            minimal_disk_lam1,
            Exponential(1.0).derivative,
            SineModes(1, 1e-3),
            residual=1.0,
        )


def test_identity_refinement_order():
    spec = ProblemSpec(2.0, 2.0, Exponential(1.0))
    gp = Exponential(1.0).derivative
    errs = []
    for count in (500, 1000, 2000):
        grid = make_grid(1e-8, count)
        prof = minimal_iterate(spec, 1.0, grid)
        _, _, rel = reaction_free_identity(prof, gp, SineModes(1, 1e-3))
        errs.append(rel)
    assert math.log2(errs[0] / errs[1]) > 1.8
    assert math.log2(errs[1] / errs[2]) > 1.8


def test_identity_rhs_needs_no_reaction(grid2000):
    # evaluating with a poisoned g' changes lhs but must not move rhs
    sol = exact_exponential(12.0, 2.0)
    prof = sol.sample(grid2000)
    eta = SineModes(1, 1e-3)
    _, rhs_true, _ = reaction_free_identity(prof, sol.g_prime(), eta)
    _, rhs_poisoned, _ = reaction_free_identity(prof, lambda u: np.full_like(np.asarray(u), 1e6), eta)
    assert rhs_true == rhs_poisoned


# --- constant-free inequality --------------------------------------------------


def test_hardy_holds_for_semi_stable(grid2000, minimal_disk_lam1):
    fam = random_eta_family(np.random.default_rng(99), 1e-6, 20)
    checks = hardy_inequality_check(minimal_disk_lam1, fam)
    assert len(checks) == 20
    assert all(c.satisfied for c in checks)


def test_hardy_violated_for_unstable(grid2000):
    sol = exact_exponential(8.0, 2.0)
    prof = sol.sample(grid2000)
    # the optimizer is a power near (n-p)/2 = 3
    checks = hardy_inequality_check(prof, [PowerCutoff(2.9, 1e-5)])
    assert not checks[0].satisfied


def test_hardy_zero_eta(grid2000, minimal_disk_lam1):
    checks = hardy_inequality_check(minimal_disk_lam1, [ZeroEta()])
    assert checks[0].satisfied and checks[0].lhs == 0.0 and checks[0].rhs == 0.0


def test_hardy_rscaled_members_on_semi_stable(grid2000, minimal_disk_lam1):
    inner = [SineModes(j, 1e-5) for j in (1, 2)] + [PowerCutoff(0.7, 1e-3)]
    checks = hardy_inequality_check(minimal_disk_lam1, [RScaled(e) for e in inner])
    # r-scaled functions are again admissible test functions
    assert all(c.satisfied for c in checks)


# --- weighted gradient integral --------------------------------------------------


def test_weighted_gradient_range_validation(grid2000):
    sol = exact_exponential(12.0, 2.0)
    prof = sol.sample(grid2000)
    alpha_max = 1.0 + math.sqrt(11.0)
    with pytest.raises(ParameterError):
        weighted_gradient_integral(prof, alpha_max)
    with pytest.raises(ParameterError):
        weighted_gradient_integral(prof, 0.5)


def test_weighted_gradient_exponential_value(grid2000):
    # |u_r|^p r^(-2a) r^(n-1) = 4 r^6 for n=12, p=2, a=1.5: integral 4/7
    sol = exact_exponential(12.0, 2.0)
    prof = sol.sample(grid2000)
    value, implied = weighted_gradient_integral(prof, 1.5)
    ref = 2.0**2 / (12.0 - 2.0 - 2.0 * 1.5)
    assert abs(value - ref) < 1e-7
    factor = 11.0 - 0.25 * 1.0
    grad = 4.0 / 10.0
    assert abs(implied - ref * factor / grad) < 1e-5


def test_weighted_gradient_zero_gradient():
    grid = make_grid(1e-6, 200)
    flat = RadialProfile(
        grid=grid, n=3.0, p=2.0, u=np.ones(grid.size), w=np.zeros(grid.size)
    )
    value, implied = weighted_gradient_integral(flat, 1.2)
    assert value == 0.0 and implied == 0.0
