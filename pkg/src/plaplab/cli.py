"""Command-line surface: config ingestion, report serialization, sweeps.

Configuration is a flat INI-style file ([section] headers, key = value
lines); sweeps need dozens of parameters, so positional flags alone would
not do.  Any key can be overridden on the command line (the flag wins).
Unknown keys are hard errors: silent typos have ruined enough parameter
studies.

Every JSON report carries the schema version, tool version, and the full
resolved configuration, so each number is reproducible from the report
alone.  Profile CSVs use 17-significant-digit decimals: lossless binary64
round-trips without committing to a binary format.

Exit codes: 0 success; 2 usage/config errors; 3 mathematical outcomes
(divergence or failed verification where success was required); 4 internal
assertion failures.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .core import (
    ConsistencyError,
    EvaluationError,
    Exponential,
    ParameterError,
    Power,
    ProblemSpec,
    RadialGrid,
    RadialProfile,
    Tabulated,
    make_grid,
)
from .estimates import (
    check_regularity_bounds,
    integrability_threshold,
    singularity_exponent_fit,
)
from .exponents import exponent_report, m_cs, q_exponent
from .oracle import exact_exponential, exact_power, ode_residual
from .solver import (
    BlowUpError,
    BracketingError,
    Divergence,
    IterationControls,
    bifurcation_curve,
    extremal_profile,
    lambda_star_estimate,
    minimal_iterate,
)
from .stability import (
    PowerCutoff,
    SineModes,
    hardy_inequality_check,
    reaction_free_identity,
    random_eta_family,
    stability_report,
)


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

_SCHEMA: dict[str, dict[str, tuple[str, type]]] = {
    "problem": {
        "n": ("2.0", float),
        "p": ("2.0", float),
        "nonlinearity": ("exponential", str),  # exponential | power | tabulated
        "m": ("5.0", float),
        "lambda": ("1.0", float),
        "tabulated_file": ("", str),
    },
    "grid": {
        "r_min": ("1e-8", float),
        "nodes": ("2000", int),
    },
    "solver": {
        "tol_abs": ("1e-11", float),
        "tol_rel": ("1e-10", float),
        "u_max": ("1e6", float),
        "k_max": ("10000", int),
        "tol_lambda": ("1e-3", float),
        "lambda_init": ("1.0", float),
        "lambda_cap": ("1e8", float),
    },
    "stability": {
        "r_trunc": ("1e-6", float),
        "n_eig": ("500", int),
        "tol_eig": ("1e-8", float),
    },
    "estimates": {
        "q_values": ("", str),  # comma-separated extra q's to report
    },
    "output": {
        "directory": ("plaplab-out", str),
    },
    "sweep": {
        "task": ("lambda-star", str),
        "p_values": ("", str),
        "n_values": ("", str),
    },
}


@dataclass
class RunConfig:
    values: dict

    def __getitem__(self, pair):
        section, key = pair
        return self.values[section][key]

    def as_dict(self) -> dict:
        return {s: dict(kv) for s, kv in self.values.items()}


def load_config(path: str | None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then the config file, then command-line overrides."""
    values = {s: {k: conv(d) for k, (d, conv) in keys.items()} for s, keys in _SCHEMA.items()}
    if path:
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise ConfigError(f"config file not found: {path}")
        for section in parser.sections():
            if section not in _SCHEMA:
                raise ConfigError(f"unknown config section [{section}]")
            for key, raw in parser.items(section):
                if key not in _SCHEMA[section]:
                    raise ConfigError(f"unknown config key '{key}' in [{section}]")
                conv = _SCHEMA[section][key][1]
                try:
                    values[section][key] = conv(raw)
                except ValueError as exc:
                    raise ConfigError(f"bad value for [{section}] {key}: {raw}") from exc
    for (section, key), val in (overrides or {}).items():
        if val is None:
            continue
        values[section][key] = _SCHEMA[section][key][1](val)
    return RunConfig(values)


def _float_list(raw: str) -> list[float]:
    return [float(tok) for tok in raw.replace(",", " ").split()]


def _nonlinearity(cfg: RunConfig):
    kind = cfg["problem", "nonlinearity"].lower()
    if kind == "exponential":
        return Exponential(1.0)
    if kind == "power":
        return Power(cfg["problem", "m"], 1.0)
    if kind == "tabulated":
        path = cfg["problem", "tabulated_file"]
        if not path:
            raise ConfigError("tabulated nonlinearity needs tabulated_file")
        rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return Tabulated(tuple(rows[:, 0]), tuple(rows[:, 1]), tuple(rows[:, 2]))
    raise ConfigError(f"unknown nonlinearity kind: {kind}")


def _problem(cfg: RunConfig) -> ProblemSpec:
    return ProblemSpec(cfg["problem", "n"], cfg["problem", "p"], _nonlinearity(cfg))


def _grid(cfg: RunConfig) -> RadialGrid:
    return make_grid(cfg["grid", "r_min"], cfg["grid", "nodes"])


def _controls(cfg: RunConfig) -> IterationControls:
    return IterationControls(
        tol_abs=cfg["solver", "tol_abs"],
        tol_rel=cfg["solver", "tol_rel"],
        u_max=cfg["solver", "u_max"],
        k_max=cfg["solver", "k_max"],
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def base_report(cfg: RunConfig, **payload) -> dict:
    report = {
        "schema": 1,
        "tool": {"name": "plaplab", "version": __version__},
        "config": cfg.as_dict(),
    }
    report.update(payload)
    return _jsonable(report)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path: Path, report: dict) -> None:
    _atomic_write(path, json.dumps(report, indent=2, sort_keys=True) + "\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_profile_csv(path: Path, profile: RadialProfile) -> None:
    lines = ["r,u,u_r,w"]
    for r, u, ur, w in zip(profile.grid.r, profile.u, profile.u_r, profile.w):
        lines.append(f"{_fmt(r)},{_fmt(u)},{_fmt(ur)},{_fmt(w)}")
    _atomic_write(path, "\n".join(lines) + "\n")


def read_profile_csv(path: Path, n: float, p: float) -> RadialProfile:
    if not Path(path).exists():
        raise ConfigError(f"profile file not found: {path}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    r = data[:, 0]
    t = np.log(r)
    dt = np.diff(t)
    if np.max(np.abs(dt - dt[0])) > 1e-9 * abs(dt[0]):
        raise ConfigError("profile grid is not log-uniform")
    grid = RadialGrid(r_min=float(r[0]), t=t, r=r, dt=float(dt[0]))
    profile = RadialProfile(grid=grid, n=n, p=p, u=data[:, 1], w=data[:, 3], check=False)
    # the stored u_r column is authoritative (bit-identical round trips);
    # re-derivation from w only validates it
    stored = data[:, 2]
    scale = np.maximum(np.abs(stored), 1e-300)
    if np.max(np.abs(stored - profile.u_r) / scale) > 1e-9:
        raise ConfigError("profile columns are inconsistent (u_r vs w)")
    object.__setattr__(profile, "u_r", stored)
    return profile


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_exponents(args, cfg: RunConfig) -> int:
    report = exponent_report(args.n, args.p)
    print(json.dumps(base_report(cfg, exponents=report.as_dict()), indent=2, sort_keys=True))
    return 0


def cmd_solve(args, cfg: RunConfig) -> int:
    out = Path(args.out or cfg["output", "directory"])
    spec = _problem(cfg)
    grid = _grid(cfg)
    lam = cfg["problem", "lambda"]
    result = minimal_iterate(spec, lam, grid, _controls(cfg))
    if isinstance(result, Divergence):
        report = base_report(
            cfg,
            outcome="divergence",
            record={
                "lambda": result.lam,
                "iterations": result.iterations,
                "sup_u": result.sup_u,
                "reason": result.reason,
            },
        )
        write_json(out / "report.json", report)
        print(json.dumps(report, indent=2, sort_keys=True))
        return 3
    gp = lambda u: lam * np.asarray(spec.nonlinearity.derivative(u), dtype=float)
    stab = stability_report(
        result,
        gp,
        r_trunc=cfg["stability", "r_trunc"],
        n_eig=cfg["stability", "n_eig"],
        tol_eig=cfg["stability", "tol_eig"],
    )
    q_values = _float_list(cfg["estimates", "q_values"])
    scaled = ProblemSpec(spec.n, spec.p, spec.nonlinearity.with_scale(lam))
    est = check_regularity_bounds(result, scaled, stab, q_values=q_values)
    report = base_report(
        cfg,
        outcome="converged",
        grid={"r_min": grid.r_min, "nodes": grid.size},
        stability=stab.as_dict(),
        estimates=est.as_dict(),
    )
    write_profile_csv(out / "profile.csv", result)
    write_json(out / "report.json", report)
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def cmd_lambda_star(args, cfg: RunConfig) -> int:
    out = Path(args.out or cfg["output", "directory"])
    spec = _problem(cfg)
    grid = _grid(cfg)
    try:
        result = lambda_star_estimate(
            spec,
            grid,
            _controls(cfg),
            tol_lambda=cfg["solver", "tol_lambda"],
            lam_init=cfg["solver", "lambda_init"],
            lam_cap=cfg["solver", "lambda_cap"],
        )
    except BracketingError as exc:
        report = base_report(cfg, outcome="no-bracket", diagnosis=str(exc))
        write_json(out / "report.json", report)
        print(json.dumps(report, indent=2, sort_keys=True))
        return 3
    report = base_report(
        cfg,
        outcome="bracketed",
        lambda_lo=result.lambda_lo,
        lambda_hi=result.lambda_hi,
        records=[
            {
                "lambda": rec.lam,
                "converged": rec.converged,
                "iterations": rec.iterations,
                "sup_norm": rec.sup_norm,
                "w1p_norm": rec.w1p_norm,
                "f_l1_norm": rec.f_l1_norm,
            }
            for rec in result.records
        ],
    )
    lines = ["lambda,converged,iterations,sup_norm,w1p_norm,f_l1_norm"]
    for rec in result.records:
        lines.append(
            f"{_fmt(rec.lam)},{int(rec.converged)},{rec.iterations},"
            f"{_fmt(rec.sup_norm)},{_fmt(rec.w1p_norm)},{_fmt(rec.f_l1_norm)}"
        )
    _atomic_write(out / "lambda_sweep.csv", "\n".join(lines) + "\n")
    write_json(out / "report.json", report)
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def cmd_bifurcate(args, cfg: RunConfig) -> int:
    out = Path(args.out or cfg["output", "directory"])
    spec = _problem(cfg)
    grid = _grid(cfg)
    centers = _float_list(args.centers)
    if not centers:
        raise ConfigError("no center values given (--centers)")
    points = bifurcation_curve(spec, centers, grid)
    lines = ["center_value,lambda,boundary_residual,converged,iterations"]
    for pt in points:
        lines.append(
            f"{_fmt(pt.center_value)},{_fmt(pt.lam)},{_fmt(pt.boundary_residual)},"
            f"{int(pt.converged)},{pt.iterations}"
        )
    _atomic_write(out / "bifurcation.csv", "\n".join(lines) + "\n")
    report = base_report(
        cfg,
        outcome="curve",
        points=[
            {
                "center_value": pt.center_value,
                "lambda": pt.lam,
                "boundary_residual": pt.boundary_residual,
                "converged": pt.converged,
            }
            for pt in points
        ],
    )
    write_json(out / "report.json", report)
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


def cmd_stability(args, cfg: RunConfig) -> int:
    out = Path(args.out or cfg["output", "directory"])
    n, p = cfg["problem", "n"], cfg["problem", "p"]
    grid = _grid(cfg)
    if args.profile:
        profile = read_profile_csv(Path(args.profile), n, p)
        lam = cfg["problem", "lambda"]
        f = _nonlinearity(cfg)
        gp = lambda u: lam * np.asarray(f.derivative(u), dtype=float)
    elif args.exact:
        if args.exact == "exponential":
            sol = exact_exponential(n, p)
        else:
            sol = exact_power(n, p, cfg["problem", "m"])
        profile = sol.sample(grid)
        gp = sol.g_prime()
    else:
        raise ConfigError("need --profile FILE or --exact {exponential,power}")
    stab = stability_report(
        profile,
        gp,
        r_trunc=cfg["stability", "r_trunc"],
        n_eig=cfg["stability", "n_eig"],
        tol_eig=cfg["stability", "tol_eig"],
    )
    report = base_report(cfg, stability=stab.as_dict())
    write_json(out / "stability.json", report)
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0


# ---------------------------------------------------------------------------
# verify scenarios
# ---------------------------------------------------------------------------


def _scenario_gelfand_disk(cfg: RunConfig, checks: list) -> None:
    spec = ProblemSpec(2.0, 2.0, Exponential(1.0))
    grid = _grid(cfg)
    res = lambda_star_estimate(spec, grid, _controls(cfg), tol_lambda=1e-3)
    checks.append(
        (
            "lambda-star brackets 2.0 within 1%",
            res.lambda_lo <= 2.0 * 1.01 and res.lambda_hi >= 2.0 * 0.99
            and (res.lambda_hi - res.lambda_lo) <= 0.02 * 2.0,
            f"[{res.lambda_lo:.6f}, {res.lambda_hi:.6f}]",
        )
    )
    prof = minimal_iterate(spec, 1.0, grid, _controls(cfg))
    gp = Exponential(1.0).derivative
    stab = stability_report(prof, gp, r_trunc=cfg["stability", "r_trunc"], n_eig=cfg["stability", "n_eig"])
    checks.append(
        ("minimal solution semi-stable", stab.verdict == "semi-stable", f"mu1={stab.mu_1:.4g}")
    )
    res_ode = ode_residual(prof, Exponential(1.0))
    lhs, rhs, rel = reaction_free_identity(prof, gp, SineModes(1, 1e-3), residual=res_ode)
    checks.append(("reaction-free identity < 1e-4", rel < 1e-4, f"rel={rel:.3e}"))
    fam = random_eta_family(np.random.default_rng(2024), cfg["stability", "r_trunc"], 20)
    hardy = hardy_inequality_check(prof, fam)
    checks.append(
        ("weighted inequality holds for 20 test functions", all(c.satisfied for c in hardy), "")
    )


def _scenario_supercritical(cfg: RunConfig, checks: list) -> None:
    spec = ProblemSpec(12.0, 2.0, Exponential(1.0))
    grid = _grid(cfg)
    res = lambda_star_estimate(spec, grid, _controls(cfg), tol_lambda=1e-3)
    checks.append(
        (
            "lambda-star brackets 20.0 within 1%",
            res.lambda_lo <= 20.0 * 1.01 and res.lambda_hi >= 20.0 * 0.99,
            f"[{res.lambda_lo:.6f}, {res.lambda_hi:.6f}]",
        )
    )
    fine = make_grid(cfg["grid", "r_min"], max(4000, cfg["grid", "nodes"]))
    sol = exact_exponential(12.0, 2.0)
    resid = ode_residual(sol.sample(fine), sol.nonlinearity())
    checks.append(("closed-form residual < 1e-8", resid < 1e-8, f"{resid:.3e}"))
    for n_test, expect in ((8.0, "unstable"), (12.0, "semi-stable")):
        s = exact_exponential(n_test, 2.0)
        rep = stability_report(s.sample(grid), s.g_prime(), n_eig=cfg["stability", "n_eig"])
        checks.append(
            (f"exact solution n={n_test:g} is {expect}", rep.verdict == expect, f"mu1={rep.mu_1:.4g}")
        )


def _scenario_power_critical(cfg: RunConfig, checks: list) -> None:
    mc = m_cs(15.0, 2.0)
    sol = exact_power(15.0, 2.0, mc)
    fine = make_grid(cfg["grid", "r_min"], max(4000, cfg["grid", "nodes"]))
    resid = ode_residual(sol.sample(fine), sol.nonlinearity())
    checks.append(("closed-form residual < 1e-8", resid < 1e-8, f"{resid:.3e}"))
    grid = _grid(cfg)
    prof = sol.sample(grid)
    slope, _ = singularity_exponent_fit(prof, (max(10 * grid.r_min, 1e-5), 0.01))
    target = -(15.0 - 2.0 * math.sqrt(14.0) - 4.0) / 2.0
    checks.append(
        ("singularity slope matches within 1e-3", abs(slope - target) < 1e-3, f"{slope:.6f} vs {target:.6f}")
    )
    thr = integrability_threshold(prof, "u_r", 2.0, 12.0)
    q1 = q_exponent(15.0, 2.0, 1)
    checks.append(
        (
            "gradient integrability threshold within 2%",
            abs(thr - q1) / q1 < 0.02,
            f"{thr:.4f} vs {q1:.4f}",
        )
    )


_SCENARIOS = {
    "gelfand-disk": _scenario_gelfand_disk,
    "supercritical-exp": _scenario_supercritical,
    "power-critical": _scenario_power_critical,
}


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.scenario not in _SCENARIOS:
        raise ConfigError(
            f"unknown scenario '{args.scenario}'; choose from {sorted(_SCENARIOS)}"
        )
    checks: list[tuple[str, bool, str]] = []
    _SCENARIOS[args.scenario](cfg, checks)
    all_ok = True
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        all_ok &= ok
        suffix = f" ({detail})" if detail else ""
        print(f"{status} {args.scenario}: {name}{suffix}")
    if args.out or cfg["output", "directory"]:
        out = Path(args.out or cfg["output", "directory"])
        report = base_report(
            cfg,
            scenario=args.scenario,
            checks=[{"name": n, "passed": bool(o), "detail": d} for n, o, d in checks],
            passed=bool(all_ok),
        )
        write_json(out / f"verify_{args.scenario}.json", report)
    return 0 if all_ok else 3


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _sweep_point(payload):
    cfg_values, n_val, p_val, out_dir = payload
    cfg = RunConfig(cfg_values)
    spec = ProblemSpec(n_val, p_val, _nonlinearity(cfg))
    grid = _grid(cfg)
    try:
        res = lambda_star_estimate(
            spec,
            grid,
            _controls(cfg),
            tol_lambda=cfg["solver", "tol_lambda"],
            lam_init=cfg["solver", "lambda_init"],
            lam_cap=cfg["solver", "lambda_cap"],
        )
        payload = {
            "outcome": "bracketed",
            "n": n_val,
            "p": p_val,
            "lambda_lo": res.lambda_lo,
            "lambda_hi": res.lambda_hi,
        }
        status = "ok"
    except (BracketingError, ParameterError) as exc:
        payload = {"outcome": "error", "n": n_val, "p": p_val, "diagnosis": str(exc)}
        status = "error"
    report = base_report(cfg, **payload)
    write_json(Path(out_dir) / "report.json", report)
    return status, payload


def cmd_sweep(args, cfg: RunConfig) -> int:
    out = Path(args.out or cfg["output", "directory"])
    task = cfg["sweep", "task"]
    if task != "lambda-star":
        raise ConfigError(f"unsupported sweep task: {task}")
    p_values = _float_list(cfg["sweep", "p_values"])
    n_values = _float_list(cfg["sweep", "n_values"])
    if not p_values and not n_values:
        raise ConfigError("sweep grid is empty: set p_values and/or n_values")
    p_values = p_values or [cfg["problem", "p"]]
    n_values = n_values or [cfg["problem", "n"]]

    points = []
    for n_val in n_values:
        for p_val in p_values:
            name = f"n{n_val:g}_p{p_val:g}"
            points.append((name, n_val, p_val, out / name))

    jobs = []
    rows = {}
    for name, n_val, p_val, pdir in points:
        report_path = pdir / "report.json"
        if report_path.exists() and not args.force:
            cached = json.loads(report_path.read_text())
            rows[name] = (
                "cached" if cached.get("outcome") == "bracketed" else "error",
                cached,
            )
        else:
            jobs.append((cfg.values, n_val, p_val, str(pdir)))

    if jobs:
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_sweep_point, jobs))
        else:
            results = [_sweep_point(job) for job in jobs]
        for (cfg_values, n_val, p_val, pdir), (status, payload) in zip(jobs, results):
            rows[f"n{n_val:g}_p{p_val:g}"] = (status, payload)

    lines = ["point,n,p,status,lambda_lo,lambda_hi"]
    for name, n_val, p_val, pdir in points:
        status, payload = rows[name]
        body = payload if "n" in payload else payload.get("config", {})
        lo = payload.get("lambda_lo", "")
        hi = payload.get("lambda_hi", "")
        lo_s = _fmt(lo) if lo != "" else ""
        hi_s = _fmt(hi) if hi != "" else ""
        status_s = "ok" if status == "cached" else status
        lines.append(f"{name},{_fmt(n_val)},{_fmt(p_val)},{status_s},{lo_s},{hi_s}")
    _atomic_write(out / "index.csv", "\n".join(lines) + "\n")
    print(f"sweep complete: {len(points)} points, index at {out / 'index.csv'}")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plaplab",
        description="Radial reaction problems for the p-Laplacian on the unit "
        "ball: minimal solutions, parameter brackets, stability, and "
        "sharp-regularity checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None, metavar="PATH")
    parser.add_argument("--out", default=None, metavar="DIR")
    parser.add_argument("--jobs", type=int, default=1, metavar="N")
    parser.add_argument("--force", action="store_true")
    parser.add_argument("--no-color", action="store_true", help="plain output (default)")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("exponents", help="closed-form exponents and regime")
    s.add_argument("--n", type=float, required=True)
    s.add_argument("--p", type=float, required=True)
    s.set_defaults(func=cmd_exponents)

    s = sub.add_parser("solve", help="minimal solution at fixed lambda")
    s.add_argument("--n", type=float, default=None)
    s.add_argument("--p", type=float, default=None)
    s.add_argument("--lam", type=float, default=None, dest="lam")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("lambda-star", help="bracket the extremal parameter")
    s.add_argument("--n", type=float, default=None)
    s.add_argument("--p", type=float, default=None)
    s.set_defaults(func=cmd_lambda_star)

    s = sub.add_parser("bifurcate", help="parameter vs center-value curve")
    s.add_argument("--n", type=float, default=None)
    s.add_argument("--p", type=float, default=None)
    s.add_argument("--centers", default="", metavar="M1,M2,...")
    s.set_defaults(func=cmd_bifurcate)

    s = sub.add_parser("stability", help="semi-stability report for a profile")
    s.add_argument("--n", type=float, default=None)
    s.add_argument("--p", type=float, default=None)
    s.add_argument("--profile", default=None, metavar="CSV")
    s.add_argument("--exact", default=None, choices=["exponential", "power"])
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("verify", help="consolidated scenario checks")
    s.add_argument("--scenario", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="parameter-grid sweep with index")
    s.set_defaults(func=cmd_sweep)

    return parser


def _overrides(args) -> dict:
    pairs = {}
    for attr, target in (
        ("n", ("problem", "n")),
        ("p", ("problem", "p")),
        ("lam", ("problem", "lambda")),
    ):
        if hasattr(args, attr) and getattr(args, attr) is not None:
            pairs[target] = getattr(args, attr)
    return pairs


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, _overrides(args))
        return args.func(args, cfg)
    except (ConfigError, ParameterError, EvaluationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BracketingError, BlowUpError) as exc:
        print(f"outcome: {exc}", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"internal assertion failed: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
