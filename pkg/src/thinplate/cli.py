"""Batch front door: eigenvalue tables, solution CSVs, verification, sweeps.

Exit codes: 0 success, 1 config error, 2 domain error, 3 convergence error,
4 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import planar, solver, spectrum, transverse
from .config import RunConfig, load_config
from .errors import ConfigError, ConvergenceError, DomainError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3
EXIT_VERIFY = 4


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write(path: str | None, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_eigs(rc: RunConfig, out: str | None, quiet: bool) -> int:
    p = spectrum.RobinParams(a=rc.a, h=rc.h)
    spec = spectrum.build_spectrum(p, rc.M, rc.eig_tol)
    if p.asymptotic_valid:
        lo33, hi33 = spectrum.alpha1_bounds(p)
    else:
        lo33 = hi33 = float("nan")
    lines = ["m,alpha,bracket_lo,bracket_hi,residual,lemma33_lo,lemma33_hi,ratio_to_sqrt_2a_over_h"]
    ref = math.sqrt(2.0 * rc.a / rc.h)
    for m in range(1, spec.M + 1):
        alpha = spec.alpha(m)
        lo, hi = spec.brackets[m - 1]
        res = spectrum.eigen_residual(alpha, p)
        row = [m, alpha, lo, hi, res,
               lo33 if m == 1 else float("nan"),
               hi33 if m == 1 else float("nan"),
               alpha / ref]
        lines.append(",".join(str(v) if isinstance(v, int) else _fmt(v) for v in row))
    _write(out, lines)
    return EXIT_OK


def cmd_solve(rc: RunConfig, out: str | None, quiet: bool) -> int:
    cfg = rc.plate_config()
    sol = solver.PlateSolver(cfg, M=rc.M, K=rc.K, eig_tol=rc.eig_tol, quad_order=rc.quad_order)
    cert_h = solver.error_certificate  # raises DomainError when a*h > 1/3
    lines = [
        "x1,x2,x3,t,value_full,value_reduced,diff,certificate_19h3,truncation_slack,bound_satisfied"
    ]
    for x1, x2, x3, t in sol.sample_grid(rc.grid_nx, rc.grid_ny, rc.eval_times, rc.t_end):
        s = sol.sample(x1, x2, x3, t)
        diff = s.value_full - s.value_reduced
        cert_main = cert_h(cfg, t)
        ok = 1 if abs(diff) <= s.certificate else 0
        lines.append(",".join([
            _fmt(x1), _fmt(x2), _fmt(x3), _fmt(t),
            _fmt(s.value_full), _fmt(s.value_reduced), _fmt(diff),
            _fmt(cert_main), _fmt(s.truncation_slack), str(ok),
        ]))
    _write(out, lines)
    return EXIT_OK


def _verify_checks(rc: RunConfig):
    """Yield (name, measured, allowed) triples; a check passes iff
    measured <= allowed."""
    p = spectrum.RobinParams(a=rc.a, h=rc.h)
    spec = spectrum.build_spectrum(p, rc.M, rc.eig_tol)
    kern = transverse.TransverseKernel(spectrum=spec)

    res_ratio = max(
        abs(spectrum.eigen_residual(spec.alpha(m), p)) / (rc.eig_tol * (spec.alpha(m) ** 2 + rc.a**2))
        for m in range(1, spec.M + 1)
    )
    yield "eigen_residual_ratio", res_ratio, 1.0

    worst = 0.0
    for m in range(1, spec.M + 1):
        lo, hi = spec.brackets[m - 1]
        worst = max(worst, lo - spec.alpha(m), spec.alpha(m) - hi)
    yield "bracket_containment", worst, 0.0

    if p.asymptotic_valid:
        lo, hi = spectrum.alpha1_bounds(p)
        yield "lemma33_sandwich", max(lo - spec.alpha(1), spec.alpha(1) - hi), 0.0

    zs = np.linspace(0.0, 1.0, 101)[1:]
    tans = np.tan(zs)
    vio = max(np.max(zs + zs**3 / 3 - tans), np.max(tans - zs - 2 * zs**3 / 3))
    yield "tan_inequality", float(vio), 0.0

    grid = np.linspace(0.0, rc.h, 50)
    ratio = 0.0
    for dt in (0.0, 0.01, 0.1, 1.0):
        lead = transverse.p1_leading(kern, dt)
        bound = transverse.p1_deviation_bound(kern, dt) if p.asymptotic_valid else None
        if bound is None:
            break
        dev = max(
            abs(transverse.pm_term(kern, 1, z, w, dt) - lead) for z in grid for w in grid
        )
        ratio = max(ratio, dev / bound)
    if p.asymptotic_valid:
        yield "p1_deviation_grid", ratio, 1.0

    dom = 0.0
    small = np.linspace(0.0, rc.h, 20)
    for m in range(1, min(6, spec.M) + 1):
        for dt in (0.0, 0.01, 0.1):
            sup = transverse.pm_sup_bound(kern, m, dt)
            if sup == 0.0:
                # both the bound and the mode underflowed to zero
                continue
            val = max(abs(transverse.pm_term(kern, m, z, w, dt)) for z in small for w in small)
            dom = max(dom, val / sup)
    yield "pm_sup_domination", dom, 1.0

    ms = planar.planar_modes(rc.L1, rc.L2, rc.K)
    ones = planar.project_source(planar.UniformField(1.0), ms, rc.quad_order)
    mass_err = max(
        abs(planar.semigroup_apply(ones, ms, dt, (0.3 * rc.L1, 0.7 * rc.L2)) - 1.0)
        for dt in (0.0, 0.1, 1.0, 10.0)
    )
    yield "planar_mass", mass_err, 1e-13

    x1, w1 = planar._gauss_grid(rc.L1, rc.quad_order)
    x2, w2 = planar._gauss_grid(rc.L2, rc.quad_order)
    c1, c2 = ms.eval_axes(x1, x2)
    phi = np.einsum("ki,kj->kij", c1, c2).reshape(ms.K, -1)
    wts = np.outer(w1, w2).ravel()
    gram = phi @ (phi * wts[None, :]).T
    yield "gram_identity", float(np.max(np.abs(gram - np.eye(ms.K)))), 1e-10

    lam = ms.lam
    comp = np.max(np.abs(np.exp(-lam * 0.3) * np.exp(-lam * 0.45) - np.exp(-lam * 0.75)))
    yield "semigroup_law", float(comp), 1e-15

    prof = solver.static_state(rc.a, rc.h, rc.T0, rc.T1)
    scale = max(abs(rc.T0), abs(rc.T1), 1.0)
    r1 = abs(prof.c1 - rc.a * (prof.c0 - rc.T1))
    r2 = abs(prof.c1 - rc.a * (rc.T0 - prof.c0 - prof.c1 * rc.h))
    yield "static_state_residual", max(r1, r2) / scale, 1e-14

    if p.asymptotic_valid:
        cfg0 = rc.plate_config()
        if cfg0.source is not None:
            sol = solver.PlateSolver(cfg0, M=rc.M, K=rc.K, eig_tol=rc.eig_tol,
                                     quad_order=rc.quad_order)
            worst_ratio = 0.0
            for x1_, x2_, x3_, t_ in sol.sample_grid(rc.grid_nx, rc.grid_ny, rc.eval_times, rc.t_end):
                s = sol.sample(x1_, x2_, x3_, t_)
                worst_ratio = max(worst_ratio, abs(s.value_full - s.value_reduced) / s.certificate)
            yield "reduced_model_bound", worst_ratio, 1.0

            slack = sol.full_truncation_bound(rc.t_end) + sol.reduced_truncation_bound()
            yield "slack_fraction", slack / solver.error_certificate(cfg0, rc.t_end), 0.01

        ccfg = solver.PlateConfig(
            L1=rc.L1, L2=rc.L2, robin=p, T0=rc.T0, T1=rc.T1,
            source=solver.constant_source(1.0, rc.t_end),
        )
        csol = solver.PlateSolver(ccfg, M=rc.M, K=4, eig_tol=rc.eig_tol, quad_order=rc.quad_order)
        a1 = csol.spectrum.alpha(1)
        t = rc.t_end
        expect = (1.0 / rc.a) * (1.0 - math.exp(-a1 * a1 * t))
        got = csol.reduced_solution(0.25 * rc.L1, 0.5 * rc.L2, 0.0, t) - csol.profile(0.0)
        yield "constant_source_closed_form", abs(got - expect), 1e-10

    zcfg = solver.PlateConfig(L1=rc.L1, L2=rc.L2, robin=p, T0=rc.T0, T1=rc.T1, source=None)
    zsol = solver.PlateSolver(zcfg, M=min(rc.M, 4), K=4, eig_tol=rc.eig_tol)
    full0, slack0 = zsol.full_solution(0.3, 0.3, 0.5 * rc.h, 0.7 * rc.t_end)
    zero_dev = abs(full0 - zsol.profile(0.5 * rc.h)) + slack0
    yield "zero_source_fixed_point", zero_dev, 0.0


def cmd_verify(rc: RunConfig, out: str | None, quiet: bool) -> int:
    lines = []
    failed = 0
    for name, measured, allowed in _verify_checks(rc):
        ok = measured <= allowed
        failed += 0 if ok else 1
        lines.append(f"{'PASS' if ok else 'FAIL'} {name} measured={measured:.6e} allowed={allowed:.6e}")
    lines.append(f"{'OK' if failed == 0 else 'FAILED'}: {failed} failing check(s)")
    _write(out, lines)
    return EXIT_OK if failed == 0 else EXIT_VERIFY


def cmd_sweep(rc: RunConfig, out: str | None, quiet: bool) -> int:
    hs = rc.sweep_h_values()
    if rc.a * max(hs) > 1.0 / 3.0:
        raise DomainError(f"sweep requires a*h <= 1/3 at the largest h; got {rc.a * max(hs)}")
    rows = []
    for h in hs:
        cfg = rc.plate_config(h=h)
        sol = solver.PlateSolver(cfg, M=rc.M, K=rc.K, eig_tol=rc.eig_tol, quad_order=rc.quad_order)
        a1 = sol.spectrum.alpha(1)
        ratio = a1 * math.sqrt(h / (2.0 * rc.a))
        max_diff = 0.0
        for x1, x2, x3, t in sol.sample_grid(rc.grid_nx, rc.grid_ny, rc.eval_times, rc.t_end):
            s = sol.sample(x1, x2, x3, t)
            max_diff = max(max_diff, abs(s.value_full - s.value_reduced))
        cert = solver.error_certificate(cfg, rc.t_end)
        rows.append((h, a1, ratio, max_diff, cert))
    slope = float("nan")
    if len(rows) >= 2:
        logs_h = np.log([r[0] for r in rows])
        logs_d = np.log([max(r[3], 1e-300) for r in rows])
        slope = float(np.polyfit(logs_h, logs_d, 1)[0])
    lines = ["h,alpha1,ratio,max_diff_full_vs_reduced,certificate,slope"]
    for h, a1, ratio, max_diff, cert in rows:
        lines.append(",".join(map(_fmt, (h, a1, ratio, max_diff, cert, slope))))
    _write(out, lines)
    return EXIT_OK


# ---------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="thinplate",
        description="Spectral thin-plate heat solver with certified error bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("eigs", cmd_eigs),
        ("solve", cmd_solve),
        ("verify", cmd_verify),
        ("sweep", cmd_sweep),
    ):
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=None, help="key = value configuration file")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--quiet", action="store_true")
        sp.set_defaults(fn=fn)
    args = parser.parse_args(argv)
    try:
        rc = load_config(args.config)
        return args.fn(rc, args.out, args.quiet)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    raise SystemExit(main())
