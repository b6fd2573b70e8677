"""Command-line front end.

Subcommands: ``discriminant``, ``eigs``, ``shift-scan``, ``bands``,
``asym-check``, ``inverse-check``, ``selftest``.  Potentials are read
from JSON files matching the schema of ``PotentialSpec.to_dict`` (see
docs/formats.md).  Output is CSV or JSON with a fully-resolved config
echo in the header/metadata; identical configs (and seed) produce
byte-identical files.  Exit codes: 0 success, 1 domain error (JSON
diagnostics on stderr), 2 usage error.
"""

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from . import __version__
from .asymptotics import remainder_decay_check
from .errors import CanspecError
from .inverse import (PotentialClass, classify_potential,
                      closed_form_discriminant_scalar, contrapositive_check,
                      free_dirac_discriminant, gap_vanishing_report)
from .monodromy import (DEFAULT_OPTIONS, classify_stability, discriminant,
                        discriminant_derivative, integrate_fundamental,
                        monodromy)
from .potential import PERIOD, PotentialSpec, ScalarFunction
from .prufer import find_mu, find_nu, shifted_mu_curve
from .spectra import band_edges, instability_intervals, verify_shift_extrema


def _fmt(x):
    """17-significant-digit float formatting (value round-trips exactly)."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _emit_csv(path, columns, rows, config):
    """Write CSV with a config-echo comment header; deterministic bytes."""
    lines = [f"# canspec {__version__}",
             f"# config: {json.dumps(config, sort_keys=True)}",
             ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(row[c]) for c in columns))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _emit_json(path, obj):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_potential(path):
    try:
        return PotentialSpec.load(path)
    except FileNotFoundError:
        raise CanspecError(f"potential file not found: {path}")
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CanspecError(f"invalid potential file {path}: {exc}")


def _options_from_args(args):
    opts = DEFAULT_OPTIONS
    if getattr(args, "rtol", None) is not None:
        opts = replace(opts, rtol=args.rtol)
    if getattr(args, "atol", None) is not None:
        opts = replace(opts, atol=args.atol)
    if getattr(args, "residual_tol", None) is not None:
        opts = replace(opts, residual_tol=args.residual_tol)
    return opts


def _config_echo(args, **extra):
    keep = {}
    for key, val in sorted(vars(args).items()):
        if key in ("func",) or val is None:
            continue
        keep[key.replace("_", "-")] = val
    keep.update(extra)
    return keep


def _pmap(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- subcommands -------------------------------------------------------


def _cmd_discriminant(args):
    spec = _load_potential(args.potential)
    opts = _options_from_args(args)
    lams = np.linspace(args.lambda_min, args.lambda_max, args.samples)

    def one(lam):
        m = monodromy(spec, lam, opts)
        row = {"lambda": float(lam), "delta": m.delta,
               "y11": m.y11, "y12": m.y12, "y21": m.y21, "y22": m.y22,
               "stability": classify_stability(m.delta).value}
        if args.derivative:
            row["delta_prime"] = discriminant_derivative(spec, lam, opts).value
        return row

    rows = _pmap(one, lams, args.threads)
    columns = ["lambda", "delta"]
    if args.derivative:
        columns.append("delta_prime")
    columns += ["y11", "y12", "y21", "y22", "stability"]
    _emit_csv(args.output, columns, rows, _config_echo(args))
    return 0


def _cmd_eigs(args):
    spec = _load_potential(args.potential)
    opts = _options_from_args(args)
    finder = find_mu if args.kind == "mu" else find_nu

    def one(n):
        ev = finder(spec, n, opts)
        return {"n": n, "kind": ev.kind, "value": ev.value,
                "residual": ev.residual}

    rows = _pmap(one, range(args.n_min, args.n_max + 1), args.threads)
    _emit_csv(args.output, ["n", "kind", "value", "residual"], rows,
              _config_echo(args))
    return 0


def _cmd_shift_scan(args):
    spec = _load_potential(args.potential)
    opts = _options_from_args(args)
    taus = np.arange(args.tau_samples) * (PERIOD / args.tau_samples)
    curve = shifted_mu_curve(spec, args.n, taus, opts)
    rows = [{"tau": t, "mu_n_tau": v} for t, v in curve]
    _emit_csv(args.output, ["tau", "mu_n_tau"], rows, _config_echo(args))
    return 0


def _cmd_bands(args):
    spec = _load_potential(args.potential)
    opts = _options_from_args(args)
    table = band_edges(spec, (args.k_min, args.k_max), opts)
    from .errors import IndexingViolation

    try:
        interlacing_ok = table.validate()
    except IndexingViolation:
        interlacing_ok = False

    edges = []
    for k in range(args.k_min, args.k_max + 1):
        lo, hi = table.periodic_pair(k)
        plo, phi = table.antiperiodic_pair(k)
        edges.append({"k": k,
                      "periodic": [lo, hi],
                      "antiperiodic": [plo, phi],
                      "mu_even": table.mu[2 * k], "nu_even": table.nu[2 * k],
                      "mu_odd": table.mu[2 * k - 1],
                      "nu_odd": table.nu[2 * k - 1]})
    gaps = [{"j": iv.index, "lo": iv.lo, "hi": iv.hi, "width": iv.width}
            for iv in instability_intervals(table)]

    shift_extrema = None
    if args.tau_samples:
        rep = verify_shift_extrema(spec, (args.k_min, args.k_max),
                                   args.tau_samples, opts, table=table)
        shift_extrema = {
            "tau_samples": rep.tau_samples,
            "rows": [{"k": r.k, "kind": r.kind,
                      "edge_lo": r.edge_lo, "edge_hi": r.edge_hi,
                      "curve_min": r.curve_min, "curve_max": r.curve_max,
                      "tolerance": r.tolerance, "ok_lo": r.ok_lo,
                      "ok_hi": r.ok_hi, "skipped": r.skipped, "note": r.note}
                     for r in rep.rows]}

    _emit_json(args.output, {"config": _config_echo(args), "edges": edges,
                             "gaps": gaps, "interlacing_ok": interlacing_ok,
                             "shift_extrema": shift_extrema})
    return 0


def _cmd_asym_check(args):
    spec = _load_potential(args.potential)
    opts = _options_from_args(args)
    lams = [float(x) for x in args.lambdas.split(",")]
    report = remainder_decay_check(spec, lams, opts)
    rows = [{"lambda": lam, "err_full": ef, "err_coarse": ec}
            for lam, ef, ec in zip(report.lambdas, report.err_full,
                                   report.err_coarse)]
    _emit_csv(args.output, ["lambda", "err_full", "err_coarse"], rows,
              _config_echo(args))
    summary = {"config": _config_echo(args),
               "exact": report.exact,
               "slope_full": report.slope_full,
               "slope_coarse": report.slope_coarse}
    _emit_json(args.summary, summary)
    return 0


def _cmd_inverse_check(args):
    spec = _load_potential(args.potential)
    opts = _options_from_args(args)
    result = contrapositive_check(spec, args.n_gaps, args.tol, opts)
    report = result.report

    oracle = {}
    if report.potential_class is PotentialClass.SCALAR_IDENTITY:
        p = (spec.q1 + spec.q2) * 0.5
        probe = np.linspace(-3.0, 3.0, 9)
        oracle["scalar_closed_form"] = max(
            abs(discriminant(spec, lam, opts)
                - closed_form_discriminant_scalar(p, lam)) for lam in probe)
    if (spec.is_constant and spec.is_canonical_form
            and abs(spec.q.value) < 1e-15):
        m = spec.q1.value
        probe = np.linspace(-3.0, 3.0, 9)
        oracle["free_dirac"] = max(
            abs(discriminant(spec, lam, opts) - free_dirac_discriminant(m, lam))
            for lam in probe)

    table = sorted(report.gap_widths)
    _emit_json(args.output, {
        "config": _config_echo(args),
        "verdict": result.verdict.value,
        "max_width": report.max_width,
        "max_width_index": report.max_width_index,
        "gap_table": [{"j": j, "width": report.gap_widths[j]} for j in table],
        "potential_class": report.potential_class.value,
        "anomaly": result.anomaly,
        "oracle_residuals": oracle})
    return 0


# -- selftest ----------------------------------------------------------


def _random_trigpoly_potential(rng, degree=3, scale=0.5):
    def coeffs():
        return scale * (2.0 * rng.random(degree) - 1.0)

    q1 = ScalarFunction.trigpoly(scale * (2 * rng.random() - 1),
                                 coeffs(), coeffs())
    q2 = ScalarFunction.trigpoly(scale * (2 * rng.random() - 1),
                                 coeffs(), coeffs())
    qq = ScalarFunction.trigpoly(scale * (2 * rng.random() - 1),
                                 coeffs(), coeffs())
    return PotentialSpec(q1, q2, qq)


def _cmd_selftest(args):
    import os

    opts = _options_from_args(args)
    rng = np.random.default_rng(args.seed)
    checks = []

    def record(name, value, threshold, larger_is_worse=True):
        ok = value <= threshold if larger_is_worse else bool(value)
        checks.append({"check": name, "value": float(value),
                       "threshold": float(threshold),
                       "status": "pass" if ok else "FAIL"})
        print(f"{'PASS' if ok else 'FAIL'} {name} "
              f"(value={value:.3e}, threshold={threshold:.3e})")
        return ok

    free = PotentialSpec.zero()
    worst = max(abs(discriminant(free, lam, opts) - 2.0 * math.cos(lam * PERIOD))
                for lam in np.linspace(-6.0, 6.0, 41))
    record("free-discriminant-closed-form", worst, 1e-8)

    dirac = PotentialSpec.constant(1.0, -1.0, 0.0)
    worst = max(abs(discriminant(dirac, lam, opts)
                    - free_dirac_discriminant(1.0, lam))
                for lam in np.linspace(-6.0, 6.0, 33))
    record("free-dirac-closed-form", worst, 1e-7)

    p = ScalarFunction.trigpoly(0.7, (0.4,), ())
    scal = PotentialSpec.scalar_identity(p)
    worst = max(abs(discriminant(scal, lam, opts)
                    - closed_form_discriminant_scalar(p, lam))
                for lam in np.linspace(-4.0, 4.0, 17))
    record("scalar-identity-closed-form", worst, 1e-8)

    sigma1 = PotentialSpec.constant(0.0, 0.0, 1.0)
    record("offdiag-example-delta0", abs(discriminant(sigma1, 0.0, opts)
                                         - 2.0 * math.cosh(PERIOD)), 1e-8)
    mu0 = find_mu(sigma1, 0, opts)
    nu0 = find_nu(sigma1, 0, opts)
    record("offdiag-example-mu0-nu0",
           max(abs(mu0.value), abs(nu0.value)), 1e-8)
    table = band_edges(sigma1, (0, 0), opts)
    lo, hi = table.periodic_pair(0)
    record("offdiag-example-central-gap",
           max(abs(lo + 1.0), abs(hi - 1.0)), 1e-6)

    rand = _random_trigpoly_potential(rng)
    lams = np.linspace(-5.0, 5.0, 8)
    taus = np.linspace(0.0, PERIOD, 5)[1:]
    from .potential import shift as shift_pot

    worst = max(abs(discriminant(shift_pot(rand, tau), lam, opts)
                    - discriminant(rand, lam, opts))
                for tau in taus for lam in lams)
    record("shift-invariance", worst, 1e-7)

    worst = 0.0
    for lam in np.linspace(-4.5, 4.5, 6):
        d = discriminant_derivative(rand, lam, opts)
        if max(abs(d.value), abs(d.finite_difference)) > 1e-2:
            worst = max(worst, d.relative_error)
    record("derivative-formula-vs-fd", worst, 1e-5)

    traj = integrate_fundamental(rand, 3.5, opts)
    record("det-drift", traj.det_drift, 1e-10)

    table = band_edges(rand, (-2, 2), opts)
    record("interlacing-chain", 0.0 if table.validate() else 1.0, 0.5)

    overall = all(c["status"] == "pass" for c in checks)
    outdir = args.output_dir
    os.makedirs(outdir, exist_ok=True)
    config = _config_echo(args)
    _emit_csv(os.path.join(outdir, "selftest_checks.csv"),
              ["check", "value", "threshold", "status"], checks, config)
    _emit_json(os.path.join(outdir, "selftest_summary.json"),
               {"config": config, "checks": checks,
                "overall": "pass" if overall else "FAIL"})
    print(f"selftest: {'all checks passed' if overall else 'FAILURES present'}"
          f" ({len(checks)} checks); artifacts in {outdir}")
    return 0 if overall else 1


# -- parser ------------------------------------------------------------


def _add_common(p, potential=True):
    if potential:
        p.add_argument("--potential", required=True,
                       help="JSON potential file (see docs/formats.md)")
    p.add_argument("--output", default=None,
                   help="output file (default: stdout)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap for independent evaluations")
    p.add_argument("--rtol", type=float, default=None,
                   help="integrator relative tolerance override")
    p.add_argument("--atol", type=float, default=None,
                   help="integrator absolute tolerance override")
    p.add_argument("--residual-tol", type=float, default=None,
                   help="residual-check tolerance override")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="canspec",
        description="Spectral analysis of 2x2 canonical systems with "
                    "pi-periodic potentials")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("discriminant",
                       help="sweep the discriminant over a lambda range; "
                            "CSV columns: lambda, delta[, delta_prime], "
                            "y11, y12, y21, y22, stability")
    _add_common(p)
    p.add_argument("--lambda-min", type=float, required=True)
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--derivative", action="store_true",
                   help="add the delta_prime column")
    p.set_defaults(func=_cmd_discriminant)

    p = sub.add_parser("eigs",
                       help="Dirichlet-type eigenvalues; CSV columns: "
                            "n, kind, value, residual")
    _add_common(p)
    p.add_argument("--kind", choices=("mu", "nu"), required=True)
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=_cmd_eigs)

    p = sub.add_parser("shift-scan",
                       help="mu_n of the shifted potential over a tau grid; "
                            "CSV columns: tau, mu_n_tau")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau-samples", type=int, required=True)
    p.set_defaults(func=_cmd_shift_scan)

    p = sub.add_parser("bands",
                       help="band edges, gaps and the indexing chain; JSON")
    _add_common(p)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p.add_argument("--tau-samples", type=int, default=None,
                   help="also verify shift extrema on this tau grid")
    p.set_defaults(func=_cmd_bands)

    p = sub.add_parser("asym-check",
                       help="asymptotic remainder decay; CSV columns: "
                            "lambda, err_full, err_coarse; JSON summary "
                            "with slopes")
    _add_common(p)
    p.add_argument("--lambdas", required=True,
                   help="comma-separated increasing lambda values")
    p.add_argument("--summary", default=None,
                   help="JSON summary file (default: stdout)")
    p.set_defaults(func=_cmd_asym_check)

    p = sub.add_parser("inverse-check",
                       help="gap-vanishing verdict and oracle residuals; JSON")
    _add_common(p)
    p.add_argument("--n-gaps", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=_cmd_inverse_check)

    p = sub.add_parser("selftest",
                       help="run the built-in deterministic check battery "
                            "and write artifact files")
    _add_common(p, potential=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir", default="selftest-artifacts")
    p.set_defaults(func=_cmd_selftest)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CanspecError as exc:
        sys.stderr.write(json.dumps(
            {"error": type(exc).__name__, "message": str(exc)},
            sort_keys=True) + "\n")
        return 1
    except OSError as exc:
        sys.stderr.write(json.dumps(
            {"error": "io", "message": str(exc)}, sort_keys=True) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
