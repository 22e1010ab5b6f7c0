"""Command-line front end: evaluate, verify, tabulate.

Deterministic and scriptable: every run is reproducible from its flags, the
output embeds the full configuration in '#'-prefixed metadata lines, and
numbers carry 17 significant digits so doubles round-trip exactly.

Exit codes: 0 success, 1 verification failure, 2 invalid input,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, averaging, case_studies, greens, kernels, oracles, sphere_kernel
from .specfun import unit_sphere_area

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _parse_grid(text: str) -> list[float]:
    """Grids come as 'a,b,c' or 'start:stop:step' (stop inclusive)."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid {text!r} must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0.0 or stop < start:
            raise ValueError(f"grid {text!r} must have step > 0 and stop >= start")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(count)]
    return [float(p) for p in text.split(",") if p.strip()]


def _parse_int_grid(text: str) -> list[int]:
    return [int(round(v)) for v in _parse_grid(text)]


def _build_kernel(args) -> kernels.RadialKernel:
    if getattr(args, "kernel_file", None):
        if args.nu is None:
            raise ValueError("--nu is required with --kernel-file")
        with open(args.kernel_file) as fh:
            return kernels.kernel_from_table(args.n, args.nu, fh,
                                             eps_gap=args.eps_gap,
                                             name=args.kernel_file)
    spec = getattr(args, "kernel", None) or "ball"
    name, _, paramtext = spec.partition(":")
    params = {}
    for item in paramtext.split(","):
        if not item.strip():
            continue
        key, _, val = item.partition("=")
        if not val:
            raise ValueError(f"kernel parameter {item!r} must be key=value")
        params[key.strip()] = float(val)
    if name == "ball":
        return kernels.ball_kernel(args.n)
    if name == "power":
        return kernels.power_kernel(args.n, params.get("nu", 0.5), params.get("p", 2.0))
    if name == "gap":
        return kernels.gap_kernel(args.n, params.get("nu", 0.5), params.get("eps", 0.25))
    if name == "sphere-limit":
        return case_studies.sphere_limit_kernel(args.n, int(params.get("k", 10)))
    if name == "exp3d":
        if args.n != 3:
            raise ValueError("kernel exp3d is three-dimensional; use --n 3")
        return case_studies.exp_kernel(params.get("alpha", 1.0))
    if name == "bessel2d":
        if args.n != 2:
            raise ValueError("kernel bessel2d is two-dimensional; use --n 2")
        return case_studies.bessel_cutoff_kernel(params.get("alpha", 20.0))
    raise ValueError(f"unknown kernel {name!r}; choose ball, power, gap, "
                     "sphere-limit, exp3d or bessel2d")


class _Output:
    def __init__(self, path):
        self.path = path
        self.lines = []

    def meta(self, text):
        self.lines.append(f"# {text}")

    def row(self, values):
        self.lines.append(",".join(_fmt(v) for v in values))

    def header(self, names):
        self.lines.append(",".join(names))

    def flush(self):
        text = "\n".join(self.lines) + "\n"
        if self.path:
            try:
                with open(self.path, "w") as fh:
                    fh.write(text)
            except OSError as exc:
                raise ValueError(f"cannot write output path {self.path!r}: {exc}") from exc
        else:
            sys.stdout.write(text)


def _emit_config(out: _Output, args):
    out.meta(f"qlgreen {__version__}")
    pairs = []
    for key in sorted(vars(args)):
        if key in ("func",):
            continue
        pairs.append(f"{key}={getattr(args, key)!r}")
    out.meta("config " + " ".join(pairs))


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

def _cmd_eval(args) -> int:
    out = _Output(args.output)
    _emit_config(out, args)
    target = args.target
    if target == "green":
        out.header(["n", "r", "lam", "value"])
        for r in _parse_grid(args.r):
            out.row([args.n, r, args.lam,
                     greens.fundamental_solution_scaled(args.n, r, args.lam)])
    elif target == "kernel-k":
        out.header(["n", "r", "s", "t", "region", "value"])
        for r in _parse_grid(args.r):
            region = sphere_kernel.classify(r, args.s, args.t).value
            val = sphere_kernel.double_sphere_average(args.n, r, args.s, args.t)
            out.lines.append(",".join([_fmt(args.n), _fmt(r), _fmt(args.s),
                                       _fmt(args.t), region, _fmt(val)]))
    elif target == "averaged":
        kernel = _build_kernel(args)
        out.header(["n", "kernel", "r", "value", "error_bound"])
        for r in _parse_grid(args.r):
            est = averaging.averaged_green(kernel, r, tol=args.tol)
            out.lines.append(",".join([_fmt(args.n), kernel.name, _fmt(r),
                                       _fmt(est.value), _fmt(est.error_bound)]))
    elif target == "phi-psi":
        out.header(["alpha", "phi", "psi"])
        for a in _parse_grid(args.alpha):
            out.row([a, case_studies.exp_family_origin_value(a),
                     case_studies.exp_family_origin_laplacian(a)])
    elif target == "theta":
        out.header(["j", "alpha", "theta", "part_tail", "part_transition", "part_core"])
        for a in _parse_grid(args.alpha):
            total, parts = case_studies.renorm_functional(args.j, a, tol=args.tol)
            out.row([args.j, a, total, parts[0], parts[1], parts[2]])
    elif target == "profile-f":
        kernel = _build_kernel(args)
        out.header(["n", "kernel", "r", "f"])
        for r in _parse_grid(args.r):
            val = averaging.deformed_profile(kernel, r, tol=args.tol)
            out.lines.append(",".join([_fmt(args.n), kernel.name, _fmt(r), _fmt(val)]))
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown eval target {target!r}")
    out.flush()
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _check(name, residual, bound, report):
    ok = residual <= bound
    report.append((name, residual, bound, ok))
    return ok


def _verify_gluing(args, report):
    rng = oracles.rng_stream(args.seed, 101)
    ok = True
    for n in ([args.n] if args.n else range(2, 9)):
        for _ in range(args.trials):
            s, t = rng.uniform(0.05, 0.5, 2)
            inner, outer = sphere_kernel.gluing_residuals(n, s, t)
            ok &= _check(f"gluing n={n} inner", abs(inner), 1e-9, report)
            ok &= _check(f"gluing n={n} outer", abs(outer), 1e-9, report)
        inner, outer = sphere_kernel.gluing_residuals(n, 0.25, 0.25)
        ok &= _check(f"gluing n={n} equal-radii inner", abs(inner), 1e-9, report)
    return ok


def _verify_monotonicity(args, report):
    rng = oracles.rng_stream(args.seed, 102)
    ok = True
    for n in ([args.n] if args.n else (1, 2, 3, 5)):
        s, t = rng.uniform(0.05, 0.6, 2)
        grid = np.linspace(0.0, t + s + 0.5, 200)
        vals = [sphere_kernel.double_sphere_average(n, float(r), s, t) for r in grid]
        worst = max(np.diff(vals).max(), 0.0)
        ok &= _check(f"monotone n={n} s={s:.3f} t={t:.3f}", worst, 1e-12, report)
    return ok


def _verify_i1_i2(args, report):
    rng = oracles.rng_stream(args.seed, 103)
    ok = True
    for n in (1, 3, 4, 5):
        a0, b0, c0 = rng.uniform(0.2, 2.0, 3)
        nu = rng.uniform(0.5, 1.5)
        w = lambda x, a0=a0, b0=b0, c0=c0: a0 + b0 * np.asarray(x) + c0 * np.asarray(x) ** 2
        kern = kernels.kernel_from_callable(n, nu, w, name=f"poly(n={n})")
        v1 = averaging.origin_value_direct(kern)
        v2 = averaging.origin_value_flux(kern)
        ok &= _check(f"value-at-zero n={n}", abs(v1 - v2), 1e-7 * (1 + abs(v1)), report)
    return ok


def _verify_oracle_mc(args, report):
    rng = oracles.rng_stream(args.seed, 104)
    ok = True
    for n in range(1, 7):
        for i in range(args.trials):
            r, s, t = rng.uniform(0.05, 1.0, 3)
            est = oracles.mc_double_sphere_average(n, r, s, t, args.samples,
                                                   args.seed, stream=10 * n + i)
            closed = sphere_kernel.double_sphere_average(n, r, s, t)
            ok &= _check(f"mc n={n} ({r:.2f},{s:.2f},{t:.2f})",
                         abs(closed - est.value), 3.0 * est.error, report)
    return ok


def _verify_endpoints(args, report):
    rng = oracles.rng_stream(args.seed, 105)
    ok = True
    for n in (1, 3, 4):
        a0, b0 = rng.uniform(0.3, 1.5, 2)
        w = lambda x, a0=a0, b0=b0: a0 + b0 * np.asarray(x)
        kern = kernels.kernel_from_callable(n, 0.75, w, name=f"lin(n={n})")
        d0 = averaging.averaged_green_derivative(kern, 0.0)
        d1 = averaging.averaged_green_derivative(kern, 1.0)
        want = -1.0 / unit_sphere_area(n)
        ok &= _check(f"derivative at 0, n={n}", abs(d0), 1e-7, report)
        ok &= _check(f"derivative at 1, n={n}", abs(d1 - want), 1e-7, report)
        lap0 = averaging.laplacian_at_zero(kern)
        prof0 = averaging.laplacian_profile(kern, 0.0, tol=1e-9)
        ok &= _check(f"laplacian at 0, n={n}", abs(lap0 - prof0), 1e-7, report)
        ok &= _check(f"laplacian beyond 1, n={n}",
                     abs(averaging.laplacian_profile(kern, 1.2)), 1e-12, report)
    return ok


def _verify_case_3d(args, report):
    ok = True
    alpha_c = case_studies.exp_family_laplacian_minimizer()
    ok &= _check("alpha_c - 3.72", abs(alpha_c - 3.72), 0.01, report)
    for a in (-5.0, 1.0, 3.72, 10.0):
        for r in (0.25, 0.75):
            closed = case_studies.exp_family_green(a, r)
            quad = averaging.averaged_green(case_studies.exp_kernel(a), r, tol=1e-8).value
            ok &= _check(f"exp closed vs quad a={a} r={r}", abs(closed - quad), 1e-6, report)
    phis = [case_studies.exp_family_origin_value(a) for a in np.linspace(-10, 20, 50)]
    ok &= _check("phi strictly decreasing", float(np.max(np.diff(phis))), 0.0, report)
    return ok


def _verify_case_2d(args, report):
    ok = True
    for a in (5.0, 20.0, 100.0):
        u0 = case_studies.kernel_fourier_profile(a, 0.0)
        ok &= _check(f"fourier profile at 0, alpha={a}", abs(u0 - 1.0), 1e-8, report)
    ok &= _check("fourier profile tail alpha=100 t=2",
                 abs(case_studies.kernel_fourier_profile(100.0, 2.0)), 0.05, report)
    kern = case_studies.bessel_cutoff_kernel(20.0)
    total = unit_sphere_area(2) * kern.partial_integral(0.5)
    ok &= _check("bessel kernel normalization", abs(total - 1.0), 1e-8, report)
    return ok


_VERIFY_SUITES = {
    "gluing": _verify_gluing,
    "monotonicity": _verify_monotonicity,
    "i1-i2": _verify_i1_i2,
    "oracle-mc": _verify_oracle_mc,
    "endpoints": _verify_endpoints,
    "case-3d": _verify_case_3d,
    "case-2d": _verify_case_2d,
}


def _cmd_verify(args) -> int:
    suites = list(_VERIFY_SUITES) if args.suite == "all" else [args.suite]
    report = []
    all_ok = True
    for suite in suites:
        all_ok &= _VERIFY_SUITES[suite](args, report)
    width = max(len(name) for name, *_ in report)
    for name, residual, bound, ok in report:
        status = "pass" if ok else "FAIL"
        print(f"{status}  {name:<{width}}  residual={residual:.3e}  bound={bound:.3e}")
    print(f"{'pass' if all_ok else 'FAIL'}: {sum(ok for *_, ok in report)}/{len(report)} checks")
    return EXIT_OK if all_ok else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------

def _cmd_table(args) -> int:
    out = _Output(args.output)
    _emit_config(out, args)
    if args.target == "phi-psi":
        header, rows = case_studies.phi_psi_table(_parse_grid(args.alphas))
    elif args.target == "theta":
        header, rows = case_studies.theta_table(args.j, _parse_grid(args.alphas), args.tol)
    elif args.target == "sphere-limit":
        header, rows = case_studies.sphere_limit_table(args.n, _parse_int_grid(args.ks))
    elif args.target == "profile":
        header, rows = case_studies.exp_profile_table(args.alpha, _parse_grid(args.rs))
    else:  # pragma: no cover
        raise ValueError(f"unknown table target {args.target!r}")
    out.header(header)
    for row in rows:
        out.row(row)
    out.flush()
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlgreen",
        description="Averaged fundamental solutions of the Laplace operator: "
                    "evaluate closed forms, verify them against brute-force "
                    "oracles, and emit plot-ready CSV tables.")
    parser.add_argument("--version", action="version", version=f"qlgreen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate a quantity on a grid")
    pe.add_argument("target", choices=["green", "kernel-k", "averaged",
                                       "phi-psi", "theta", "profile-f"])
    pe.add_argument("--n", type=int, default=3)
    pe.add_argument("--r", default="0.5", help="radius grid: a,b,c or start:stop:step")
    pe.add_argument("--s", type=float, default=0.25)
    pe.add_argument("--t", type=float, default=0.25)
    pe.add_argument("--lam", type=float, default=1.0)
    pe.add_argument("--alpha", default="1.0", help="alpha grid")
    pe.add_argument("--j", type=int, default=1)
    pe.add_argument("--tol", type=float, default=1e-8)
    pe.add_argument("--kernel", default="ball",
                    help="ball | power:nu=..,p=.. | gap:nu=..,eps=.. | "
                         "sphere-limit:k=.. | exp3d:alpha=.. | bessel2d:alpha=..")
    pe.add_argument("--kernel-file", help="two-column (t, w) text file")
    pe.add_argument("--nu", type=float, help="exponent parameter for --kernel-file")
    pe.add_argument("--eps-gap", type=float)
    pe.add_argument("--output", help="CSV path (default stdout)")
    pe.set_defaults(func=_cmd_eval)

    pv = sub.add_parser("verify", help="run a named invariant suite")
    pv.add_argument("suite", choices=[*_VERIFY_SUITES, "all"])
    pv.add_argument("--n", type=int)
    pv.add_argument("--trials", type=int, default=3)
    pv.add_argument("--samples", type=int, default=200_000)
    pv.add_argument("--seed", type=int, default=20240801)
    pv.set_defaults(func=_cmd_verify)

    pt = sub.add_parser("table", help="write a CSV sweep")
    pt.add_argument("target", choices=["phi-psi", "theta", "sphere-limit", "profile"])
    pt.add_argument("--n", type=int, default=3)
    pt.add_argument("--j", type=int, default=1)
    pt.add_argument("--alpha", type=float, default=1.0)
    pt.add_argument("--alphas", default="1:10:1")
    pt.add_argument("--ks", default="10,100,1000")
    pt.add_argument("--rs", default="0:1.5:0.05")
    pt.add_argument("--tol", type=float, default=1e-6)
    pt.add_argument("--output", help="CSV path (default stdout)")
    pt.set_defaults(func=_cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, 0 on --help
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except oracles.QuadratureError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def entry() -> None:  # console-script wrapper
    sys.exit(main())
