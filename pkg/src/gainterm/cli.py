"""Command-line entry point.

    gainterm [--config FILE] [--seed N] [--out DIR] <command> ...

Commands: symbol, qplus, radon, norms, verify <suite|all>, report, config.
Exit status is 0 on success, 1 when an asserted check fails and 2 on usage,
input or configuration errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analytic import GRAMMAR_HELP, GrammarError, parse
from .collision import KernelSpec, points_csv, qplus_multi, radon_eval
from .config import Config, config_hash, load_config, to_ini
from .errors import ConfigError
from .grid import NormSpec, VelocityGrid, norm, sample_on_grid, write_gf
from .partitions import set_ramp
from .symbol import symbol_closed_form, symbol_direct, symbol_stationary

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CONFIG_HELP = """\
configuration:
  INI file with sections [grid] [symbol] [collision] [tolerance] [suite] [run].
  Tuples are comma separated. Environment variables GAINTERM_<SECTION>_<KEY>
  override the file, the file overrides the defaults, and --seed / --out
  override both. `gainterm config` prints the effective configuration.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Prints the full help text on usage errors and raises instead of exiting."""

    def error(self, message):
        self.print_help(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _vec(text: str) -> np.ndarray:
    try:
        v = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}") from None
    if v.shape != (3,):
        raise argparse.ArgumentTypeError(f"expected three components, got {text!r}")
    return v


def _points(text: str) -> np.ndarray:
    return np.array([_vec(p) for p in text.split(";") if p.strip()])


def _fn(text: str):
    try:
        return parse(text)
    except GrammarError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _stamp(cfg: Config) -> str:
    return f"gainterm {__version__} config_hash={config_hash(cfg)} seed={cfg.run.seed}"


def _write_text(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)


def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--config", default=d, help="INI configuration file")
    p.add_argument("--seed", type=int, default=d, help="override run.seed")
    p.add_argument("--out", default=d, help="override run.output_dir")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gainterm", description="Gain term of the Boltzmann collision operator: "
                "evaluation, symbols, norms and verification suites.",
                epilog=GRAMMAR_HELP + "\n" + CONFIG_HELP,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"gainterm {__version__}")
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="command")

    def cmd(name, help_):
        sp = sub.add_parser(name, help=help_, description=help_, epilog=GRAMMAR_HELP,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        _global_options(sp, suppress=True)
        return sp

    sp = cmd("symbol", "evaluate the Fourier symbol a(x, xi) of the collision geometry")
    sp.add_argument("--x", type=_vec, required=True)
    sp.add_argument("--xi", type=_vec, required=True)
    sp.add_argument("--gamma", type=float, default=0.0)
    sp.add_argument("--method", choices=("quadrature", "stationary", "closed", "both"), default="both")
    sp.add_argument("--convention", choices=("computed", "published"), default=None,
                    help="leading-order coefficients (default from config)")
    sp.add_argument("--output", help="CSV file (default stdout)")

    sp = cmd("qplus", "evaluate Q+(f, g) on the configured grid or at points")
    sp.add_argument("--f", type=_fn, required=True, help="AnalyticFn expression")
    sp.add_argument("--g", type=_fn, required=True, help="AnalyticFn expression")
    sp.add_argument("--gamma", type=float, default=0.0)
    sp.add_argument("--cutoff", choices=("full", "small", "large"), default="full")
    sp.add_argument("--points", type=_points, help="'x,y,z;x,y,z;...' (default: the grid)")
    sp.add_argument("--method", choices=("direct", "sphere", "auto"), default=None,
                    help="inner integration (default from config)")
    sp.add_argument("--check", choices=("mass",), help="compare the total mass with pi |f|_1 |g|_1")
    sp.add_argument("--output", help="GFv1 file for grid output, CSV for points (default stdout)")

    sp = cmd("radon", "evaluate the Radon-type transform T h at points")
    sp.add_argument("--h", type=_fn, required=True, help="AnalyticFn expression")
    sp.add_argument("--points", type=_points, required=True, help="'x,y,z;...', nonzero")
    sp.add_argument("--gamma", type=float, default=0.0)
    sp.add_argument("--variant", choices=("T", "T_small"), default="T")
    sp.add_argument("--output", help="CSV file (default stdout)")

    sp = cmd("norms", "Lebesgue and Sobolev norms of a sampled function")
    sp.add_argument("--f", type=_fn, required=True, help="AnalyticFn expression")
    sp.add_argument("--kind", choices=("lebesgue", "hom", "inhom"), action="append",
                    help="repeatable; default: all three")
    sp.add_argument("--p", type=float, default=2.0, help="Lebesgue exponent (inf allowed)")
    sp.add_argument("--q", type=float, default=0.0, help="polynomial weight <v>^q")
    sp.add_argument("--alpha", type=float, default=1.0, help="Sobolev order")
    sp.add_argument("--n", type=int, help="grid size (default grid.norm_n)")
    sp.add_argument("--output", help="CSV file (default stdout)")

    sp = cmd("verify", "run a verification suite and write its reports")
    sp.add_argument("suite", help="partition, geometry, stationary, identity, oracle, "
                    "estimate, region3, schur or all")
    sp.add_argument("--format", default="json",
                    help="comma separated subset of json,csv,md (default json)")
    sp.add_argument("--trials", type=int, help="override the suite's sample count")

    sp = cmd("report", "summarize an ERv1 JSON report")
    sp.add_argument("path")
    sp.add_argument("--format", choices=("md", "json", "csv"), default="md")

    cmd("config", "print the effective configuration as INI")
    return p


def _config(args) -> Config:
    cfg = load_config(args.config)
    run = {}
    if args.seed is not None:
        run["seed"] = args.seed
    if args.out is not None:
        run["output_dir"] = args.out
    cfg = cfg.replace(run=run) if run else cfg
    set_ramp(cfg.run.ramp)
    return cfg


def _cmd_symbol(args, cfg: Config) -> int:
    conv = args.convention or cfg.symbol.convention
    row = {"gamma": args.gamma}
    quad = stat = None
    if args.method in ("quadrature", "both"):
        quad = symbol_direct(args.x, args.xi, args.gamma, c=cfg.symbol.node_factor)
        row.update(lam=quad.lam, theta0=quad.theta0)
        row.update(re_quad=quad.value.real, im_quad=quad.value.imag)
    if args.method in ("stationary", "both"):
        stat = symbol_stationary(args.x, args.xi, args.gamma, cfg.symbol.lambda_min, conv)
        row.update(lam=stat.lam, theta0=stat.theta0)
        row.update(re_stat=stat.value.real, im_stat=stat.value.imag, est_error=stat.est_error)
    if args.method == "closed":
        cf = symbol_closed_form(args.x, args.xi, args.gamma)
        row.update(lam=cf.lam, theta0=cf.theta0, re_closed=cf.value.real, im_closed=cf.value.imag)
    if quad is not None and stat is not None:
        nrm = max(abs(quad.value), quad.lam ** (args.gamma - 1.0))
        row["rel_err"] = abs(quad.value - stat.value) / nrm
    head = ["x", "xi"] + list(row)
    vals = [" ".join(repr(float(t)) for t in args.x), " ".join(repr(float(t)) for t in args.xi)]
    vals += [repr(float(v)) for v in row.values()]
    _write_text(f"# {_stamp(cfg)} convention={conv}\n" + ",".join(head) + "\n"
                + ",".join(vals) + "\n", args.output)
    return EXIT_OK


def _cmd_qplus(args, cfg: Config) -> int:
    from .verify.common import quad_config
    from .verify.identities import mass_check

    if args.check == "mass":
        if args.gamma != 0.0 or args.cutoff != "full":
            raise UsageError("--check mass needs --gamma 0 and --cutoff full")
        rel, _ = mass_check(cfg, args.f, args.g, args.method)
        rel = float(rel)
        ok = rel < cfg.tolerance.mass
        print(f"# {_stamp(cfg)}")
        print(f"mass_rel_err={rel!r} tol={cfg.tolerance.mass!r} {'pass' if ok else 'FAIL'}")
        return EXIT_OK if ok else EXIT_FAIL
    grid = VelocityGrid(cfg.grid.n, cfg.grid.L)
    quad = quad_config(cfg, vstar_grid=grid, method=args.method)
    kernel = KernelSpec(args.gamma, args.cutoff)
    out = grid if args.points is None else args.points
    res = qplus_multi(args.f, args.g, out, [kernel], quad)[0]
    if args.points is not None:
        _write_text(points_csv(args.points, res, _stamp(cfg)), args.output)
        return EXIT_OK
    if args.output is None:
        raise UsageError("grid output needs --output FILE (GFv1)")
    write_gf(res, args.output, comment=f"{_stamp(cfg)} gamma={args.gamma!r} cutoff={args.cutoff} "
             f"f={args.f} g={args.g}")
    print(args.output)
    return EXIT_OK


def _cmd_radon(args, cfg: Config) -> int:
    vals = radon_eval(args.h, args.points, args.gamma, args.variant, method="auto")
    _write_text(points_csv(args.points, np.atleast_1d(vals), _stamp(cfg)), args.output)
    return EXIT_OK


def _cmd_norms(args, cfg: Config) -> int:
    grid = VelocityGrid(args.n or cfg.grid.norm_n, cfg.grid.L)
    gf = sample_on_grid(args.f, grid, cfg.collision.guard)
    kinds = args.kind or ["lebesgue", "hom", "inhom"]
    lines = [f"# {_stamp(cfg)} n={grid.n} L={grid.L!r}", "norm,value"]
    for k in kinds:
        if k == "lebesgue":
            spec, label = NormSpec.lebesgue(args.p, args.q), f"L^{args.p:g}_{args.q:g}"
        elif k == "hom":
            spec, label = NormSpec.hom(args.alpha), f"Hdot^{args.alpha:g}"
        else:
            spec, label = NormSpec.inhom(args.alpha), f"H^{args.alpha:g}"
        lines.append(f"{label},{norm(gf, spec)!r}")
    _write_text("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_verify(args, cfg: Config) -> int:
    from .verify import SUITES, emit_report, emit_timings, run_suite
    from .verify.report import FORMATS

    names = list(SUITES) if args.suite == "all" else [args.suite]
    if any(n not in SUITES for n in names):
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    fmts = [f.strip() for f in args.format.split(",") if f.strip()]
    if not fmts or any(f not in FORMATS for f in fmts):
        raise UsageError(f"--format must be a comma separated subset of {','.join(FORMATS)}")
    if args.trials is not None and args.trials < 1:
        raise UsageError("--trials must be >= 1")
    failed = False
    for name in names:
        rep = run_suite(name, cfg, args.trials)
        for f in fmts:
            emit_report(rep, f, cfg.run.output_dir)
        emit_timings(rep, cfg.run.output_dir)
        status = "pass" if rep.passed else "FAIL"
        print(f"{name}: {status}")
        for c in (rep.check(n) for n in rep.failures):
            print(f"  failed {c.name}: value={c.value!r} threshold={c.threshold!r}")
        failed |= not rep.passed
    return EXIT_FAIL if failed else EXIT_OK


def _cmd_report(args, cfg: Config) -> int:
    from .verify.report import load_report, to_csv, to_json, to_md

    try:
        rep = load_report(args.path)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read report: {exc}") from None
    sys.stdout.write({"md": to_md, "json": to_json, "csv": to_csv}[args.format](rep))
    return EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {"symbol": _cmd_symbol, "qplus": _cmd_qplus, "radon": _cmd_radon,
            "norms": _cmd_norms, "verify": _cmd_verify, "report": _cmd_report,
            "config": lambda args, cfg: (sys.stdout.write(to_ini(cfg)), EXIT_OK)[1]}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help, --version
        return int(exc.code or 0)
    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"gainterm: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"gainterm {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as exc:
        # domain, precondition, resolution and validity errors on user input
        print(f"gainterm {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
