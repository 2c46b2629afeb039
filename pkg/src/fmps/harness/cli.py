"""Command-line interface: ``fmps <subcommand> [options]``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 bound violation
(only with ``--strict``).
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import sys

from ..entropy import entropy_profile, fidelity
from ..exceptions import FmpsError
from ..funcgrid import GRIDS, FunctionSpec, discretize
from ..mps import TruncationPolicy, from_state_vector, poly_to_mps, truncate
from ..polyapprox import fit_chebyshev
from .persist import load_mps, save_mps
from .report import report_bounds
from .sweep import SweepConfig, parse_n_range, read_rows, run_sweep, rows_to_csv, rows_to_json

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BOUND = 0, 1, 2, 3

log = logging.getLogger("fmps")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_options() -> argparse.ArgumentParser:
    # SUPPRESS lets the flags appear before or after the subcommand
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (default 0)")
    g.add_argument("--out", default=argparse.SUPPRESS, help="output file (default stdout)")
    g.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS)
    g.add_argument("--strict", action="store_true", default=argparse.SUPPRESS,
                   help="exit with status 3 when a bound is violated")
    g.add_argument("--config", default=argparse.SUPPRESS, help="key = value config file")
    g.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    g.add_argument("--grid", choices=GRIDS, default=argparse.SUPPRESS)
    g.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
    return p


def _state_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("function", nargs="?", help="function spec, e.g. gaussian:mu=0,sigma=1@-4:4")
    p.add_argument("-N", "--n-qubits", type=int, help="number of qubits")
    p.add_argument("--mps", help="load the state from a saved MPS file instead")


def _sweep_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--functions", nargs="+", help="function specs")
    p.add_argument("--n-range", help="N values: lo:hi[:step], lo..hi or a comma list")
    p.add_argument("--chi", help="comma-separated truncation ranks (default 2)")
    p.add_argument("--delta", type=float, help="overlap error for the entropy bound (default 0.01)")
    p.add_argument("--dense-cap", type=int, help="largest N using dense spectra (default 16)")
    p.add_argument("--timing", action="store_true", default=None, help="add a runtime_ms column")


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = _Parser(prog="fmps", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("discretize", parents=[common], help="sample and normalize a function")
    p.add_argument("function")
    p.add_argument("-N", "--n-qubits", type=int, required=True)

    p = sub.add_parser("encode", parents=[common], help="encode a function as an MPS")
    p.add_argument("function")
    p.add_argument("-N", "--n-qubits", type=int, required=True)
    p.add_argument("--degree", type=int, help="build from a Chebyshev fit of this degree")

    p = sub.add_parser("entropy", parents=[common], help="entanglement entropy at every cut")
    _state_source(p)

    p = sub.add_parser("truncate", parents=[common], help="rank-capped MPS approximation")
    _state_source(p)
    p.add_argument("--chi", type=int, required=True)

    p = sub.add_parser("sweep", parents=[common], help="scaling sweep over functions and N")
    _sweep_options(p)

    p = sub.add_parser("bounds", parents=[common], help="check every bound and print a report")
    p.add_argument("--input", help="sweep CSV to report on (otherwise a sweep is run)")
    _sweep_options(p)
    return parser


def _load_config(path: str) -> dict:
    cp = configparser.ConfigParser()
    try:
        with open(path, encoding="utf-8") as fh:
            cp.read_string("[fmps]\n" + fh.read())
    except configparser.Error as exc:
        raise UsageError(f"bad config file {path}: {exc}") from exc
    return {k.replace("-", "_"): v for k, v in cp["fmps"].items()}


def _settings(args) -> dict:
    """Merge config-file values under command-line flags."""
    cfg = _load_config(args.config) if getattr(args, "config", None) else {}
    merged = dict(cfg)
    for key, value in vars(args).items():
        if value is not None:
            merged[key] = value
    return merged


def _sweep_config(s: dict) -> SweepConfig:
    functions = s.get("functions")
    if isinstance(functions, str):
        functions = functions.split()
    if not functions or not s.get("n_range"):
        raise UsageError("sweep needs --functions and --n-range (flags or config)")
    chi = s.get("chi", "2")
    return SweepConfig(
        functions=tuple(functions),
        n_values=parse_n_range(str(s["n_range"])),
        chi_list=tuple(int(c) for c in str(chi).split(",")),
        delta=float(s.get("delta", 0.01)),
        seed=int(s.get("seed", 0)),
        dense_cap=int(s.get("dense_cap", 16)),
        workers=int(s.get("workers", 1)),
        grid=s.get("grid", "dyadic"),
        timing=str(s.get("timing", "false")).lower() in ("1", "true", "yes"),
    )


def _emit(text: str, s: dict) -> None:
    out = s.get("out")
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(header, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    lines = [",".join(header)] + [",".join(format(v, ".17g") if isinstance(v, float) else str(v) for v in r)
                                  for r in rows]
    return "\n".join(lines) + "\n"


def _load_state(s: dict):
    if s.get("mps"):
        return load_mps(s["mps"])
    if not s.get("function") or not s.get("n_qubits"):
        raise UsageError("give a function spec with -N, or --mps FILE")
    spec = FunctionSpec.parse(s["function"])
    return from_state_vector(discretize(spec, None, s["n_qubits"], grid=s.get("grid", "dyadic")))


def _run(args) -> int:
    s = _settings(args)
    fmt = s.get("format", "csv")
    grid = s.get("grid", "dyadic")
    cmd = args.command

    if cmd == "discretize":
        state = discretize(FunctionSpec.parse(s["function"]), None, s["n_qubits"], grid=grid)
        rows = list(zip(range(len(state)), state.x.tolist(), state.values.tolist()))
        _emit(_table(["index", "x", "value"], rows, fmt), s)
        return EXIT_OK

    if cmd == "encode":
        spec = FunctionSpec.parse(s["function"])
        if s.get("degree") is not None:
            poly = fit_chebyshev(spec, None, s["degree"])
            mps = poly_to_mps(poly, s["n_qubits"], grid=grid)
        else:
            mps = from_state_vector(discretize(spec, None, s["n_qubits"], grid=grid))
        summary = {"N": mps.n_qubits, "bond_dims": mps.bond_dims, "canonical": mps.canonical}
        if s.get("out"):
            save_mps(mps, s["out"])
            summary["path"] = s["out"]
        sys.stdout.write(json.dumps(summary) + "\n")
        return EXIT_OK

    if cmd == "entropy":
        mps = _load_state(s)
        prof = entropy_profile(mps)
        rows = [(k, e, r) for k, e, r in prof.per_cut]
        text = _table(["cut", "entropy_bits", "rank"], rows, fmt)
        _emit(text, s)
        log.info("s_max=%.6g at cut %d", prof.s_max, prof.argmax_cut)
        return EXIT_OK

    if cmd == "truncate":
        mps = _load_state(s)
        approx = truncate(mps, TruncationPolicy(chi_max=s["chi"]))
        summary = {
            "N": approx.n_qubits,
            "chi_max": s["chi"],
            "bond_dims": approx.bond_dims,
            "fidelity": fidelity(mps.scaled(1.0 / mps.norm()), approx),
            "discarded_weight": approx.discarded_weight,
        }
        if s.get("out"):
            save_mps(approx, s["out"])
            summary["path"] = s["out"]
        sys.stdout.write(json.dumps(summary) + "\n")
        return EXIT_OK

    if cmd == "sweep":
        config = _sweep_config(s)
        rows = run_sweep(config)
        _emit(rows_to_json(rows, config) if fmt == "json" else rows_to_csv(rows, config), s)
        violated = any(r.theorem1_pass is False for r in rows if r.smooth)
        return EXIT_BOUND if s.get("strict") and violated else EXIT_OK

    if cmd == "bounds":
        if s.get("input"):
            rows = read_rows(s["input"])
        else:
            rows = run_sweep(_sweep_config(s))
        report = report_bounds(rows, seed=int(s.get("seed", 0)), delta=float(s.get("delta", 0.01)))
        sys.stdout.write(report.to_text())
        if s.get("out"):
            with open(s["out"], "w", encoding="utf-8", newline="") as fh:
                fh.write(report.to_json() if fmt == "json" else report.to_csv())
        return EXIT_BOUND if s.get("strict") and not report.passed else EXIT_OK

    raise UsageError(f"unknown command {cmd}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    verbosity = getattr(args, "verbose", 0) or 0
    logging.basicConfig(level=logging.WARNING - 10 * min(verbosity, 2), format="%(levelname)s %(message)s")
    try:
        return _run(args)
    except UsageError as exc:
        print(f"fmps: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FmpsError, ValueError, OSError) as exc:
        print(f"fmps: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
