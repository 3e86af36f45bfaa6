"""Command line: ``directent {fig1,scatter,simulate,estimate,check-bound}``.

Exit codes: 0 success, 1 check failure, 2 usage or config error,
3 numerical-integrity error.

Every command that writes ``--out PATH`` also writes ``PATH.config.json``
holding the fully resolved configuration. CSV floats carry 12 significant
digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .errors import NumericalIntegrityError

log = logging.getLogger("directent")

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --- output helpers --------------------------------------------------------


def fmt(x: Any) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(obj: Any) -> str:
    def clean(o):
        if isinstance(o, float) and not math.isfinite(o):
            return None if math.isnan(o) else ("inf" if o > 0 else "-inf")
        if isinstance(o, dict):
            return {str(k): clean(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [clean(v) for v in o]
        return o

    return json.dumps(clean(obj), indent=2, sort_keys=True) + "\n"


def write_output(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")


def sibling(out: Path, suffix: str) -> Path:
    return out.with_name(out.name + suffix) if not out.suffix else out.with_suffix(suffix)


def write_sidecar(command: str, resolved: dict, out: Path | None) -> None:
    log.info("resolved config: %s", json.dumps({"command": command, **resolved}, sort_keys=True))
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        sidecar = out.with_name(out.name + ".config.json")
        sidecar.write_text(json_text({"command": command, "version": __version__, **resolved}), encoding="utf-8")


# --- config resolution -----------------------------------------------------


def load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return data


def resolve(args: argparse.Namespace, file_cfg: dict, defaults: dict) -> dict:
    """Flags beat file values, file values beat defaults."""
    out = {}
    for key, default in defaults.items():
        flag = getattr(args, key, None)
        out[key] = flag if flag is not None else file_cfg.get(key, default)
    return out


def parse_float_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad number list {text!r}") from exc


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise UsageError(msg)


# --- commands --------------------------------------------------------------


def cmd_fig1(args: argparse.Namespace) -> int:
    from .estimator import ExponentChoice, sweep_fig1

    cfg = resolve(args, load_config_file(args.config), {
        "beta": 0.85, "alpha": "0.75,0.8,0.85", "sqrt_vm": 0.8,
        "n_min": 10, "n_max": 500, "n_step": 5,
    })
    alphas = parse_float_list(cfg["alpha"])
    beta, sqrt_vm = float(cfg["beta"]), float(cfg["sqrt_vm"])
    n_min, n_max, n_step = int(cfg["n_min"]), int(cfg["n_max"]), int(cfg["n_step"])
    _require(0 < sqrt_vm <= 1, f"sqrt_vm={sqrt_vm} must lie in (0, 1]")
    _require(n_min >= 4 and n_max >= n_min and n_step >= 1, f"bad N grid {n_min}..{n_max} step {n_step}")
    _require(bool(alphas), "alpha list is empty")
    try:
        choices = [ExponentChoice(a, beta) for a in alphas]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cfg["alpha"] = alphas
    out = Path(args.out) if args.out else None
    write_sidecar("fig1", cfg, out)

    table = sweep_fig1(choices, sqrt_vm**2, range(n_min, n_max + 1, n_step))
    rows = [
        (p.N, p.alpha, p.K, p.r, p.E, p.log10_E, p.C_bar)
        for choice in choices
        for p in table[choice]
    ]
    write_output(csv_text(("N", "alpha", "K", "r", "E", "log10_E", "C_bar"), rows), out)
    return EXIT_OK


SCATTER_HEADER = ("K", "r", "C_bar", "E", "log10_E")


def cmd_scatter(args: argparse.Namespace) -> int:
    from .estimator import pareto_frontier, scatter_all

    cfg = resolve(args, load_config_file(args.config), {"N": None, "sqrt_vm": 0.8, "e_max": None})
    _require(cfg["N"] is not None, "scatter needs --N")
    N, sqrt_vm = int(cfg["N"]), float(cfg["sqrt_vm"])
    _require(N >= 4, f"N={N} must be at least 4")
    _require(0 < sqrt_vm <= 1, f"sqrt_vm={sqrt_vm} must lie in (0, 1]")
    e_max = None if cfg["e_max"] is None else float(cfg["e_max"])
    _require(e_max is None or e_max > 0, "e_max must be positive")
    out = Path(args.out) if args.out else None
    write_sidecar("scatter", cfg, out)

    pts = scatter_all(N, sqrt_vm**2)
    write_output(csv_text(SCATTER_HEADER, [(p.K, p.r, p.C_bar, p.E, p.log10_E) for p in pts]), out)
    if e_max is None:
        return EXIT_OK

    res = pareto_frontier(pts, e_max)
    front = csv_text(SCATTER_HEADER, [(p.K, p.r, p.C_bar, p.E, p.log10_E) for p in res.frontier])
    best = {"N": N, "sqrt_vm": sqrt_vm, "E_max": e_max, "feasible": res.feasible,
            "best": None if res.best is None else res.best.__dict__}
    if not res.feasible:
        sys.stderr.write(f"directent scatter: warning: no (K, r) at N={N} reaches E <= {e_max:g}; frontier is empty\n")
    if out is None:
        sys.stderr.write("# frontier\n" + front + json_text(best))
    else:
        sibling(out, ".frontier.csv").write_text(front, encoding="utf-8")
        sibling(out, ".best.json").write_text(json_text(best), encoding="utf-8")
    return EXIT_OK


PAIRING_NAMES = {"single": "single_pair_per_run", "matching": "disjoint_matching",
                 "single_pair_per_run": "single_pair_per_run", "disjoint_matching": "disjoint_matching"}


def cmd_simulate(args: argparse.Namespace) -> int:
    from .protocol import ProtocolConfig, analytic_mean, model_from_config, run_protocol

    _require(bool(args.config), "simulate needs --config FILE")
    file_cfg = load_config_file(args.config)
    cfg = resolve(args, file_cfg, {"model": None, "observable": "v1", "runs": 100_000,
                                   "pairing": "single", "seed": 0, "shards": 1})
    try:
        _require(isinstance(cfg["model"], dict), "config needs a 'model' object")
        model = model_from_config(cfg["model"])
        pcfg = ProtocolConfig(
            observable_label=str(cfg["observable"]).upper(),
            runs=int(cfg["runs"]),
            pairing=PAIRING_NAMES[str(cfg["pairing"])],
            seed=int(cfg["seed"]),
            shards=int(cfg["shards"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed simulate config: {exc!r}") from exc
    out = Path(args.out) if args.out else None
    write_sidecar("simulate", cfg, out)

    summary = run_protocol(model, pcfg)
    exact = analytic_mean(model, pcfg.observable_label)
    z = (summary.V_m - exact) / summary.std_error if summary.std_error > 0 and math.isfinite(summary.std_error) else None
    doc = {"model": cfg["model"], "observable": pcfg.observable_label, "runs": pcfg.runs,
           "pairing": pcfg.pairing, "seed": pcfg.seed, "N": model.N,
           **summary.to_dict(), "analytic_mean": exact, "z_score": z}
    write_output(json_text(doc), out)
    if out is not None:
        n = summary.total_pairs_measured
        rows = [(v, c, c / n if n else math.nan) for v, c in summary.outcome_counts.items()]
        sibling(out, ".hist.csv").write_text(csv_text(("outcome", "count", "frequency"), rows), encoding="utf-8")
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    from .estimator import ProtocolParams, concurrence_lower_bound

    cfg = resolve(args, load_config_file(args.config), {"vm": None, "N": None, "K": None, "r": None})
    cfg["literal"] = bool(args.literal)
    missing = [k for k in ("vm", "N", "K", "r") if cfg[k] is None]
    _require(not missing, f"estimate needs {', '.join('--' + m for m in missing)}")
    try:
        params = ProtocolParams(int(cfg["N"]), int(cfg["K"]), int(cfg["r"]))
        report = concurrence_lower_bound(float(cfg["vm"]), params, literal=cfg["literal"])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = Path(args.out) if args.out else None
    write_sidecar("estimate", cfg, out)
    write_output(json_text(report.to_dict()), out)
    return EXIT_OK


def cmd_check_bound(args: argparse.Namespace) -> int:
    from .checks import check_product_bound

    cfg = resolve(args, load_config_file(args.config), {"samples": 10_000, "seed": 0})
    samples, seed = int(cfg["samples"]), int(cfg["seed"])
    _require(samples >= 1, "samples must be at least 1")
    out = Path(args.out) if args.out else None
    write_sidecar("check-bound", cfg, out)

    report = check_product_bound(samples, seed)
    write_output(json_text(report.to_dict()), out)
    status = lambda ok: "PASS" if ok else "FAIL"  # noqa: E731
    sys.stderr.write(
        f"[{status(report.product_phase_passed)}] product states: {samples} samples, "
        f"{len(report.violations)} violations, max(rhs - lhs) = {report.max_gap:.3e}\n"
        f"[{status(report.counterexample_violates)}] counterexample: lhs = {report.counterexample_lhs:.12g}, "
        f"rhs = {', '.join(f'{k}: {v:.12g}' for k, v in report.counterexample_rhs.items())}\n"
    )
    return EXIT_OK if report.passed else EXIT_CHECK


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--config", default=None, help="JSON config file; flags override its values")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="directent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig1", parents=[common], help="E and C_bar versus N for several alpha")
    p.add_argument("--beta", type=float)
    p.add_argument("--alpha", help="comma-separated list (default 0.75,0.8,0.85)")
    p.add_argument("--sqrt-vm", dest="sqrt_vm", type=float)
    p.add_argument("--n-min", dest="n_min", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--n-step", dest="n_step", type=int)
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("scatter", parents=[common], help="C_bar and E over every (K, r) at fixed N")
    p.add_argument("--N", type=int)
    p.add_argument("--sqrt-vm", dest="sqrt_vm", type=float)
    p.add_argument("--e-max", dest="e_max", type=float)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo run of the permuted-pair protocol")
    p.add_argument("--runs", type=int)
    p.add_argument("--pairing", choices=["single", "matching"])
    p.add_argument("--observable", choices=["v1", "v2", "V1", "V2"])
    p.add_argument("--shards", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", parents=[common], help="certified bound from one measured mean")
    p.add_argument("--vm", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--literal", action="store_true", help="multiply C_min instead of sqrt(C_min)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("check-bound", parents=[common], help="bound validity on product states plus counterexample")
    p.add_argument("--samples", type=int)
    p.set_defaults(func=cmd_check_bound)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"directent {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"directent {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except NumericalIntegrityError as exc:
        sys.stderr.write(f"directent {args.command}: numerical integrity error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
