"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 infeasible design or validation failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from fusedlog import designio, evaluation, pipeline
from fusedlog.config import ConfigError, RunConfig
from fusedlog.design_space import InfeasibleSpace, space_csv
from fusedlog.hw_model import FusedDesign, cost_report, fused_cost
from fusedlog.segmentation import Scheme

EXIT_USAGE, EXIT_INFEASIBLE, EXIT_IO = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _resolve_design(arg: str) -> Path:
    """A path, or the name of a bundled table such as ``table1_log``."""
    p = Path(arg)
    if p.exists():
        return p
    stem = p.name.removesuffix(".json")
    for (mode, scheme), name in designio.BUNDLED.items():
        if name.removesuffix(".json") == stem:
            return designio.bundled_path(mode, scheme)
    return p


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="\n")


def _config(args) -> RunConfig:
    scheme = Scheme(args.scheme)
    given = {k for k in ("split_threshold", "flatten_threshold", "segments", "max_iters") if getattr(args, k) is not None}
    if scheme is Scheme.FLATTENED and "split_threshold" in given:
        raise UsageError("--split-threshold applies only to --scheme recursive")
    if scheme is Scheme.RECURSIVE and given & {"flatten_threshold", "segments", "max_iters"}:
        raise UsageError("--flatten-threshold/--segments/--max-iters apply only to --scheme flattened")
    kw = dict(
        width_m=args.width_m,
        radius=args.radius,
        max_nonzero=args.max_nonzero,
        search=getattr(args, "search", "min-hw"),
        search_cap=args.search_cap,
        error_budget=getattr(args, "error_budget", None),
        rounding=args.rounding,
    )
    if args.split_threshold is not None:
        kw["split_threshold_lsb"] = args.split_threshold
    if args.flatten_threshold is not None:
        kw["flatten_threshold"] = args.flatten_threshold
    if args.segments is not None:
        kw["segments"] = args.segments
    if args.max_iters is not None:
        kw["max_iters"] = args.max_iters
    return RunConfig(**kw)


def cmd_design(args) -> int:
    config = _config(args)
    d, plan, space = pipeline.design(args.mode, args.scheme, config)
    if args.output:
        designio.save_design(d, args.output)
    if args.space_csv:
        _write(args.space_csv, space_csv(space))
    rep = evaluation.evaluate_design(d)
    cost = cost_report(d)
    print(pipeline.design_table(d))
    print(f"plan: {plan.scheme.value}, {len(plan.segments)} segments, status {plan.status}, "
          f"MQD range {plan.mqd_range:.4f} LSB")
    print(f"cost: latency {cost.latency_fa} FA, adder area {cost.adder_area_fa} FA, "
          f"shift operators {cost.shift_ops}")
    print(f"error: MHE {rep.mhe}, N+1 {rep.n_plus}, N-1 {rep.n_minus}, objective {rep.objective}")
    if rep.mhe > 1:
        print("design violates MHE <= 1", file=sys.stderr)
        return EXIT_INFEASIBLE
    return 0


def cmd_evaluate(args) -> int:
    d = designio.load_design(_resolve_design(args.design))
    rep = evaluation.evaluate_design(d)
    if args.out_dir:
        out = Path(args.out_dir)
        _write(out / "trace.csv", evaluation.trace_csv(rep))
        _write(out / "histogram.csv", evaluation.histogram_csv(rep))
        _write(out / "histogram_fine.csv", evaluation.fine_histogram_csv(rep))
        _write(out / "stats.csv", evaluation.stats_csv(rep))
    print(f"MHE {rep.mhe}")
    print(f"N+1 {rep.n_plus}")
    print(f"N-1 {rep.n_minus}")
    print(f"objective {rep.objective}")
    print(f"mean {rep.mean:.4e}")
    print(f"std {rep.std:.4e}")
    return 0


def cmd_sweep(args) -> int:
    if args.m_min > args.m_max:
        raise UsageError(f"empty m range {args.m_min}..{args.m_max}")
    if not (8 <= args.m_min and args.m_max <= 20):
        raise UsageError("m range must lie within [8, 20]")
    config = _config(args)
    rows = pipeline.sweep(args.mode, args.scheme, range(args.m_min, args.m_max + 1), config)
    buf = io.StringIO()
    fields = ["m", "min_error_total", "min_csa", "min_adders", "min_latency", "feasible"]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r[k] is None else int(r[k]) if k == "feasible" else r[k]) for k in fields})
    _write(args.output, buf.getvalue())
    return 0


def cmd_fuse(args) -> int:
    log_d = designio.load_design(_resolve_design(args.log_design))
    anti_d = designio.load_design(_resolve_design(args.antilog_design))
    try:
        fused = FusedDesign(log_d, anti_d)
    except ValueError as e:
        print(f"cannot fuse: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    fc = fused_cost(fused)
    rows = [("fused", fc.fused), ("log_only", fc.log_only), ("antilog_only", fc.antilog_only)]
    print(f"{'':<13}{'latency':>8}{'adders':>8}{'shifts':>8}{'segments':>10}")
    for name, c in rows:
        print(f"{name:<13}{c.latency_fa:>8}{c.adder_area_fa:>8}{c.shift_ops:>8}{c.segments:>10}")
    print(f"area overhead {fc.area_overhead_ratio:.4f}")
    print(f"latency overhead {fc.latency_overhead_ratio:.4f}")
    if args.output:
        meta = {"area_overhead_ratio": fc.area_overhead_ratio, "latency_overhead_ratio": fc.latency_overhead_ratio}
        _write(args.output, json.dumps(designio.fused_to_dict(fused, meta), indent=2) + "\n")
    return 0


def _add_knobs(p, search=True):
    p.add_argument("--mode", required=True, choices=["log", "antilog"])
    p.add_argument("--scheme", required=True, choices=["recursive", "flattened"])
    p.add_argument("--width-m", type=int, default=None, help="datapath width (default 14 recursive, 13 flattened)")
    p.add_argument("--split-threshold", type=float, default=None, help="recursive split threshold in LSB (1.5)")
    p.add_argument("--flatten-threshold", type=float, default=None, help="MQD spread target in LSB (0.25)")
    p.add_argument("--segments", type=int, default=None, help="segment count for flattening (8)")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--radius", type=float, default=2.0**-4, help="slope neighbourhood radius")
    p.add_argument("--max-nonzero", type=int, default=4, help="max nonzero terms incl. the integer bit")
    p.add_argument("--search-cap", type=int, default=10**6)
    p.add_argument("--rounding", choices=["truncate", "nearest"], default="truncate")
    if search:
        p.add_argument("--search", choices=["min-hw", "min-error"], default="min-hw")
        p.add_argument("--error-budget", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fusedlog", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("design", help="segment, quantise and search a converter design")
    _add_knobs(p)
    p.add_argument("-o", "--output", type=Path, help="design file to write")
    p.add_argument("--space-csv", type=Path, help="dump the candidate space")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("evaluate", help="full-domain error statistics of a design file")
    p.add_argument("design", help="design file, or a bundled table name such as table1_log")
    p.add_argument("--out-dir", type=Path, help="write trace/histogram/stats CSVs here")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="space summary per datapath width")
    _add_knobs(p, search=False)
    p.add_argument("--m-min", type=int, default=10)
    p.add_argument("--m-max", type=int, default=16)
    p.add_argument("-o", "--output", type=Path)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fuse", help="cost of sharing one datapath between two designs")
    p.add_argument("log_design")
    p.add_argument("antilog_design")
    p.add_argument("-o", "--output", type=Path, help="fused design file to write")
    p.set_defaults(func=cmd_fuse)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ConfigError) as e:
        parser.print_usage(sys.stderr)
        print(f"fusedlog: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except designio.DesignFileError as e:
        print(f"fusedlog: invalid design file: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except InfeasibleSpace as e:
        print(f"fusedlog: infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as e:
        print(f"fusedlog: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
