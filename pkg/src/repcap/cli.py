"""``repcap`` command line: scalar queries by flags, simulations by JSON config.

Exit status: 0 on success, 2 on a usage error, 1 when a computation fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import reporting
from .channels import blahut_arimoto_capacity, read_channel_csv
from .collapse import collapse_report, read_embeddings_csv
from .embedding import EmbeddingSpace, effective_support_audit, feasibility_report, representation_rate
from .errors import InvalidInputs, RepcapError
from .probability import read_matrix_csv
from .rate_distortion import DistortionMeasure, read_distortion_csv, rd_curve
from .simulations import EXPERIMENTS, ExperimentConfig, report_curve, simulate
from .sources import IidSource, entropy_rate, read_source_csv
from .typicality import enumerate_typical_set


class UsageError(Exception):
    pass


def _finish(args, subcommand, payload, inputs, config, seed=None, extra_files=None) -> None:
    text = reporting.canonical_json(payload)
    if args.out is None and not extra_files:
        sys.stdout.write(text)
        return
    files = {}
    if args.out is not None:
        files[args.out] = text
    files.update(extra_files or {})
    reporting.emit(subcommand, config, seed, inputs, files)
    if args.out is None:
        sys.stdout.write(text)


# ------------------------------------------------------------------ commands

def cmd_entropy(args):
    source = read_source_csv(args.source, markov=args.markov)
    payload = {"entropy_rate_bits": entropy_rate(source), "alphabet_size": source.alphabet.size,
               "kind": "markov" if args.markov else "iid"}
    if args.markov:
        payload["stationary"] = source.stationary.probs
    _finish(args, "entropy", payload, {"source": args.source}, {"markov": args.markov})


def cmd_typical_set(args):
    source = read_source_csv(args.source, markov=args.markov)
    typ = enumerate_typical_set(source, args.n, args.epsilon)
    summary = {"n": args.n, "epsilon": args.epsilon, "entropy_rate_bits": typ.source_entropy_rate,
               **typ.bounds()}
    config = {"n": args.n, "epsilon": args.epsilon, "markov": args.markov}
    if args.out is None:
        sys.stdout.write(reporting.canonical_json(summary))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sequence", "log2_prob"])
    symbols = source.alphabet.symbols
    sep = "" if all(len(str(s)) == 1 for s in symbols) else " "
    for seq, lp in zip(typ.members, typ.log2_probs):
        w.writerow([sep.join(str(symbols[i]) for i in seq), f"{lp:.12g}"])
    summary_path = args.summary or args.out + ".summary.json"
    reporting.emit("typical-set", config, None, {"source": args.source},
                   {args.out: buf.getvalue(), summary_path: reporting.canonical_json(summary)})
    sys.stdout.write(reporting.canonical_json(summary))


def cmd_capacity(args):
    channel = read_channel_csv(args.channel)
    inputs = {"channel": args.channel}
    cost = None
    if args.cost is not None:
        if args.budget is None:
            raise UsageError("--cost needs --budget")
        inputs["cost"] = args.cost
        cost = _read_cost(args.cost)
    res = blahut_arimoto_capacity(channel, tol=args.tol, cost=cost, budget=args.budget)
    payload = {"capacity": res.capacity_bits, "optimal_input": res.optimal_input.probs,
               "input_symbols": list(channel.input_alphabet.symbols), "iterations": res.iterations,
               "residual": res.residual, "lower_bound": res.lower_bound, "upper_bound": res.upper_bound,
               "multiplier": res.multiplier, "expected_cost": res.expected_cost}
    _finish(args, "capacity", payload, inputs, {"tol": args.tol, "budget": args.budget})


def _read_cost(path):
    """Per-input costs as ``symbol,cost`` rows, or an input-by-output matrix."""
    with open(path, newline="") as fh:
        header = next(csv.reader(fh))
    if [h.strip() for h in header] == ["symbol", "cost"]:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        return np.array([float(r[1]) for r in rows if r])
    return read_matrix_csv(path)[2]


def cmd_rd_curve(args):
    source = read_source_csv(args.source)
    measure = read_distortion_csv(args.distortion) if args.distortion else DistortionMeasure.hamming(
        source.alphabet.size)
    points = rd_curve(source.pmf, measure, args.points, tol=args.tol)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["distortion", "rate", "slope"])
    for pt in points:
        w.writerow([f"{pt.distortion:.12g}", f"{pt.rate:.12g}", f"{pt.slope:.12g}"])
    inputs = {"source": args.source}
    if args.distortion:
        inputs["distortion"] = args.distortion
    config = {"points": args.points, "tol": args.tol}
    if args.out is None:
        sys.stdout.write(buf.getvalue())
        return
    reporting.emit("rd-curve", config, None, inputs, {args.out: buf.getvalue()})


def cmd_rate(args):
    space = EmbeddingSpace(args.q, args.bits)
    rate = representation_rate(space, args.n)
    if args.entropy is None and args.format == "text":
        print(f"{rate:.12g}")
        return
    payload = {"rate": rate, "capacity_bits": space.capacity_bits}
    if args.entropy is not None:
        checks = feasibility_report(space, args.n, args.entropy, args.channel_information)
        payload["checks"] = {k: {"holds": c.holds, "lhs": c.lhs, "rhs": c.rhs, "relation": c.relation,
                                 "margin": c.margin} for k, c in checks.items()}
    _finish(args, "rate", payload, {}, {"q": args.q, "bits": args.bits, "n": args.n})


def cmd_audit_support(args):
    with open(args.embeddings, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        z = [i for i, h in enumerate(header) if h.startswith("z_")]
        if not z:
            raise InvalidInputs("embedding CSV has no z_* columns")
        rows = [[float(r[i]) for i in z] for r in reader if r]
    audit = effective_support_audit(rows, EmbeddingSpace(len(z), 1) if args.q is None else EmbeddingSpace(args.q, 1))
    payload = {"distinct_nonzero_count": audit.distinct_nonzero_count, "q_tilde": audit.q_tilde, "q": audit.q,
               "rows": len(rows)}
    _finish(args, "audit-support", payload, {"embeddings": args.embeddings}, {"q": args.q})


def cmd_collapse_audit(args):
    data = read_embeddings_csv(args.embeddings)
    payload = collapse_report(data, tol=args.tol)
    _finish(args, "collapse-audit", payload, {"embeddings": args.embeddings}, {"tol": args.tol})


def cmd_simulate(args):
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {args.config} is not valid JSON: {exc}") from None
    raw["theorem"] = args.theorem
    for key in ("seed", "n", "trials", "epsilon"):
        if getattr(args, key) is not None:
            raw[key] = getattr(args, key)
    config = ExperimentConfig.from_dict(raw)
    workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
    report = simulate(config, workers=workers)
    files = {}
    if args.csv:
        files[args.csv] = reporting.curve_csv(report_curve(report))
    _finish(args, "simulate", report, {"config": args.config}, config.to_dict(), config.seed, files)


# ------------------------------------------------------------------ parser

def _u64(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="repcap", description="Representation-rate calculators and simulators.")
    sub = p.add_subparsers(dest="command", required=True, metavar="SUBCOMMAND")

    s = sub.add_parser("entropy", help="entropy rate of an i.i.d. or Markov source")
    s.add_argument("--source", required=True)
    s.add_argument("--markov", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_entropy)

    s = sub.add_parser("typical-set", help="enumerate the typical set at small n")
    s.add_argument("--source", required=True)
    s.add_argument("--markov", action="store_true")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--epsilon", type=_positive_float, required=True)
    s.add_argument("--out")
    s.add_argument("--summary", help="summary JSON path (default: OUT.summary.json)")
    s.set_defaults(func=cmd_typical_set)

    s = sub.add_parser("capacity", help="channel capacity by Blahut-Arimoto")
    s.add_argument("--channel", required=True)
    s.add_argument("--tol", type=_positive_float, default=1e-9)
    s.add_argument("--cost")
    s.add_argument("--budget", type=float)
    s.add_argument("--out")
    s.set_defaults(func=cmd_capacity)

    s = sub.add_parser("rd-curve", help="rate-distortion curve samples")
    s.add_argument("--source", required=True)
    s.add_argument("--distortion")
    s.add_argument("--points", type=_positive_int, default=33)
    s.add_argument("--tol", type=_positive_float, default=1e-10)
    s.add_argument("--out")
    s.set_defaults(func=cmd_rd_curve)

    s = sub.add_parser("rate", help="representation rate q*b/n")
    s.add_argument("--q", type=_positive_int, required=True)
    s.add_argument("--bits", type=_positive_int, required=True)
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--entropy", type=float, help="source entropy rate for feasibility checks")
    s.add_argument("--channel-information", type=float)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--out")
    s.set_defaults(func=cmd_rate)

    s = sub.add_parser("audit-support", help="effective support of an embedding dump")
    s.add_argument("--embeddings", required=True)
    s.add_argument("--q", type=_positive_int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_audit_support)

    s = sub.add_parser("collapse-audit", help="class-collapse diagnostics")
    s.add_argument("--embeddings", required=True)
    s.add_argument("--tol", type=_positive_float, default=1e-6)
    s.add_argument("--out")
    s.set_defaults(func=cmd_collapse_audit)

    s = sub.add_parser("simulate", help="Monte Carlo experiments thm3..thm7")
    s.add_argument("theorem", choices=EXPERIMENTS)
    s.add_argument("--config", required=True)
    s.add_argument("--out")
    s.add_argument("--csv")
    s.add_argument("--workers", type=_positive_int)
    s.add_argument("--seed", type=_u64)
    s.add_argument("--n", type=_positive_int)
    s.add_argument("--trials", type=_positive_int)
    s.add_argument("--epsilon", type=_positive_float)
    s.set_defaults(func=cmd_simulate)
    p._subparsers_by_name = sub.choices
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except UsageError as exc:
        sub = parser._subparsers_by_name[args.command]
        print(f"repcap {args.command}: error: {exc}", file=sys.stderr)
        sub.print_usage(sys.stderr)
        return 2
    except (RepcapError, OSError, ValueError) as exc:
        print(f"repcap {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
