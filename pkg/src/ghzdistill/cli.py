"""Command-line entry point ``ghz-distill``.

Exit codes: 0 success, 1 runtime failure, 2 usage or input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from contextlib import contextmanager

import numpy as np

from . import decoder as dec
from . import denseoracle, diagclifford, replay
from .induce import Placement, Topology
from .protocol import ChannelModel, Protocol, ProtocolConfig, ProtocolError, estimate, qec_baseline
from .stabcode import CodeError, load_code

__all__ = ["main", "build_parser", "parse_p_values", "CSV_HEADER"]

CSV_HEADER = ["protocol", "code", "placement", "topology", "p", "trials", "failures",
              "p_f", "stderr", "fidelity", "seed"]


class UsageError(Exception):
    """Bad flags or unreadable input (exit code 2)."""


def parse_p_values(text: str) -> list:
    """Comma-separated values, or ``start:stop:count`` for a log-spaced sweep."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if start <= 0 or stop <= 0 or count < 1:
                raise UsageError(f"log-spaced sweep needs positive bounds and count, got {text!r}")
            values = [float(v) for v in np.geomspace(start, stop, count)]
        else:
            values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse error rates {text!r}") from None
    if not values:
        raise UsageError("no error rates given")
    for v in values:
        if not 0 <= v <= 1:
            raise UsageError(f"error rate {v} is outside [0, 1]")
    return values


def _fmt(v: float) -> str:
    return format(v, ".10g")


def _row(report) -> list:
    return [report.protocol, report.code, report.placement, report.topology, _fmt(report.p),
            str(report.trials), str(report.failures), _fmt(report.p_f), _fmt(report.stderr),
            _fmt(report.fidelity), str(report.seed)]


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="", encoding="ascii")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None
    with fh:
        yield fh


def _write_csv(reports, path):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerow(_row(r))
    with _output(path) as fh:
        fh.write(buf.getvalue())


def _load(source):
    try:
        return load_code(source)
    except FileNotFoundError as exc:
        raise UsageError(str(exc)) from None
    except CodeError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_logical_paulis(args) -> int:
    code = _load(args.code)
    if args.json:
        print(code.to_json())
        return 0
    if code.k == 0:
        print("code has no logical qubits")
        return 0
    zs, xs = code.logicals.as_strings()
    for j, (z, x) in enumerate(zip(zs, xs), start=1):
        print(f"Z{j}\t{z}")
        print(f"X{j}\t{x}")
    return 0


def cmd_solve_clifford(args) -> int:
    code = _load(args.code)
    problem = diagclifford.required_targets(code)
    solver = diagclifford.solve_kronecker if args.kronecker else diagclifford.solve
    R = solver(problem) if problem.A.shape[0] else diagclifford.clifford_for(code)
    print(R)
    print(R.gate_reading())
    return 0


def _configs(args, code):
    for p in parse_p_values(args.p):
        try:
            yield ProtocolConfig(code, args.protocol, args.placement, args.topology,
                                 ChannelModel.depolarizing(p), args.trials, args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def cmd_distill(args) -> int:
    if args.protocol == "bell" and args.topology == "split":
        raise UsageError("the split topology only applies to the GHZ protocol")
    code = _load(args.code)
    reports = [estimate(cfg, engine=args.engine, workers=args.workers) for cfg in _configs(args, code)]
    _write_csv(reports, args.out)
    return 0


def cmd_baseline(args) -> int:
    code = _load(args.code)
    if code.k == 0:
        raise UsageError("baseline needs a code with k >= 1")
    reports = [qec_baseline(code, ChannelModel.depolarizing(p), args.trials, args.seed)
               for p in parse_p_values(args.p)]
    _write_csv(reports, args.out)
    return 0


def cmd_replay(args) -> int:
    if args.table == "table1":
        run, expected = replay.table1(), replay.table1_logical_rows()
    else:
        run, expected = replay.table2(), replay.table2_logical_rows()
    sys.stdout.write(run.text())
    ok = True
    for P in expected:
        sign = run.final.deterministic_sign(P.unsigned())
        good = sign is not None and sign == P.sign
        ok &= good
        print(f"# {'ok' if good else 'MISSING'}\t{P}")
    return 0 if ok else 1


def cmd_verify(args) -> int:
    try:
        results = denseoracle.run_suite(seed=args.seed, random_n=args.random_n)
    except denseoracle.DenseSizeError as exc:
        raise UsageError(str(exc)) from None
    for r in results:
        print(r.line())
    failed = sum(not r.ok for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("seed must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ghz-distill",
        description="Stabilizer-code Bell and GHZ distillation simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("logical-paulis", help="print logical Pauli operators of a code")
    p.add_argument("--code", required=True, help="built-in code name or code file")
    p.add_argument("--json", action="store_true", help="print code metadata as JSON")
    p.set_defaults(func=cmd_logical_paulis)

    p = sub.add_parser("solve-clifford", help="diagonal Clifford for Charlie's qubits")
    p.add_argument("--code", required=True)
    p.add_argument("--kronecker", action="store_true", help="use the vectorized solver")
    p.set_defaults(func=cmd_solve_clifford)

    def sweep_flags(q):
        q.add_argument("--code", required=True)
        q.add_argument("--p", required=True, help="comma list, or start:stop:count (log-spaced)")
        q.add_argument("--trials", type=_positive_int, default=10_000)
        q.add_argument("--seed", type=_seed, default=0)
        q.add_argument("--out", default="-", help="CSV path, '-' for stdout")

    p = sub.add_parser("distill", help="Monte Carlo failure rate of a distillation protocol")
    sweep_flags(p)
    p.add_argument("--protocol", choices=[v.value for v in Protocol], default="ghz")
    p.add_argument("--placement", choices=[v.value for v in Placement], default="bob")
    p.add_argument("--topology", choices=[v.value for v in Topology], default="chain")
    p.add_argument("--engine", choices=["frame", "tableau"], default="frame")
    p.add_argument("--workers", type=_positive_int, default=None,
                   help="worker processes (default from GHZ_DISTILL_WORKERS or 1)")
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("baseline", help="logical error rate of the code on one noisy hop")
    sweep_flags(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("replay", help="step-by-step tableau transcript of a worked example")
    p.add_argument("table", choices=["table1", "table2"])
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("verify", help="dense-matrix identity checks")
    p.add_argument("--seed", type=_seed, default=2024)
    p.add_argument("--random-n", type=_positive_int, default=3,
                   help="largest qubit count for random Pauli product checks")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ghz-distill: error: {exc}", file=sys.stderr)
        return 2
    except (ProtocolError, diagclifford.CliffordInfeasible, dec.DecoderBudgetError, RuntimeError) as exc:
        print(f"ghz-distill: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
