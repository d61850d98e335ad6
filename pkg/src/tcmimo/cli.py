"""Command-line entry point: ``tcmimo <subcommand> [options]``."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import FormatError, ValidationError
from .invariants import check_scenario
from .scenario import parse_scenario
from .sweeps import SweepSpec, default_ratios, emit_table, run_sweep


def _ints(text):
    return tuple(int(v) for v in text.split(",") if v.strip())


def _words(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _common(parser):
    parser.add_argument("--config", help="scenario file of 'key = value' lines")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--seed", type=int, help="override the scenario seed")
    parser.add_argument("--threads", type=int, default=1, help="worker threads for sweep points")
    parser.add_argument("--no-timestamp", action="store_true", help="omit the timestamp metadata line")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tcmimo", description="Tightly coupled massive MIMO simulations with Chu antenna arrays."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("snr-sweep", help="beamforming SNR vs frequency for MISO links")
    _common(p)
    p.add_argument("--counts", type=_ints, default=(1, 4, 16, 64))
    p.add_argument("--orientations", type=_words, default=("colinear", "parallel"))

    p = sub.add_parser("rate-vs-ratio", help="MISO rate vs spacing-to-radius ratio")
    _common(p)
    p.add_argument("--counts", type=_ints, default=(4, 8, 16, 32, 64))
    p.add_argument("--orientations", type=_words, default=("colinear", "parallel"))
    p.add_argument("--ratio-points", type=int, default=64)

    p = sub.add_parser("heatmap", help="MIMO rate over transmit and receive sizes")
    _common(p)
    p.add_argument("--tx-counts", type=_ints, default=(4, 8, 16, 32, 64))
    p.add_argument("--rx-counts", type=_ints, default=(4, 8, 16, 32, 64))

    p = sub.add_parser("tight-coupling", help="optimum spacing-to-radius ratio report")
    _common(p)
    p.add_argument("--counts", type=_ints, default=(2, 4, 8, 16, 32, 64))
    p.add_argument("--with-rate-sweep", action="store_true", help="add the rate-maximizing ratio per N")
    p.add_argument("--ratio-points", type=int, default=64)

    p = sub.add_parser("validate", help="run the structural invariant checks on a scenario")
    _common(p)
    p.add_argument("--points", type=int, default=16, help="frequencies sampled per check")
    return parser


def _scenario(args):
    text = ""
    if args.config:
        with open(args.config) as fh:
            text = fh.read()
    scenario = parse_scenario(text)
    if args.seed is not None:
        scenario = scenario.replace(seed=args.seed)
    return scenario


def _spec(args):
    kind = {
        "snr-sweep": "snr-vs-frequency",
        "rate-vs-ratio": "rate-vs-ratio",
        "heatmap": "heatmap",
        "tight-coupling": "tight-coupling",
    }[args.command]
    spec = SweepSpec(kind)
    changes = {}
    for name in ("counts", "orientations", "tx_counts", "rx_counts", "with_rate_sweep"):
        if hasattr(args, name):
            changes[name] = getattr(args, name)
    if hasattr(args, "ratio_points"):
        changes["ratios"] = default_ratios(args.ratio_points)
    return dataclasses.replace(spec, **changes)


def _write(table, args, stdout):
    emit_table(table, args.out or stdout, timestamp=not args.no_timestamp)


def main(argv=None, stdout=None):
    stdout = sys.stdout if stdout is None else stdout
    args = build_parser().parse_args(argv)
    try:
        scenario = _scenario(args)
    except (FormatError, ValidationError, OSError) as exc:
        print(f"tcmimo: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate":
        checks = check_scenario(scenario, args.points)
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}" + (f"  ({c.detail})" if c.detail else "") for c in checks]
        text = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        return 0 if all(c.passed for c in checks) else 1

    table = run_sweep(_spec(args), scenario, threads=args.threads)
    _write(table, args, stdout)
    if table.failure is not None:
        print(f"tcmimo: sweep failed: {table.failure}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
