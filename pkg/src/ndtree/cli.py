"""Command-line entry point for the storage benchmark."""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .bench import (
    ExperimentSpec,
    TrialFailure,
    emit_plot,
    format_summary,
    run,
    summarize,
    write_records,
)
from .io import write_set_csv
from .tree import Mode

EXIT_OK, EXIT_BAD_ARGS, EXIT_TRIAL_FAILURE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_ARGS, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="ndtree-bench",
        description="Time tree and list stores on random point/segment streams.",
    )
    p.add_argument("--n", type=_positive_int, default=10_000, help="elements per stream")
    p.add_argument("--mu", type=float, default=0.0, help="drift rate toward the origin")
    p.add_argument("--delta", type=float, default=0.3, help="balance parameter in (0, 1)")
    p.add_argument(
        "--policy",
        action="append",
        choices=[m.value for m in Mode],
        help="tree rebalancing policy; repeat for several (default a0)",
    )
    p.add_argument("--structure", choices=["tree", "list", "both"], default="tree")
    p.add_argument("--trials", type=_positive_int, default=1)
    p.add_argument("--seed", type=int, default=0, help="trial i uses seed + i")
    p.add_argument("--time-limit-s", type=float, default=None, help="per-trial cutoff")
    p.add_argument("--out", help="CSV of per-trial records (default: stdout)")
    p.add_argument("--export-set", help="CSV of the final stored set of the last trial")
    p.add_argument("--plot", help="SVG plot of the final stored set of the last trial")
    p.add_argument("--summary", action="store_true", help="print aggregate table to stderr")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    structures = ("tree", "list") if args.structure == "both" else (args.structure,)
    try:
        spec = ExperimentSpec(
            n=args.n,
            mu=args.mu,
            delta=args.delta,
            policies=tuple(args.policy or ["a0"]),
            structures=structures,
            trials=args.trials,
            seed=args.seed,
            time_limit=args.time_limit_s,
        )
    except ValueError as exc:
        print(f"ndtree-bench: error: {exc}", file=sys.stderr)
        return EXIT_BAD_ARGS

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    last_set: list = []

    def on_record(rec) -> None:
        # written row by row so a crash or cutoff leaves a usable partial file
        write_records([rec], out, header=False)
        out.flush()

    def on_set(seed: int, elements: list) -> None:
        last_set[:] = elements

    try:
        write_records([], out)
        try:
            records = run(spec, on_record=on_record, on_set=on_set)
        except TrialFailure as exc:
            print(f"ndtree-bench: trial failure: {exc}", file=sys.stderr)
            return EXIT_TRIAL_FAILURE
        if args.summary:
            print(format_summary(summarize(records)), file=sys.stderr)
        if args.export_set:
            write_set_csv(last_set, args.export_set)
        if args.plot:
            emit_plot(last_set, args.plot, title=f"n={spec.n}, mu={spec.mu:g}")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
