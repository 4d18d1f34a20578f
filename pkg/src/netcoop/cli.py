"""``netcoop`` command line: ``run``, ``stats`` and ``rank`` subcommands."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from netcoop.correlation import AverageMode, Strategy3Mode
from netcoop.experiment import ExperimentConfig, load_graph, run_experiment, stats_command
from netcoop.graph import GraphError, symmetrize
from netcoop.ranking import Algorithm, compute, write_rank_csv

log = logging.getLogger("netcoop")


def _algorithms(text: str) -> tuple[Algorithm, ...]:
    try:
        return tuple(Algorithm.parse(t.strip()) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", type=Path, required=True, help="edge list or GML file")
    p.add_argument("--format", choices=["edgelist", "gml"], default="edgelist")
    p.add_argument("--directed", action="store_true", help="read an edge list as directed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netcoop", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="rankings + PD game + correlation series")
    _dataset_args(run)
    run.add_argument("--no-symmetrize", dest="symmetrize", action="store_false",
                     help="rank PageRank/HITS on the raw directed graph")
    run.add_argument("--b", type=float, required=True, help="temptation payoff T=b > 1")
    run.add_argument("--time-window", type=int, default=500)
    run.add_argument("--reps", type=int, default=10)
    run.add_argument("--seed", type=int, required=True)
    run.add_argument("--beta", type=float, default=0.85, help="PageRank damping")
    run.add_argument("--epsilon", type=float, default=1e-9, help="KL smoothing shift")
    run.add_argument("--algorithms", type=_algorithms, default=tuple(Algorithm),
                     help="comma separated subset of SD,PageRank,HITS,CL,BW,CC")
    run.add_argument("--average-mode", choices=[m.value for m in AverageMode],
                     default=AverageMode.PER_REALIZATION.value)
    run.add_argument("--strategy3-mode", choices=[m.value for m in Strategy3Mode],
                     default=Strategy3Mode.VAR_VS_VAR.value)
    run.add_argument("--out", type=Path, required=True)

    st = sub.add_parser("stats", help="print node/edge counts, degree moments and clustering")
    _dataset_args(st)

    rk = sub.add_parser("rank", help="dump one ranking as node_index,raw,normalized CSV")
    _dataset_args(rk)
    rk.add_argument("--algorithm", required=True, type=Algorithm.parse)
    rk.add_argument("--beta", type=float, default=0.85)
    rk.add_argument("--no-symmetrize", dest="symmetrize", action="store_false")
    rk.add_argument("--out", type=Path, default=None, help="file to write (default stdout)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "stats":
            stats_command(args.dataset, args.format, args.directed)
        elif args.command == "rank":
            g = load_graph(args.dataset, args.format, args.directed)
            if args.symmetrize:
                g = symmetrize(g)
            r = compute(g, args.algorithm, beta=args.beta)
            write_rank_csv(r, args.out if args.out is not None else sys.stdout)
        else:
            cfg = ExperimentConfig(
                dataset_path=args.dataset, format=args.format, directed=args.directed,
                symmetrize=args.symmetrize, algorithms=args.algorithms, b=args.b,
                time_window=args.time_window, repetitions=args.reps, seed=args.seed,
                beta=args.beta, epsilon=args.epsilon, average_mode=args.average_mode,
                strategy3_mode=args.strategy3_mode, output_dir=args.out,
            )
            manifest = run_experiment(cfg)
            log.info("wrote %d series in %.1fs", len(manifest.outputs), manifest.duration_s)
            print(args.out / f"{cfg.dataset_path.stem}.manifest.json")
    except (OSError, ValueError, GraphError, RuntimeError) as exc:
        print(f"netcoop: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
