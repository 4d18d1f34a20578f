"""End-to-end experiment: rankings, one shared game run, correlation CSVs."""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from netcoop import __version__, kernels
from netcoop.correlation import (AverageMode, CooperationProfiles, CorrelationSeries, Strategy,
                                 Strategy3Mode, neighbor_mean, neighbor_variance, strategy1_series)
from netcoop.game import GameParams, run_game
from netcoop.graph import Graph, GraphStats, load_edge_list, load_gml, stats, symmetrize
from netcoop.ranking import Algorithm, binarize, compute

ALL_ALGORITHMS = tuple(Algorithm)
DIRECTED_CAPABLE = (Algorithm.PAGERANK, Algorithm.HITS)


class ExperimentError(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    dataset_path: Path
    b: float
    seed: int
    output_dir: Path
    format: str = "edgelist"
    directed: bool = False
    symmetrize: bool = True
    algorithms: tuple[Algorithm, ...] = ALL_ALGORITHMS
    time_window: int = 500
    repetitions: int = 10
    beta: float = 0.85
    epsilon: float = 1e-9
    average_mode: AverageMode = AverageMode.PER_REALIZATION
    strategy3_mode: Strategy3Mode = Strategy3Mode.VAR_VS_VAR

    def __post_init__(self):
        self.dataset_path = Path(self.dataset_path)
        self.output_dir = Path(self.output_dir)
        if self.format not in ("edgelist", "gml"):
            raise ValueError(f"format must be 'edgelist' or 'gml', got {self.format!r}")
        self.algorithms = tuple(Algorithm.parse(a) if isinstance(a, str) else a for a in self.algorithms)
        if not self.algorithms:
            raise ValueError("select at least one ranking algorithm")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("duplicate ranking algorithms")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        self.average_mode = AverageMode(self.average_mode)
        self.strategy3_mode = Strategy3Mode(self.strategy3_mode)
        # validates b, time_window, repetitions, seed
        self.game_params()

    def game_params(self) -> GameParams:
        return GameParams(b=self.b, time_window=self.time_window,
                          repetitions=self.repetitions, seed=self.seed)

    def echo(self) -> dict:
        d = asdict(self)
        d["dataset_path"] = str(self.dataset_path)
        d["output_dir"] = str(self.output_dir)
        d["algorithms"] = [a.value for a in self.algorithms]
        d["average_mode"] = self.average_mode.value
        d["strategy3_mode"] = self.strategy3_mode.value
        return d


@dataclass
class RunManifest:
    config: dict
    stats: GraphStats
    outputs: dict[str, str]
    trajectory_digest: str
    duration_s: float
    version: str = __version__
    backend: str = field(default_factory=lambda: kernels.BACKEND)

    def to_json(self) -> str:
        d = asdict(self)
        return json.dumps(d, indent=2)


def load_graph(path, fmt: str, directed: bool = False) -> Graph:
    if fmt == "gml":
        return load_gml(path)
    if fmt == "edgelist":
        return load_edge_list(path, directed=directed)
    raise ValueError(f"unknown format {fmt!r}")


def series_filename(stem: str, algorithm: Algorithm, strategy: Strategy) -> str:
    return f"{stem}.{algorithm.value}.{strategy.value}.csv"


def write_series_csv(series: CorrelationSeries, path) -> None:
    omitted = set(series.omitted_timesteps)
    lines = ["timestep,value,omitted"]
    for t, v in enumerate(series.values.tolist()):
        if t in omitted:
            lines.append(f"{t},,1")
        else:
            lines.append(f"{t},{v!r},0")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_series_csv(path) -> tuple[np.ndarray, list[int]]:
    """Return ``(values, omitted_timesteps)``; omitted values read back as NaN."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != "timestep,value,omitted":
        raise ValueError(f"{path}: not a correlation series file")
    values, omitted = [], []
    for line in lines[1:]:
        t, v, o = line.split(",")
        if int(t) != len(values):
            raise ValueError(f"{path}: timestep {t} out of order")
        if o == "1":
            omitted.append(int(t))
            values.append(math.nan)
        else:
            values.append(float(v))
    return np.array(values), omitted


def compute_series(game_graph: Graph, rank_graphs: dict[Algorithm, Graph], trajs, cfg: ExperimentConfig):
    """All 3 x |algorithms| series against one shared set of trajectories."""
    ranks = {a: compute(rank_graphs[a], a, beta=cfg.beta) for a in cfg.algorithms}
    out: dict[tuple[Algorithm, Strategy], CorrelationSeries] = {}
    for a, r in ranks.items():
        out[a, Strategy.NODE_HAMMING] = strategy1_series(game_graph, binarize(r), trajs,
                                                         cfg.average_mode, algorithm=a)
    profiles = CooperationProfiles(game_graph, trajs, cfg.average_mode)
    means = profiles.kl_series_many(
        {a: neighbor_mean(game_graph, r.normalized) for a, r in ranks.items()}, "mean", cfg.epsilon)
    coop_kind = "var" if cfg.strategy3_mode is Strategy3Mode.VAR_VS_VAR else "mean"
    variances = profiles.kl_series_many(
        {a: neighbor_variance(game_graph, r.normalized) for a, r in ranks.items()}, coop_kind, cfg.epsilon)
    for a in cfg.algorithms:
        out[a, Strategy.NEIGHBOR_MEAN_KL] = CorrelationSeries.from_raw(Strategy.NEIGHBOR_MEAN_KL, a, means[a])
        out[a, Strategy.NEIGHBOR_VAR_KL] = CorrelationSeries.from_raw(Strategy.NEIGHBOR_VAR_KL, a, variances[a])
    return ranks, out


def run_experiment(cfg: ExperimentConfig) -> RunManifest:
    start = time.perf_counter()
    stage = "load"
    written: list[Path] = []
    try:
        raw = load_graph(cfg.dataset_path, cfg.format, cfg.directed)
        game_graph = symmetrize(raw)
        rank_graphs = {
            a: raw if (not cfg.symmetrize and a in DIRECTED_CAPABLE) else game_graph
            for a in cfg.algorithms
        }
        stage = "game"
        trajs = run_game(game_graph, cfg.game_params())
        digest = hashlib.sha256("".join(t.digest() for t in trajs).encode()).hexdigest()
        stage = "ranking/correlation"
        _, series = compute_series(game_graph, rank_graphs, trajs, cfg)
        stage = "write"
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
        stem = cfg.dataset_path.stem
        outputs = {}
        for (a, s), ser in series.items():
            path = cfg.output_dir / series_filename(stem, a, s)
            written.append(path)
            write_series_csv(ser, path)
            outputs[f"{a.value}.{s.value}"] = str(path)
        manifest = RunManifest(cfg.echo(), stats(raw), outputs, digest,
                               round(time.perf_counter() - start, 3))
        path = cfg.output_dir / f"{stem}.manifest.json"
        written.append(path)
        path.write_text(manifest.to_json() + "\n", encoding="utf-8")
        return manifest
    except Exception as exc:
        for p in written:
            p.unlink(missing_ok=True)
        raise ExperimentError(f"{cfg.dataset_path}: {stage} failed: {exc}") from exc


def format_stats(s: GraphStats) -> str:
    header = f"{'nodes':>8} {'edges':>8} {'avg':>8} {'std':>8} {'CC':>8} {'2M':>8} {'var':>8}"
    row = (f"{s.node_count:>8d} {s.edge_count:>8d} {s.avg_degree:>8.2f} {s.degree_std:>8.2f} "
           f"{s.mean_clustering:>8.4f} {2 * s.edge_count:>8d} {s.degree_variance:>8.2f}")
    return header + "\n" + row


def stats_command(dataset_path, fmt: str = "edgelist", directed: bool = False) -> GraphStats:
    s = stats(load_graph(dataset_path, fmt, directed))
    print(format_stats(s))
    return s
