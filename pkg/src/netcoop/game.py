"""Synchronous evolutionary Prisoner's Dilemma on a graph.

Strategies are coded ``1`` for cooperate and ``0`` for defect. Every
timestep each node collects one round of payoffs against all neighbours
(payoffs reset per timestep), then imitates one uniformly drawn neighbour
with probability ``(PO_j - PO_i) / (b * max(k_i, k_j))`` when that
neighbour earned strictly more.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from netcoop import kernels
from netcoop.graph import Graph

COOPERATE = 1
DEFECT = 0


@dataclass(frozen=True)
class PayoffMatrix:
    """Row player's payoffs: T (D vs C), R (C vs C), P (D vs D), S (C vs D)."""

    T: float
    R: float = 1.0
    P: float = 0.0
    S: float = 0.0

    @classmethod
    def nowak_may(cls, b: float) -> "PayoffMatrix":
        return cls(T=b, R=1.0, P=0.0, S=0.0)

    def table(self) -> np.ndarray:
        """2x2 array indexed ``[own strategy, other strategy]``."""
        return np.array([[self.P, self.T], [self.S, self.R]], dtype=float)


@dataclass(frozen=True)
class GameParams:
    b: float = 1.8
    time_window: int = 500
    repetitions: int = 10
    seed: int = 0

    def __post_init__(self):
        if not self.b > 1.0:
            raise ValueError(f"b must exceed 1, got {self.b}")
        if self.time_window < 1:
            raise ValueError(f"time_window must be >= 1, got {self.time_window}")
        if self.repetitions < 1:
            raise ValueError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass
class GameState:
    strategies: np.ndarray
    payoffs: np.ndarray

    @property
    def cooperators(self) -> int:
        return int(self.strategies.sum())


@dataclass
class UpdateStats:
    """Diagnostics from imitation steps: clamped probabilities and the largest raw one."""

    clamped: int = 0
    max_probability: float = 0.0

    def add(self, clamped: int, max_probability: float) -> None:
        self.clamped += int(clamped)
        self.max_probability = max(self.max_probability, float(max_probability))


@dataclass(eq=False)
class Trajectory:
    """Strategy snapshot after every timestep of one realization."""

    strategies: np.ndarray  # (time_window, N) uint8
    realization: int = 0
    stats: UpdateStats = field(default_factory=UpdateStats)

    @property
    def cooperativity_series(self) -> np.ndarray:
        return self.strategies.mean(axis=1)

    @property
    def time_window(self) -> int:
        return self.strategies.shape[0]

    def digest(self) -> str:
        return hashlib.sha256(np.ascontiguousarray(self.strategies).tobytes()).hexdigest()


def realization_rng(seed: int, realization_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, realization_index]))


def init_state(g: Graph, rng: np.random.Generator) -> GameState:
    n = g.node_count
    if n < 2:
        raise ValueError("the game needs at least two nodes")
    strategies = np.zeros(n, dtype=np.uint8)
    strategies[rng.choice(n, size=n // 2, replace=False)] = COOPERATE
    return GameState(strategies, np.zeros(n))


def payoff_round(g: Graph, state: GameState, m: PayoffMatrix) -> GameState:
    payoffs = np.empty(g.node_count)
    kernels.accumulate_payoffs(g.indptr, g.indices, state.strategies, m.table(), payoffs)
    return GameState(state.strategies, payoffs)


def draw_update_randoms(rng: np.random.Generator, n: int) -> np.ndarray:
    """Row ``i`` holds node ``i``'s (neighbour pick, acceptance) uniforms."""
    return rng.random((n, 2))


def strategy_update(g: Graph, state: GameState, b: float, rng: np.random.Generator,
                    stats: UpdateStats | None = None) -> GameState:
    draws = draw_update_randoms(rng, g.node_count)
    out = np.empty_like(state.strategies)
    clamped, max_p = kernels.imitate(g.indptr, g.indices, state.strategies, state.payoffs,
                                     float(b), draws, out)
    if stats is not None:
        stats.add(clamped, max_p)
    return GameState(out, state.payoffs)


def run_realization(g: Graph, params: GameParams, realization_index: int = 0,
                    matrix: PayoffMatrix | None = None) -> Trajectory:
    if g.directed:
        raise ValueError("the game runs on an undirected graph; symmetrize it first")
    matrix = matrix or PayoffMatrix.nowak_may(params.b)
    table = matrix.table()
    rng = realization_rng(params.seed, realization_index)
    state = init_state(g, rng)
    n = g.node_count
    snapshots = np.empty((params.time_window, n), dtype=np.uint8)
    stats = UpdateStats()
    strategies, nxt = state.strategies.copy(), np.empty(n, dtype=np.uint8)
    payoffs = np.empty(n)
    b = float(params.b)
    for t in range(params.time_window):
        kernels.accumulate_payoffs(g.indptr, g.indices, strategies, table, payoffs)
        stats.add(*kernels.imitate(g.indptr, g.indices, strategies, payoffs, b,
                                   draw_update_randoms(rng, n), nxt))
        strategies, nxt = nxt, strategies
        snapshots[t] = strategies
    return Trajectory(snapshots, realization_index, stats)


def run_game(g: Graph, params: GameParams, matrix: PayoffMatrix | None = None) -> list[Trajectory]:
    return [run_realization(g, params, r, matrix) for r in range(params.repetitions)]


def write_trajectory_csv(trajs: list[Trajectory], strategies_path, cooperativity_path=None) -> None:
    with open(strategies_path, "w", encoding="utf-8") as fh:
        fh.write("realization,timestep,node,strategy\n")
        for tr in trajs:
            for t, row in enumerate(tr.strategies):
                fh.writelines(f"{tr.realization},{t},{i},{s}\n" for i, s in enumerate(row.tolist()))
    if cooperativity_path is not None:
        with open(cooperativity_path, "w", encoding="utf-8") as fh:
            fh.write("realization,timestep,cooperativity\n")
            for tr in trajs:
                for t, c in enumerate(tr.cooperativity_series.tolist()):
                    fh.write(f"{tr.realization},{t},{c!r}\n")
