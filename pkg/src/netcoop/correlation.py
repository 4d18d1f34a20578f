"""Rank versus cooperation correlation strategies.

* node level: Hamming distance between the binarized rank vector and the
  strategy vector of each timestep;
* neighbour mean: KL divergence between the neighbour-mean rank vector and
  the neighbour-mean cooperation vector;
* neighbour variance: the same with neighbour (population) variances.

Per-timestep values are averaged over realizations. KL values that come out
infinite or undefined are recorded in ``omitted_timesteps``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from netcoop.game import Trajectory
from netcoop.graph import Graph
from netcoop.ranking import Algorithm, BinaryVector, RankVector


class DegenerateInputError(ValueError):
    pass


class Strategy(str, enum.Enum):
    NODE_HAMMING = "node-hamming"
    NEIGHBOR_MEAN_KL = "neighbor-mean-kl"
    NEIGHBOR_VAR_KL = "neighbor-var-kl"


class AverageMode(str, enum.Enum):
    PER_REALIZATION = "per-realization"
    POOLED = "pooled"


class Strategy3Mode(str, enum.Enum):
    VAR_VS_VAR = "var-vs-var"
    VAR_VS_MEAN = "var-vs-mean"


@dataclass(frozen=True, eq=False)
class NeighborAggregate:
    mean: np.ndarray
    variance: np.ndarray
    isolated: np.ndarray  # bool mask of degree-0 nodes, whose entries are 0


@dataclass(eq=False)
class CorrelationSeries:
    strategy: Strategy
    algorithm: Algorithm | None
    values: np.ndarray  # NaN at omitted timesteps
    omitted_timesteps: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_raw(cls, strategy, algorithm, raw) -> "CorrelationSeries":
        raw = np.asarray(raw, dtype=float)
        bad = ~np.isfinite(raw)
        values = np.where(bad, np.nan, raw)
        return cls(strategy, algorithm, values, np.flatnonzero(bad).tolist())


def hamming(a, b) -> float:
    a = a.bits if isinstance(a, BinaryVector) else np.asarray(a)
    b = b.bits if isinstance(b, BinaryVector) else np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    if a.size == 0:
        raise ValueError("hamming distance of empty vectors")
    return np.count_nonzero(a != b) / a.size


def _neighbor_sums(g: Graph, x: np.ndarray):
    x = np.asarray(x, dtype=float)
    if x.shape != (g.node_count,):
        raise ValueError(f"expected {g.node_count} entries, got shape {x.shape}")
    deg = g.out_degree()
    rows = np.repeat(np.arange(g.node_count), deg)
    return x, deg, rows


def neighbor_mean(g: Graph, x) -> np.ndarray:
    x, deg, rows = _neighbor_sums(g, x)
    sums = np.bincount(rows, weights=x[g.indices], minlength=g.node_count)
    return np.divide(sums, deg, out=np.zeros(g.node_count), where=deg > 0)


def neighbor_variance(g: Graph, x) -> np.ndarray:
    """Population variance of ``x`` over each node's neighbours (0 for isolated nodes)."""
    x, deg, rows = _neighbor_sums(g, x)
    mean = neighbor_mean(g, x)
    dev = x[g.indices] - mean[rows]
    sq = np.bincount(rows, weights=dev * dev, minlength=g.node_count)
    return np.divide(sq, deg, out=np.zeros(g.node_count), where=deg > 0)


def neighbor_aggregate(g: Graph, x) -> NeighborAggregate:
    return NeighborAggregate(neighbor_mean(g, x), neighbor_variance(g, x), g.out_degree() == 0)


def kl_divergence(p, q, epsilon: float = 1e-9) -> float:
    """KL(p || q) in nats after shifting both vectors by ``epsilon`` and normalizing.

    Returns ``inf`` when ``q`` has a zero where ``p`` does not.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"length mismatch: {p.shape} vs {q.shape}")
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if np.any(p < 0) or np.any(q < 0):
        raise ValueError("KL inputs must be non-negative")
    p = p + epsilon
    q = q + epsilon
    p_total, q_total = p.sum(), q.sum()
    if not (p_total > 0 and q_total > 0):
        raise DegenerateInputError("cannot normalize an all-zero vector")
    p /= p_total
    q /= q_total
    support = p > 0
    if np.any(q[support] == 0):
        return float("inf")
    ps, qs = p[support], q[support]
    kl = float(np.sum(ps * (np.log(ps) - np.log(qs))))
    return max(kl, 0.0)


def _adjacency(g: Graph) -> sp.csr_matrix:
    n = g.node_count
    return sp.csr_matrix((np.ones(len(g.indices)), g.indices, g.indptr), shape=(n, n))


def _row_neighbor_mean(adj_t, deg, x: np.ndarray) -> np.ndarray:
    """``neighbor_mean`` applied to every row of ``x`` (timesteps x nodes)."""
    sums = np.asarray(x @ adj_t)
    return np.divide(sums, deg, out=np.zeros(sums.shape), where=deg > 0)


def _row_neighbor_variance(g: Graph, adj_t, deg, x: np.ndarray, chunk_entries: int = 1 << 22) -> np.ndarray:
    """Two-pass neighbour variance for every row, chunked over rows to bound memory."""
    mean = _row_neighbor_mean(adj_t, deg, x)
    out = np.zeros(x.shape)
    nonempty = np.flatnonzero(deg > 0)
    if nonempty.size == 0:
        return out
    rows = np.repeat(np.arange(g.node_count), np.diff(g.indptr))
    starts = g.indptr[:-1][nonempty]
    step = max(1, chunk_entries // max(1, len(g.indices)))
    for lo in range(0, x.shape[0], step):
        dev = x[lo:lo + step][:, g.indices] - mean[lo:lo + step][:, rows]
        out[lo:lo + step, nonempty] = np.add.reduceat(dev * dev, starts, axis=1) / deg[nonempty]
    return out


def _row_kl(p: np.ndarray, q_rows: np.ndarray, epsilon: float) -> np.ndarray:
    """``kl_divergence(p, row, epsilon)`` for every row; NaN where a vector cannot be normalized."""
    p = p + epsilon
    q = q_rows + epsilon
    p_total = p.sum()
    q_total = q.sum(axis=1)
    out = np.full(q.shape[0], np.nan)
    if not p_total > 0:
        return out
    p = p / p_total
    ok = q_total > 0
    q = q[ok] / q_total[ok, None]
    support = p > 0
    ps, qs = p[support], q[:, support]
    with np.errstate(divide="ignore"):
        terms = ps * (np.log(ps) - np.log(qs))
    vals = terms.sum(axis=1)
    vals[np.any(qs == 0, axis=1)] = np.inf
    out[ok] = np.maximum(vals, 0.0)
    return out


class CooperationProfiles:
    """Neighbour mean/variance of the per-timestep strategy vectors.

    These do not depend on the ranking algorithm, so one instance serves
    every algorithm of a run. Realizations are processed one block at a
    time to bound memory; in pooled mode the single block holds per-node
    cooperation fractions averaged over realizations.
    """

    def __init__(self, g: Graph, trajs: list[Trajectory],
                 average_mode: AverageMode | str = AverageMode.PER_REALIZATION):
        if not trajs:
            raise ValueError("need at least one trajectory")
        if trajs[0].strategies.shape[1] != g.node_count:
            raise ValueError("graph and trajectories disagree on node count")
        self.graph = g
        self.trajs = trajs
        self.average_mode = AverageMode(average_mode)
        self.deg = g.out_degree().astype(float)
        self.keep = self.deg > 0
        self._adj_t = _adjacency(g).T.tocsc()

    def blocks(self):
        if self.average_mode is AverageMode.POOLED:
            yield _pooled_strategies(self.trajs)
        else:
            for tr in self.trajs:
                yield tr.strategies.astype(float)

    def aggregate(self, x: np.ndarray, kind: str) -> np.ndarray:
        if kind == "mean":
            out = _row_neighbor_mean(self._adj_t, self.deg, x)
        elif kind == "var":
            out = _row_neighbor_variance(self.graph, self._adj_t, self.deg, x)
        else:
            raise ValueError(f"unknown aggregate {kind!r}")
        return out[:, self.keep]

    def kl_series_many(self, ps: dict, kind: str, epsilon: float) -> dict:
        """KL series of each rank-side vector in ``ps`` against the cooperation aggregate."""
        per_block = {key: [] for key in ps}
        for x in self.blocks():
            q = self.aggregate(x, kind)
            for key, p in ps.items():
                per_block[key].append(_row_kl(np.asarray(p)[self.keep], q, epsilon))
        return {key: _average(np.array(rows)) for key, rows in per_block.items()}

    def kl_series(self, p: np.ndarray, kind: str, epsilon: float) -> np.ndarray:
        return self.kl_series_many({0: p}, kind, epsilon)[0]


def _average(per_realization: np.ndarray) -> np.ndarray:
    # a non-finite value in any realization makes the timestep non-finite
    with np.errstate(invalid="ignore"):
        return per_realization.mean(axis=0)


def _pooled_strategies(trajs: list[Trajectory]) -> np.ndarray:
    return np.mean([tr.strategies for tr in trajs], axis=0)


def strategy1_series(g: Graph, rank: BinaryVector, trajs: list[Trajectory],
                     average_mode: AverageMode | str = AverageMode.PER_REALIZATION,
                     algorithm: Algorithm | None = None) -> CorrelationSeries:
    if not trajs:
        raise ValueError("need at least one trajectory")
    bits = rank.bits
    if bits.shape[0] != trajs[0].strategies.shape[1]:
        raise ValueError("rank vector and trajectories disagree on node count")
    if AverageMode(average_mode) is AverageMode.POOLED:
        # fraction of realizations disagreeing with each bit; for 0/1
        # strategies this equals the per-realization average
        raw = np.abs(_pooled_strategies(trajs) - bits).mean(axis=1)
    else:
        raw = _average(np.array([(tr.strategies != bits).mean(axis=1) for tr in trajs]))
    return CorrelationSeries.from_raw(Strategy.NODE_HAMMING, algorithm, raw)


def _profiles(g, trajs, average_mode, profiles):
    if profiles is None:
        return CooperationProfiles(g, trajs, average_mode)
    if profiles.graph is not g or profiles.average_mode is not AverageMode(average_mode):
        raise ValueError("profiles were built for a different graph or averaging mode")
    return profiles


def strategy2_series(g: Graph, rank: RankVector, trajs: list[Trajectory], epsilon: float = 1e-9,
                     average_mode: AverageMode | str = AverageMode.PER_REALIZATION,
                     profiles: CooperationProfiles | None = None) -> CorrelationSeries:
    prof = _profiles(g, trajs, average_mode, profiles)
    p = neighbor_mean(g, rank.normalized)
    raw = prof.kl_series(p, "mean", epsilon)
    return CorrelationSeries.from_raw(Strategy.NEIGHBOR_MEAN_KL, rank.algorithm, raw)


def strategy3_series(g: Graph, rank: RankVector, trajs: list[Trajectory], epsilon: float = 1e-9,
                     average_mode: AverageMode | str = AverageMode.PER_REALIZATION,
                     mode: Strategy3Mode | str = Strategy3Mode.VAR_VS_VAR,
                     profiles: CooperationProfiles | None = None) -> CorrelationSeries:
    """Neighbour-variance strategy.

    ``var-vs-var`` compares rank variances with cooperation variances;
    ``var-vs-mean`` compares rank variances with mean neighbour cooperation.
    """
    prof = _profiles(g, trajs, average_mode, profiles)
    p = neighbor_variance(g, rank.normalized)
    kind = "var" if Strategy3Mode(mode) is Strategy3Mode.VAR_VS_VAR else "mean"
    raw = prof.kl_series(p, kind, epsilon)
    return CorrelationSeries.from_raw(Strategy.NEIGHBOR_VAR_KL, rank.algorithm, raw)
