"""Node ranking and centrality measures."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from netcoop import kernels
from netcoop.graph import Graph, symmetrize


class Algorithm(str, enum.Enum):
    SD = "SD"
    PAGERANK = "PageRank"
    HITS = "HITS"
    CL = "CL"
    BW = "BW"
    CC = "CC"

    @classmethod
    def parse(cls, name: str) -> "Algorithm":
        for a in cls:
            if name.lower() in (a.value.lower(), a.name.lower()):
                return a
        raise ValueError(f"unknown ranking algorithm {name!r}; choose from {[a.value for a in cls]}")


def min_max(values: np.ndarray) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi > lo:
        return (values - lo) / (hi - lo)
    return np.full(values.shape, 0.5)


@dataclass(frozen=True, eq=False)
class RankVector:
    """Raw per-node scores of one algorithm plus the min-max normalized view.

    ``converged`` is False when an iterative method hit ``max_iter``;
    ``degenerate`` marks HITS on an edgeless graph.
    """

    algorithm: Algorithm
    values: np.ndarray
    converged: bool = True
    degenerate: bool = False
    iterations: int = 0
    normalized: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("rank values must be a non-empty 1-d vector")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{self.algorithm.value}: non-finite rank values")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "normalized", min_max(values))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True, eq=False)
class BinaryVector:
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.uint8)
        if bits.ndim != 1 or np.any(bits > 1):
            raise ValueError("bits must be a 1-d 0/1 vector")
        object.__setattr__(self, "bits", bits)

    def __len__(self):
        return len(self.bits)


def _adjacency_matrix(g: Graph) -> sp.csr_matrix:
    n = g.node_count
    data = np.ones(len(g.indices))
    return sp.csr_matrix((data, g.indices, g.indptr), shape=(n, n))


def simple_degree(g: Graph) -> RankVector:
    return RankVector(Algorithm.SD, g.degree().astype(float))


def pagerank(g: Graph, beta: float = 0.85, tol: float = 1e-10, max_iter: int = 200) -> RankVector:
    """Damped PageRank by power iteration from the uniform vector.

    Dangling nodes spread their mass uniformly. Stops once the L1 change
    drops below ``tol``; ``converged`` reports whether that happened.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    n = g.node_count
    if n < 1:
        raise ValueError("pagerank needs at least one node")
    out_deg = g.out_degree().astype(float)
    dangling = out_deg == 0
    inv_deg = np.divide(1.0, out_deg, out=np.zeros(n), where=~dangling)
    # transpose of the row-normalized adjacency: pulls mass along j -> i
    pull = (sp.diags(inv_deg) @ _adjacency_matrix(g)).T.tocsr()
    r = np.full(n, 1.0 / n)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        new = beta * (pull @ r) + (beta * r[dangling].sum() + (1.0 - beta)) / n
        new /= new.sum()
        delta = np.abs(new - r).sum()
        r = new
        if delta < tol:
            converged = True
            break
    return RankVector(Algorithm.PAGERANK, r, converged=converged, iterations=it)


def hits_scores(g: Graph, tol: float = 1e-10, max_iter: int = 200) -> tuple[np.ndarray, np.ndarray, bool, bool, int]:
    """Return ``(authorities, hubs, converged, degenerate, iterations)``."""
    n = g.node_count
    if n < 1:
        raise ValueError("hits needs at least one node")
    uniform = np.full(n, 1.0 / n)
    if g.edge_count == 0:
        return uniform, uniform.copy(), True, True, 0
    a_mat = _adjacency_matrix(g)
    a_t = a_mat.T.tocsr()
    hub, auth = uniform.copy(), uniform.copy()
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        new_auth = a_t @ hub
        new_auth /= new_auth.sum()
        new_hub = a_mat @ new_auth
        new_hub /= new_hub.sum()
        change = max(np.abs(new_auth - auth).sum(), np.abs(new_hub - hub).sum())
        auth, hub = new_auth, new_hub
        if change < tol:
            converged = True
            break
    return auth, hub, converged, False, it


def hits(g: Graph, tol: float = 1e-10, max_iter: int = 200) -> RankVector:
    """HITS authority scores, L1-normalized after every sweep."""
    auth, _, converged, degenerate, it = hits_scores(g, tol, max_iter)
    return RankVector(Algorithm.HITS, auth, converged=converged, degenerate=degenerate, iterations=it)


def closeness(g: Graph) -> RankVector:
    """Closeness restricted to reachable nodes: ``(r_i - 1) / sum of distances``.

    Isolated nodes score 0. On a connected graph this is ``(N-1) / sum``.
    """
    totals, reach = kernels.distance_sums(g.indptr, g.indices)
    values = np.divide((reach - 1).astype(float), totals.astype(float),
                       out=np.zeros(g.node_count), where=totals > 0)
    return RankVector(Algorithm.CL, values)


def betweenness(g: Graph) -> RankVector:
    """Exact unnormalized betweenness (Brandes).

    Undirected graphs count each unordered endpoint pair once, so the
    middle of a 3-node path scores 1. Directed graphs count ordered pairs.
    """
    bc = kernels.brandes(g.indptr, g.indices)
    if not g.directed:
        bc = bc / 2.0
    return RankVector(Algorithm.BW, bc)


def clustering_coefficient(g: Graph) -> RankVector:
    """Local clustering ``2 E_i / (k_i (k_i - 1))`` on the undirected view; 0 when ``k_i < 2``."""
    u = symmetrize(g)
    a = _adjacency_matrix(u)
    links = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
    k = u.out_degree().astype(float)
    pairs = k * (k - 1.0)
    values = np.divide(2.0 * links, pairs, out=np.zeros(u.node_count), where=pairs > 0)
    return RankVector(Algorithm.CC, values)


def binarize(r: RankVector) -> BinaryVector:
    """1 where the normalized score is at or above its mean, else 0."""
    x = r.normalized
    return BinaryVector((x >= x.mean()).astype(np.uint8))


def compute(g: Graph, algorithm: Algorithm | str, beta: float = 0.85,
            tol: float = 1e-10, max_iter: int = 200) -> RankVector:
    algorithm = Algorithm.parse(algorithm) if isinstance(algorithm, str) else algorithm
    if algorithm is Algorithm.SD:
        return simple_degree(g)
    if algorithm is Algorithm.PAGERANK:
        return pagerank(g, beta=beta, tol=tol, max_iter=max_iter)
    if algorithm is Algorithm.HITS:
        return hits(g, tol=tol, max_iter=max_iter)
    if algorithm is Algorithm.CL:
        return closeness(g)
    if algorithm is Algorithm.BW:
        return betweenness(g)
    return clustering_coefficient(g)


def write_rank_csv(r: RankVector, path_or_file) -> None:
    lines = ["node_index,raw,normalized"]
    lines += [f"{i},{raw!r},{norm!r}" for i, (raw, norm) in
              enumerate(zip(r.values.tolist(), r.normalized.tolist()))]
    text = "\n".join(lines) + "\n"
    if isinstance(path_or_file, (str, Path)):
        Path(path_or_file).write_text(text, encoding="utf-8")
    else:
        path_or_file.write(text)
