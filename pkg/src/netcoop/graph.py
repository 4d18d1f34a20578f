"""Immutable graph container, edge-list/GML readers and basic statistics."""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import numpy as np

UNREACHABLE = -1


class GraphError(ValueError):
    """Base class for graph construction and parsing failures."""


class GraphParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyGraphError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple graph on dense node indices ``0..N-1``.

    ``edges`` holds each edge once. For undirected graphs the adjacency is
    symmetric; for directed graphs ``adjacency`` lists out-neighbours.
    Neighbour lists are sorted, which fixes the order random neighbour
    draws index into.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    directed: bool = False
    labels: tuple[Hashable, ...] | None = None
    indptr: np.ndarray = field(init=False, repr=False)
    indices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n = self.node_count
        if n < 0:
            raise GraphError("node_count must be non-negative")
        seen: set[tuple[int, int]] = set()
        clean: list[tuple[int, int]] = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a node outside 0..{n - 1}")
            if u == v:
                continue
            key = (u, v) if self.directed else (min(u, v), max(u, v))
            if key in seen:
                continue
            seen.add(key)
            clean.append((u, v))
        object.__setattr__(self, "edges", tuple(clean))
        if self.labels is not None and len(self.labels) != n:
            raise GraphError("labels must have one entry per node")

        src = np.fromiter((e[0] for e in clean), dtype=np.int64, count=len(clean))
        dst = np.fromiter((e[1] for e in clean), dtype=np.int64, count=len(clean))
        if not self.directed:
            src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        indptr.flags.writeable = False
        dst.flags.writeable = False
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", dst)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(i).tolist() for i in range(self.node_count)]

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def out_degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def in_degree(self) -> np.ndarray:
        if not self.directed:
            return self.out_degree()
        return np.bincount(self.indices, minlength=self.node_count)

    def degree(self) -> np.ndarray:
        """Number of distinct neighbours in the undirected view (``#d_i``)."""
        return symmetrize(self).out_degree()

    def same_structure(self, other: "Graph") -> bool:
        return (
            self.node_count == other.node_count
            and self.directed == other.directed
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with node ``i`` renamed to ``perm[i]``."""
        perm = list(perm)
        if sorted(perm) != list(range(self.node_count)):
            raise GraphError("perm must be a permutation of 0..N-1")
        edges = tuple((perm[u], perm[v]) for u, v in self.edges)
        return Graph(self.node_count, edges, self.directed)

    def __repr__(self):
        kind = "directed" if self.directed else "undirected"
        return f"Graph(N={self.node_count}, M={self.edge_count}, {kind})"


@dataclass(frozen=True)
class GraphStats:
    node_count: int
    edge_count: int
    avg_degree: float
    degree_std: float  # population standard deviation
    mean_clustering: float
    degree_variance: float = 0.0  # sample variance (ddof=1), 0 for a single node


def from_edges(edges: Iterable[tuple[Hashable, Hashable]], directed: bool = False) -> Graph:
    """Build a graph from labelled edges, indexing labels by first appearance."""
    index: dict[Hashable, int] = {}
    pairs = []
    for u, v in edges:
        iu = index.setdefault(u, len(index))
        iv = index.setdefault(v, len(index))
        pairs.append((iu, iv))
    return Graph(len(index), tuple(pairs), directed, labels=tuple(index))


def _label(token: str):
    try:
        return int(token)
    except ValueError:
        return token


def load_edge_list(path: str | Path, directed: bool = False) -> Graph:
    """Read a whitespace-separated edge list.

    Lines starting with ``#`` or ``%`` are comments. Tokens that parse as
    integers become integer labels, anything else stays a string. Extra
    columns (weights, timestamps) are rejected.
    """
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line[0] in "#%":
                continue
            parts = line.split()
            if len(parts) != 2:
                raise GraphParseError(f"expected 2 node labels, got {len(parts)}: {line!r}", lineno)
            edges.append((_label(parts[0]), _label(parts[1])))
    if not edges:
        raise EmptyGraphError(f"empty graph: no edges in {path}")
    return from_edges(edges, directed)


def write_edge_list(g: Graph, path: str | Path, use_labels: bool = True) -> None:
    labels = g.labels if (use_labels and g.labels is not None) else range(g.node_count)
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges:
            fh.write(f"{labels[u]} {labels[v]}\n")


_GML_TOKEN = re.compile(r'"[^"]*"|\[|\]|[^\s\[\]"]+|"')


def _gml_tokens(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.lstrip().startswith("#"):
            continue
        for tok in _GML_TOKEN.findall(line):
            if tok == '"':
                raise GraphParseError("unterminated string", lineno)
            yield tok, lineno


def _gml_parse_block(tokens, name, lineno, top=False):
    """Parse ``key value`` pairs until the matching ``]``; values may be lists."""
    items = []
    for key, kline in tokens:
        if key == "]":
            if top:
                raise GraphParseError("unbalanced ']'", kline)
            return items
        if key == "[":
            raise GraphParseError("list without a key", kline)
        try:
            value, vline = next(tokens)
        except StopIteration:
            raise GraphParseError(f"key {key!r} has no value", kline) from None
        if value == "[":
            value = _gml_parse_block(tokens, key, vline)
        elif value == "]":
            raise GraphParseError(f"key {key!r} has no value", kline)
        items.append((key, value, kline))
    if not top:
        raise GraphParseError(f"unterminated '{name} [' block", lineno)
    return items


def _gml_int(value, what, line):
    if isinstance(value, list):
        raise GraphParseError(f"{what} must be an integer, got a list", line)
    try:
        return int(value)
    except ValueError:
        try:
            f = float(value)
        except ValueError:
            raise GraphParseError(f"{what} must be an integer, got {value!r}", line) from None
        if f != int(f):
            raise GraphParseError(f"{what} must be an integer, got {value!r}", line) from None
        return int(f)


def load_gml(path: str | Path) -> Graph:
    """Read the GML subset ``graph [ directed 0|1 node [ id INT ] edge [ source INT target INT ] ]``.

    Scalar attributes (``label "x"``, ``value 3``) are tolerated and
    ignored. Any nested list inside a node, edge or graph block other
    than ``node``/``edge`` is rejected.
    """
    text = Path(path).read_text(encoding="utf-8")
    top = _gml_parse_block(iter(_gml_tokens(text)), "<top>", 1, top=True)
    graphs = [(v, ln) for k, v, ln in top if k == "graph"]
    if not graphs:
        raise GraphParseError("no 'graph [' block found")
    if len(graphs) > 1:
        raise GraphParseError("multiple 'graph' blocks are not supported", graphs[1][1])
    body, _ = graphs[0]
    if not isinstance(body, list):
        raise GraphParseError("'graph' must be a block", graphs[0][1])

    directed = False
    node_ids: list[int] = []
    raw_edges: list[tuple[int, int, int]] = []
    for key, value, line in body:
        if key == "directed":
            directed = bool(_gml_int(value, "directed", line))
        elif key == "node":
            if not isinstance(value, list):
                raise GraphParseError("'node' must be a block", line)
            nid = None
            for k, v, ln in value:
                if isinstance(v, list):
                    raise GraphParseError(f"unsupported nested construct '{k} [' in node", ln)
                if k == "id":
                    nid = _gml_int(v, "node id", ln)
            if nid is None:
                raise GraphParseError("node without id", line)
            node_ids.append(nid)
        elif key == "edge":
            if not isinstance(value, list):
                raise GraphParseError("'edge' must be a block", line)
            src = dst = None
            for k, v, ln in value:
                if isinstance(v, list):
                    raise GraphParseError(f"unsupported nested construct '{k} [' in edge", ln)
                if k == "source":
                    src = _gml_int(v, "edge source", ln)
                elif k == "target":
                    dst = _gml_int(v, "edge target", ln)
            if src is None or dst is None:
                raise GraphParseError("edge needs both source and target", line)
            raw_edges.append((src, dst, line))
        elif isinstance(value, list):
            raise GraphParseError(f"unsupported nested construct '{key} [' in graph", line)

    index: dict[int, int] = {}
    for nid in node_ids:
        if nid in index:
            raise GraphParseError(f"duplicate node id {nid}")
        index[nid] = len(index)
    if not index:
        raise EmptyGraphError(f"empty graph: no nodes in {path}")
    edges = []
    for s, t, line in raw_edges:
        for end in (s, t):
            if end not in index:
                raise GraphParseError(f"edge references missing node {end}", line)
        edges.append((index[s], index[t]))
    return Graph(len(index), tuple(edges), directed, labels=tuple(index))


def write_gml(g: Graph, path: str | Path) -> None:
    ids = g.labels if g.labels is not None and all(isinstance(x, int) for x in g.labels) else range(g.node_count)
    lines = ["graph [", f"  directed {int(g.directed)}"]
    for i in range(g.node_count):
        lines += ["  node [", f"    id {ids[i]}", "  ]"]
    for u, v in g.edges:
        lines += ["  edge [", f"    source {ids[u]}", f"    target {ids[v]}", "  ]"]
    lines.append("]")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def symmetrize(g: Graph) -> Graph:
    if not g.directed:
        return g
    return Graph(g.node_count, g.edges, directed=False, labels=g.labels)


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Hop distances from ``source`` following out-edges; ``UNREACHABLE`` (-1) elsewhere."""
    n = g.node_count
    if not 0 <= source < n:
        raise IndexError(f"source {source} out of range 0..{n - 1}")
    dist = np.full(n, UNREACHABLE, dtype=np.int64)
    dist[source] = 0
    indptr, indices = g.indptr, g.indices
    queue = deque([source])
    while queue:
        v = queue.popleft()
        dv = dist[v] + 1
        for w in indices[indptr[v]:indptr[v + 1]]:
            if dist[w] < 0:
                dist[w] = dv
                queue.append(w)
    return dist


def stats(g: Graph) -> GraphStats:
    # local import: ranking depends on this module
    from netcoop.ranking import clustering_coefficient

    u = symmetrize(g)
    deg = u.out_degree().astype(float)
    cc = clustering_coefficient(u).values
    return GraphStats(
        node_count=u.node_count,
        edge_count=u.edge_count,
        avg_degree=float(deg.mean()),
        degree_std=float(deg.std()),
        mean_clustering=float(cc.mean()),
        degree_variance=float(deg.var(ddof=1)) if u.node_count > 1 else 0.0,
    )
