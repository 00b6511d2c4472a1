"""Immutable undirected simple graphs and the structural primitives used
by every separator: k-cores, components, BFS distances, low-degree sets,
short paths/cycles through a marked vertex set, and far-from-low-degree
tests.

Vertex ids are integers. Generated graphs use the dense range 0..n-1;
induced subgraphs keep their original ids so cores and separators compose
without relabelling maps. Auxiliary constructions may introduce fresh ids
above the original range.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Iterator, Sequence

import numpy as np

INF = math.inf


class Graph:
    """Undirected simple graph: no loops, no parallel edges.

    Immutable after construction. Queries are read-only and safe to use
    concurrently; "mutation" means building a new graph.
    """

    __slots__ = ("_adj", "_vertices", "_m", "_csr_cache", "_edgekeys_cache")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]]):
        adj: dict[int, list[int]] = {int(v): [] for v in vertices}
        m = 0
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u = int(u)
            v = int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u not in adj or v not in adj:
                raise ValueError(f"edge ({u},{v}) uses an unknown vertex")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"parallel edge ({u},{v})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
            m += 1
        self._adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        self._vertices = tuple(sorted(adj))
        self._m = m
        self._csr_cache = None
        self._edgekeys_cache = None

    # -- constructors -------------------------------------------------

    @classmethod
    def from_edge_count(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Graph on the dense vertex range 0..n-1."""
        return cls(range(n), edges)

    # -- basic queries ------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def m(self) -> int:
        return self._m

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        ns = self._adj.get(u)
        return ns is not None and v in ns

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in self._vertices:
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def min_degree(self) -> int:
        return min((len(ns) for ns in self._adj.values()), default=0)

    def max_degree(self) -> int:
        return max((len(ns) for ns in self._adj.values()), default=0)

    def degree_map(self) -> dict[int, int]:
        return {v: len(ns) for v, ns in self._adj.items()}

    # -- derived graphs ------------------------------------------------

    def induced(self, keep: Iterable[int]) -> "Graph":
        """Induced subgraph on `keep`; original ids are retained."""
        ks = set(keep)
        unknown = ks.difference(self._adj)
        if unknown:
            raise ValueError(f"unknown vertex id {min(unknown)}")
        edges = [
            (u, v)
            for u in ks
            for v in self._adj[u]
            if u < v and v in ks
        ]
        return Graph(ks, edges)

    def with_edge(self, u: int, v: int) -> "Graph":
        if self.has_edge(u, v):
            raise ValueError(f"edge ({u},{v}) already present")
        return Graph(self._vertices, list(self.edges()) + [(u, v)])

    def without_vertices(self, drop: Iterable[int]) -> "Graph":
        ds = set(drop)
        return self.induced(v for v in self._vertices if v not in ds)

    # -- traversal ------------------------------------------------------

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, largest-first order
        broken by smallest member."""
        seen: set[int] = set()
        comps: list[list[int]] = []
        for s in self._vertices:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            dq = deque([s])
            while dq:
                u = dq.popleft()
                for w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        dq.append(w)
            comps.append(sorted(comp))
        comps.sort(key=lambda c: (-len(c), c[0]))
        return comps

    def bfs_distances(self, source: int, cap: float = INF) -> dict[int, int]:
        """Distances from `source` to every vertex within distance `cap`."""
        if source not in self._adj:
            raise ValueError(f"unknown vertex id {source}")
        dist = {source: 0}
        dq = deque([source])
        while dq:
            u = dq.popleft()
            du = dist[u]
            if du >= cap:
                continue
            for w in self._adj[u]:
                if w not in dist:
                    dist[w] = du + 1
                    dq.append(w)
        return dist

    def dist(self, u: int, v: int) -> float:
        """BFS distance between u and v; math.inf when disconnected."""
        if u not in self._adj or v not in self._adj:
            raise ValueError("unknown vertex id")
        if u == v:
            return 0
        seen = {u}
        dq = deque([(u, 0)])
        while dq:
            x, d = dq.popleft()
            for w in self._adj[x]:
                if w == v:
                    return d + 1
                if w not in seen:
                    seen.add(w)
                    dq.append((w, d + 1))
        return INF

    def shortest_path(self, u: int, v: int) -> list[int] | None:
        """One shortest u-v path as a vertex list, or None."""
        if u not in self._adj or v not in self._adj:
            raise ValueError("unknown vertex id")
        if u == v:
            return [u]
        parent = {u: u}
        dq = deque([u])
        while dq:
            x = dq.popleft()
            for w in self._adj[x]:
                if w not in parent:
                    parent[w] = x
                    if w == v:
                        path = [v]
                        while path[-1] != u:
                            path.append(parent[path[-1]])
                        path.reverse()
                        return path
                    dq.append(w)
        return None

    # -- array views -----------------------------------------------------

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, indices, verts): CSR adjacency over positional indices.

        `verts[i]` is the vertex id at position i; `indices` holds positions,
        not ids. Cached; the graph is immutable.
        """
        if self._csr_cache is None:
            verts = np.array(self._vertices, dtype=np.int64)
            pos = {v: i for i, v in enumerate(self._vertices)}
            indptr = np.zeros(len(verts) + 1, dtype=np.int64)
            for i, v in enumerate(self._vertices):
                indptr[i + 1] = indptr[i] + len(self._adj[v])
            indices = np.empty(indptr[-1], dtype=np.int64)
            k = 0
            for v in self._vertices:
                for w in self._adj[v]:
                    indices[k] = pos[w]
                    k += 1
            self._csr_cache = (indptr, indices, verts)
        return self._csr_cache

    def edge_keys(self) -> np.ndarray:
        """Sorted int64 keys min*2^32+max for every edge, for vectorized
        membership tests."""
        if self._edgekeys_cache is None:
            keys = np.fromiter(
                ((u << 32) | v for u, v in self.edges()),
                dtype=np.int64,
                count=self._m,
            )
            keys.sort()
            self._edgekeys_cache = keys
        return self._edgekeys_cache

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# -- structural primitives -------------------------------------------------


def k_core(g: Graph, k: int) -> Graph:
    """The unique maximal induced subgraph of minimum degree >= k, with
    original vertex ids. Empty graphs are a valid result. Requires k >= 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    deg = {v: g.degree(v) for v in g.vertices}
    dropped: set[int] = set()
    stack = [v for v, d in deg.items() if d < k]
    while stack:
        v = stack.pop()
        if v in dropped:
            continue
        dropped.add(v)
        for w in g.neighbors(v):
            if w not in dropped:
                deg[w] -= 1
                if deg[w] < k:
                    stack.append(w)
    if not dropped:
        return g
    return g.induced(v for v in g.vertices if v not in dropped)


def low_degree_set(g: Graph, d_cap: float) -> list[int]:
    """Sorted list of vertices of degree <= d_cap."""
    return [v for v in g.vertices if g.degree(v) <= d_cap]


FAR_RADIUS = 8


def is_d_far(g: Graph, v: int, d_cap: float) -> bool:
    """True iff no other vertex of degree <= d_cap lies within graph
    distance 8 of v."""
    if v not in g:
        raise ValueError(f"unknown vertex id {v}")
    dist = g.bfs_distances(v, cap=FAR_RADIUS)
    for w, d in dist.items():
        if w != v and d <= FAR_RADIUS and g.degree(w) <= d_cap:
            return False
    return True


SHORT_LEN = 4


def find_s_paths_cycles(
    g: Graph, s_set: Sequence[int]
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Short structures through a marked set S.

    Returns (paths, cycles):
      * paths: for every pair of distinct S-vertices at distance <= 4, one
        shortest witness path (endpoints in S, <= 4 edges);
      * cycles: every cycle of length 3 or 4 meeting S, once each, with a
        canonical vertex order.
    """
    s_sorted = sorted(set(s_set))
    for x in s_sorted:
        if x not in g:
            raise ValueError(f"unknown vertex id {x}")

    paths: list[tuple[int, ...]] = []
    for src in s_sorted:
        # BFS truncated at depth 4, keeping one parent per vertex
        parent = {src: src}
        depth = {src: 0}
        dq = deque([src])
        while dq:
            x = dq.popleft()
            if depth[x] >= SHORT_LEN:
                continue
            for w in g.neighbors(x):
                if w not in depth:
                    depth[w] = depth[x] + 1
                    parent[w] = x
                    dq.append(w)
        for tgt in s_sorted:
            if tgt <= src or tgt not in depth:
                continue
            path = [tgt]
            while path[-1] != src:
                path.append(parent[path[-1]])
            path.reverse()
            paths.append(tuple(path))

    cycles: set[tuple[int, ...]] = set()
    for s in s_sorted:
        ns = g.neighbors(s)
        # triangles through s
        for i, a in enumerate(ns):
            for b in ns[i + 1 :]:
                if g.has_edge(a, b):
                    cycles.add(_canon_cycle((s, a, b)))
        # 4-cycles through s: a-s-b plus a common neighbor of a,b other than s
        for i, a in enumerate(ns):
            na = set(g.neighbors(a))
            for b in ns[i + 1 :]:
                for c in g.neighbors(b):
                    if c != s and c in na:
                        cycles.add(_canon_cycle((s, a, c, b)))
    return paths, sorted(cycles)


def _canon_cycle(cyc: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical form of a cycle under rotation and reflection."""
    k = len(cyc)
    best = None
    for seq in (cyc, tuple(reversed(cyc))):
        for r in range(k):
            cand = seq[r:] + seq[:r]
            if best is None or cand < best:
                best = cand
    return best


def is_path_in(g: Graph, seq: Sequence[int]) -> bool:
    """True iff seq is a simple path of g (single vertices count)."""
    if len(seq) == 0:
        return False
    if len(set(seq)) != len(seq):
        return False
    if any(v not in g for v in seq):
        return False
    return all(g.has_edge(a, b) for a, b in zip(seq, seq[1:]))


# -- edge-list text format ---------------------------------------------------
#
# First line "n m"; then m lines "u v" with 0-based ids; '#' starts a comment.


def parse_edgelist(text: str) -> Graph:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ValueError("empty edge list")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be 'n m'")
    n, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise ValueError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    for line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line: {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) out of range for n={n}")
        edges.append((u, v))
    return Graph.from_edge_count(n, edges)


def format_edgelist(g: Graph) -> str:
    verts = g.vertices
    if verts and (verts[0] != 0 or verts[-1] != len(verts) - 1):
        # non-dense id space: emit up to the max id; missing ids are isolated
        n = verts[-1] + 1
    else:
        n = len(verts)
    out = [f"{n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


def read_edgelist(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edgelist(fh.read())


def write_edgelist(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edgelist(g))
