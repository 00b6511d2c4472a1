"""Hamiltonicity engines and structural property checks.

The engines are incomplete searches: they can fail within budget but never
return a wrong answer (every cycle/path is re-verified before return).
Cheap certificates catch common non-Hamiltonian structures up front so that
hopeless searches fail fast.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .graphs import Graph, is_path_in, low_degree_set


@dataclass(frozen=True)
class HamiltonBudget:
    """Rotation budget per restart (None means 50*n), restart count, and a
    stall window: a restart is abandoned after this many rotations without
    the path growing (None means the full rotation budget)."""

    rotations: int | None = None
    restarts: int = 20
    stall_window: int | None = None

    def rotations_for(self, n: int) -> int:
        return self.rotations if self.rotations is not None else 50 * max(n, 8)

    def stall_for(self, n: int) -> int:
        if self.stall_window is not None:
            return self.stall_window
        return self.rotations_for(n)


DEFAULT_BUDGET = HamiltonBudget()


def certify_non_hamiltonian(g: Graph) -> str | None:
    """Cheap necessary-condition checks for a Hamilton cycle. Returns a
    human-readable reason when the graph certainly has none, else None."""
    n = g.n
    if n < 3:
        return f"{n} vertices"
    if g.min_degree() < 2:
        v = min(v for v in g.vertices if g.degree(v) < 2)
        return f"vertex {v} has degree {g.degree(v)} < 2"
    comps = g.components()
    if len(comps) > 1:
        return f"{len(comps)} connected components"
    if n >= 4:
        art = _articulation_vertex(g)
        if art is not None:
            return f"cut vertex {art}"
        # a vertex with >= 3 neighbors of degree 2 forces three cycle edges
        for v in g.vertices:
            forced = sum(1 for w in g.neighbors(v) if g.degree(w) == 2)
            if forced >= 3:
                return f"vertex {v} has {forced} degree-2 neighbors"
    if n >= 5:
        # two degree-2 vertices sharing both neighbors force a chord-less
        # 4-cycle as a component of any Hamilton cycle
        twos: dict[tuple[int, int], int] = {}
        for v in g.vertices:
            if g.degree(v) == 2:
                key = tuple(sorted(g.neighbors(v)))
                if key in twos:
                    return f"vertices {twos[key]} and {v} share both neighbors"
                twos[key] = v
    return None


def _articulation_vertex(g: Graph) -> int | None:
    """First articulation point found (iterative Tarjan), or None."""
    verts = g.vertices
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    parent: dict[int, int | None] = {}
    timer = 0
    for root in verts:
        if root in disc:
            continue
        stack: list[tuple[int, iter]] = [(root, iter(g.neighbors(root)))]
        parent[root] = None
        disc[root] = low[root] = timer
        timer += 1
        root_children = 0
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if w not in disc:
                    parent[w] = v
                    disc[w] = low[w] = timer
                    timer += 1
                    if v == root:
                        root_children += 1
                    stack.append((w, iter(g.neighbors(w))))
                    advanced = True
                    break
                elif w != parent[v]:
                    low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if u != root and low[v] >= disc[u]:
                        return u
        if root_children > 1:
            return root
    return None


def _run_engine(
    g: Graph,
    seed: int,
    budget: HamiltonBudget,
    want_cycle: bool,
    host: Graph | None = None,
    booster_ok: Sequence[int] | None = None,
):
    indptr, indices, verts = g.csr()
    n = len(verts)
    if host is not None:
        hindptr, hindices, hverts = host.csr()
        if not np.array_equal(hverts, verts):
            raise ValueError("host must share the vertex set of the working graph")
        use_boosters = True
    else:
        hindptr, hindices = indptr, indices
        use_boosters = False
    ok = np.zeros(n, dtype=np.bool_)
    if booster_ok is not None:
        posmap = {int(v): i for i, v in enumerate(verts)}
        for v in booster_ok:
            ok[posmap[int(v)]] = True
    status, order, n_added, added = _kernels.rotation_engine(
        indptr,
        indices,
        n,
        np.uint64(seed & (2**63 - 1) or 1),
        budget.rotations_for(n),
        budget.restarts,
        want_cycle,
        hindptr,
        hindices,
        use_boosters,
        ok,
        budget.stall_for(n),
    )
    order_ids = [int(verts[i]) for i in order]
    added_ids = [(int(verts[a]), int(verts[b])) for a, b in added]
    return status, order_ids, added_ids


def hamilton_cycle(
    g: Graph, seed: int, budget: HamiltonBudget = DEFAULT_BUDGET
) -> tuple[int, ...] | None:
    """A verified Hamilton cycle of g (vertex order; closing edge implied),
    or None on failure. Never returns an unverified cycle."""
    if g.n < 3:
        return None
    if certify_non_hamiltonian(g) is not None:
        return None
    status, order, _ = _run_engine(g, seed, budget, want_cycle=True)
    if status != _kernels.STATUS_CYCLE:
        return None
    cyc = tuple(order)
    assert is_cycle_in(g, cyc), "engine returned an invalid cycle"
    return cyc


def is_cycle_in(g: Graph, cyc: Sequence[int]) -> bool:
    return (
        len(cyc) >= 3
        and is_path_in(g, cyc)
        and g.has_edge(cyc[-1], cyc[0])
    )


def hamilton_path_spanning(
    g: Graph, seed: int, budget: HamiltonBudget = DEFAULT_BUDGET
) -> tuple[int, ...] | None:
    """A verified spanning path of g with free endpoints, or None."""
    if g.n == 0:
        return None
    if g.n == 1:
        return (g.vertices[0],)
    if len(g.components()) > 1:
        return None
    status, order, _ = _run_engine(g, seed, budget, want_cycle=False)
    if status != _kernels.STATUS_PATH:
        return None
    path = tuple(order)
    assert len(path) == g.n and is_path_in(g, path)
    return path


def longest_path_probe(
    g: Graph, seed: int, budget: HamiltonBudget = DEFAULT_BUDGET
) -> tuple[int, ...]:
    """Best path found within budget (diagnostic; no optimality claim)."""
    if g.n == 0:
        return ()
    status, order, _ = _run_engine(g, seed, budget, want_cycle=False)
    path = tuple(order)
    assert is_path_in(g, path) or not path
    return path


def hamilton_path_endpoints(
    g: Graph,
    x: int,
    y: int,
    seed: int,
    budget: HamiltonBudget = DEFAULT_BUDGET,
) -> tuple[int, ...] | None:
    """A verified Hamilton path of g from x to y, or None.

    Reduction: a Hamilton x-y path of g is a Hamilton cycle of g plus an
    auxiliary vertex adjacent to exactly x and y.
    """
    if x == y or x not in g or y not in g:
        raise ValueError("endpoints must be two distinct vertices of g")
    if g.n == 2:
        return (x, y) if g.has_edge(x, y) else None
    aux = max(g.vertices) + 1
    ag = Graph(
        list(g.vertices) + [aux],
        list(g.edges()) + [(aux, x), (aux, y)],
    )
    cyc = hamilton_cycle(ag, seed, budget)
    if cyc is None:
        return None
    k = cyc.index(aux)
    order = cyc[k + 1 :] + cyc[:k]
    if order[0] == y:
        order = tuple(reversed(order))
    assert order[0] == x and order[-1] == y
    assert len(order) == g.n and is_path_in(g, order)
    return tuple(order)


def hamilton_cycle_with_boosters(
    g_start: Graph,
    host: Graph,
    booster_vertices: Iterable[int],
    seed: int,
    budget: HamiltonBudget = DEFAULT_BUDGET,
) -> tuple[tuple[int, ...], list[tuple[int, int]]] | None:
    """Grow g_start inside host by booster edges until Hamiltonian.

    A booster is adopted when the rotation walk is stuck and the current
    endpoint pair is a host edge (restricted to `booster_vertices` first;
    a second pass allows any host edge). Returns (cycle, added_edges) or
    None. The cycle is verified against host.
    """
    if host.n < 3:
        return None
    status, order, added = _run_engine(
        g_start, seed, budget, want_cycle=True, host=host, booster_ok=list(booster_vertices)
    )
    if status != _kernels.STATUS_CYCLE:
        # second pass: allow boosters anywhere in the host
        status, order, added = _run_engine(
            g_start, seed + 1, budget, want_cycle=True, host=host, booster_ok=host.vertices
        )
        if status != _kernels.STATUS_CYCLE:
            return None
    cyc = tuple(order)
    assert is_cycle_in(host, cyc), "booster engine returned an invalid cycle"
    return cyc, added


def posa_check(g: Graph) -> bool:
    """Degree-sequence sufficient condition for Hamiltonicity: with sorted
    degrees d_1 <= ... <= d_n, require d_i >= i+1 for every i <= (n-2)/2
    and, for odd n, d_ceil(n/2) >= ceil(n/2)."""
    n = g.n
    if n < 3:
        return False
    degs = sorted(g.degree(v) for v in g.vertices)
    for i in range(1, n + 1):
        if i <= (n - 2) / 2 and degs[i - 1] < i + 1:
            return False
    if n % 2 == 1:
        half = (n + 1) // 2
        if degs[half - 1] < half:
            return False
    return True


# -- expansion and structural property checks -------------------------------


@dataclass
class ExpanderVerdict:
    """certified_failure=True comes with a witness set re-checked against
    the graph; a pass is heuristic unless the exhaustive scope covered N."""

    certified_failure: bool
    witness: tuple[int, ...] | None
    exhaustive_upto: int
    samples: int

    @property
    def violation_found(self) -> bool:
        return self.certified_failure


def _neighborhood_size(g: Graph, s: Sequence[int]) -> int:
    ss = set(s)
    out = set()
    for v in ss:
        for w in g.neighbors(v):
            if w not in ss:
                out.add(w)
    return len(out)


def expander_check(
    g: Graph,
    alpha: float,
    n_cap: int,
    seed: int = 0,
    exhaustive_cap: int = 3,
    samples: int = 2000,
    pair_budget: int = 200_000,
) -> ExpanderVerdict:
    """Look for a set S, |S| <= n_cap, with |N(S)\\S| < alpha*|S|.

    Exhaustive over sizes 1..exhaustive_cap while the subset count stays
    within pair_budget; larger sizes are sampled (BFS-grown random
    connected-ish sets, the usual worst offenders). A certified failure is
    re-verified; absence of violations is explicitly heuristic.
    """
    from itertools import combinations

    verts = g.vertices
    n = g.n
    exhaustive_done = 0
    # size 1 is always exhaustive
    for v in verts:
        if 1 <= n_cap and g.degree(v) < alpha:
            return ExpanderVerdict(True, (v,), 1, 0)
    exhaustive_done = 1
    total = n
    for size in range(2, exhaustive_cap + 1):
        if size > n_cap or size > n:
            break
        total *= (n - size + 1) / size
        if total > pair_budget:
            break
        for sub in combinations(verts, size):
            if _neighborhood_size(g, sub) < alpha * size:
                return ExpanderVerdict(True, tuple(sub), exhaustive_done, 0)
        exhaustive_done = size

    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    done = 0
    for _ in range(samples):
        size = int(rng.integers(exhaustive_done + 1, n_cap + 1)) if n_cap > exhaustive_done else 0
        if size <= 0 or size > n:
            break
        # grow a connected-ish random set
        start = int(verts[rng.integers(0, n)])
        s = [start]
        pool = set(g.neighbors(start))
        while len(s) < size and pool:
            w = sorted(pool)[int(rng.integers(0, len(pool)))]
            s.append(w)
            pool.discard(w)
            pool.update(x for x in g.neighbors(w) if x not in s)
        if len(s) < size:
            continue
        done += 1
        if _neighborhood_size(g, s) < alpha * len(s):
            assert _neighborhood_size(g, s) < alpha * len(s)
            return ExpanderVerdict(True, tuple(sorted(s)), exhaustive_done, done)
    return ExpanderVerdict(False, None, exhaustive_done, done)


@dataclass
class PropertyVerdict:
    passed: bool
    witness: object | None = None
    scope: str = "exact"


@dataclass
class PropertyReport:
    """Named structural-property verdicts; failures carry witnesses."""

    verdicts: dict[str, PropertyVerdict] = field(default_factory=dict)

    def passed(self, name: str) -> bool:
        return self.verdicts[name].passed

    def failures(self) -> list[str]:
        return [k for k, v in self.verdicts.items() if not v.passed]


def steiner3_violation(g: Graph, s_set: Sequence[int], max_vertices: int) -> tuple[int, ...] | None:
    """Three S-vertices contained in a connected subgraph on <= max_vertices
    vertices, if any (witness = the three terminals). Exact via the spider
    formula: min over junctions x of the three nearest distinct S-sources.
    """
    s_list = sorted(set(s_set))
    if len(s_list) < 3:
        return None
    # multi-source BFS keeping up to 3 nearest distinct sources per vertex
    best: dict[int, list[tuple[int, int]]] = {v: [] for v in g.vertices}
    frontier: list[tuple[int, int]] = [(s, s) for s in s_list]
    for s in s_list:
        best[s].append((0, s))
    depth = 0
    budget = max_vertices  # depth beyond this cannot matter
    while frontier and depth < budget:
        depth += 1
        nxt: list[tuple[int, int]] = []
        for v, src in frontier:
            for w in g.neighbors(v):
                lab = best[w]
                if any(s == src for _, s in lab):
                    continue
                if len(lab) >= 3:
                    continue
                lab.append((depth, src))
                nxt.append((w, src))
        frontier = nxt
    for v in g.vertices:
        lab = best[v]
        if len(lab) >= 3:
            total = lab[0][0] + lab[1][0] + lab[2][0]
            if total + 1 <= max_vertices:
                return tuple(sorted(s for _, s in lab))
    return None


def short_cycle_near(
    g: Graph, s_set: Sequence[int], cycle_cap: int
) -> tuple[int, ...] | None:
    """A cycle of length <= cycle_cap through an S-vertex, if any.

    Lengths 3 and 4 are enumerated exactly; longer cycles (up to the cap)
    are found by per-source BFS, which is sound (every hit is genuine) and
    catches any cycle whose two arcs from the source are shortest paths.
    """
    from .graphs import find_s_paths_cycles

    if not s_set:
        return None
    _, short = find_s_paths_cycles(g, list(s_set))
    if short:
        return short[0]
    if cycle_cap <= 4:
        return None
    for s in sorted(set(s_set)):
        cyc = _shortest_cycle_through(g, s, cycle_cap)
        if cyc is not None:
            return cyc
    return None


def _shortest_cycle_through(g: Graph, s: int, cap: int) -> tuple[int, ...] | None:
    # BFS from s labelling each vertex with its first-hop branch; an edge
    # joining two different branches closes a cycle through s of length
    # d(a) + d(b) + 1.
    dist = {s: 0}
    branch = {s: s}
    parent = {s: s}
    order = [s]
    dq = [s]
    half = cap // 2 + 1
    while dq:
        nxt = []
        for v in dq:
            if dist[v] >= half:
                continue
            for w in g.neighbors(v):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    branch[w] = w if v == s else branch[v]
                    parent[w] = v
                    order.append(w)
                    nxt.append(w)
        dq = nxt
    bestlen = cap + 1
    bestpair = None
    for v in order:
        for w in g.neighbors(v):
            if w not in dist or v >= w:
                continue
            if branch.get(v) == branch.get(w) and v != s and w != s:
                continue
            if v == s or w == s:
                continue
            length = dist[v] + dist[w] + 1
            if length <= cap and length < bestlen and length >= 3:
                bestlen = length
                bestpair = (v, w)
    if bestpair is None:
        return None
    a, b = bestpair
    pa = [a]
    while pa[-1] != s:
        pa.append(parent[pa[-1]])
    pb = [b]
    while pb[-1] != s:
        pb.append(parent[pb[-1]])
    cyc = pa[::-1] + pb[:-1]
    return tuple(cyc)


def check_structural_properties(
    g: Graph,
    d_cap: float,
    which: Iterable[str] = ("C1", "C2", "C3"),
    r_max: int = 100,
    cycle_cap: int = 8,
    seed: int = 0,
    samples: int = 200,
) -> PropertyReport:
    """Structural checks used as preconditions and diagnostics.

    C1: no connected subgraph on <= r_max vertices holds three vertices of
        degree <= d_cap (exact via Steiner-spider distances).
    C2: no cycle of length <= cycle_cap meets a degree-<= d_cap vertex
        (exact within the length cap; longer cycles are out of scope and
        the scope is recorded).
    C3: no connected component of size in [3, n/2] (exact).
    C6/C7/C8: sampled edge-density and cross-edge checks (heuristic).
    B2: every pair at distance <= 10 has degree sum >= ln(n)/10 (exact,
        checked from the low-degree side).
    """
    report = PropertyReport()
    which = set(which)
    s_set = low_degree_set(g, d_cap)

    if "C1" in which:
        w = steiner3_violation(g, s_set, r_max)
        report.verdicts["C1"] = PropertyVerdict(w is None, w, f"exact, |R|<={r_max}")
    if "C2" in which:
        w = short_cycle_near(g, s_set, cycle_cap)
        report.verdicts["C2"] = PropertyVerdict(w is None, w, f"exact, cycles<={cycle_cap}")
    if "C3" in which:
        comps = g.components()
        bad = next((c for c in comps if 3 <= len(c) <= g.n / 2), None)
        report.verdicts["C3"] = PropertyVerdict(bad is None, bad, "exact")
    if "C6" in which or "C7" in which or "C8" in which:
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
        n = g.n
        logn = max(np.log(max(n, 3)), 1.0)
        kmax = max(1, int(n / np.sqrt(logn)))
        verts = np.array(g.vertices)
        if "C6" in which:
            bad = None
            for _ in range(samples):
                k = int(rng.integers(1, kmax + 1))
                sub = verts[rng.permutation(n)[:k]]
                ssub = set(int(x) for x in sub)
                e_in = sum(1 for u in ssub for v in g.neighbors(u) if v in ssub and u < v)
                if e_in > (logn ** 0.75) * k:
                    bad = tuple(sorted(ssub))
                    break
            report.verdicts["C6"] = PropertyVerdict(bad is None, bad, f"sampled({samples})")
        if "C7" in which:
            bad = None
            for _ in range(samples):
                kx = int(rng.integers(1, kmax + 1))
                ky = max(1, int((logn ** 0.25) * kx))
                if kx + ky > n:
                    continue
                perm = rng.permutation(n)
                xs = set(int(verts[i]) for i in perm[:kx])
                ys = set(int(verts[i]) for i in perm[kx : kx + ky])
                cross = sum(1 for u in xs for v in g.neighbors(u) if v in ys)
                if cross > d_cap * kx / 2:
                    bad = (tuple(sorted(xs))[:10], tuple(sorted(ys))[:10])
                    break
            report.verdicts["C7"] = PropertyVerdict(bad is None, bad, f"sampled({samples})")
        if "C8" in which:
            k = min(max(1, int(np.ceil(n / np.sqrt(logn)))), n // 2)
            bad = None
            for _ in range(min(samples, 50)):
                perm = rng.permutation(n)
                xs = set(int(verts[i]) for i in perm[:k])
                ys = set(int(verts[i]) for i in perm[k : 2 * k])
                cross = sum(1 for u in xs for v in g.neighbors(u) if v in ys)
                if cross < n / 6:
                    bad = (tuple(sorted(xs))[:10], tuple(sorted(ys))[:10])
                    break
            report.verdicts["C8"] = PropertyVerdict(bad is None, bad, f"sampled({min(samples, 50)})")
    if "B2" in which:
        n = g.n
        thresh = np.log(max(n, 3)) / 10
        bad = None
        for u in g.vertices:
            if g.degree(u) >= thresh:
                continue
            dist = g.bfs_distances(u, cap=10)
            for v, d in dist.items():
                if v != u and d <= 10 and g.degree(u) + g.degree(v) < thresh:
                    bad = (u, v)
                    break
            if bad:
                break
        report.verdicts["B2"] = PropertyVerdict(bad is None, bad, "exact")
    return report
