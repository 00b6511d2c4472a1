"""Halving separator for dense graphs: ceil(log2 n) rounds, each taking a
balanced half S of the vertices (balanced inside every current
indistinguishability class) whose induced subgraph is Hamiltonian; the
Hamilton cycles' vertex sets separate everything.

The half is sampled by pairing vertices inside classes and flipping a coin
per pair; vertices that end up with fewer than d/2 - t neighbors inside S
trigger a local resample of the nearby pairs (constructive analogue of the
local-lemma step), with a full restart as fallback.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import StrategyFailure
from .graphs import Graph
from .hamilton import DEFAULT_BUDGET, HamiltonBudget, hamilton_cycle
from .pathsys import PathSystem, lower_bound_log, verify_separation
from .randgen import rng_from, sub_seed

CliquePartition = list[list[int]]


@dataclass(frozen=True)
class DenseParams:
    """Desk-scale knobs. d/t default to the observed min degree and d/4."""

    d: float | None = None
    t: float | None = None
    split_restarts: int = 30
    resample_rounds: int = 60
    round_retries: int = 8
    hamilton: HamiltonBudget = field(default_factory=lambda: DEFAULT_BUDGET)


@dataclass
class DenseResult:
    system: PathSystem
    rounds: int
    split_resamples: int
    hamilton_retries: int


def halving_split(
    g: Graph,
    partition: CliquePartition,
    d: float,
    t: float,
    rng: np.random.Generator,
    params: DenseParams,
) -> tuple[list[int], int]:
    """A set S with |S| = ceil(n/2), balanced within every partition class,
    and with every vertex of g keeping at least d/2 - t neighbors inside S.

    Returns (S, resample_count). Raises StrategyFailure when the split
    budget is exhausted.
    """
    if not (d >= 2 * t >= 0):
        raise ValueError("need d >= 2t >= 0")
    n = g.n
    indptr, indices, verts = g.csr()
    pos = {int(v): i for i, v in enumerate(verts)}

    # within-class matchings on index-adjacent members, leftovers paired
    # across classes by index order
    pairs: list[tuple[int, int]] = []
    leftovers: list[int] = []
    for cls in partition:
        members = sorted(cls)
        for a, b in zip(members[::2], members[1::2]):
            pairs.append((a, b))
        if len(members) % 2:
            leftovers.append(members[-1])
    for a, b in zip(leftovers[::2], leftovers[1::2]):
        pairs.append((a, b))
    forced = leftovers[-1] if len(leftovers) % 2 else None

    need = d / 2 - t
    total_resamples = 0
    for _restart in range(params.split_restarts):
        flips = rng.integers(0, 2, size=len(pairs))
        for _round in range(params.resample_rounds):
            in_s = np.zeros(n, dtype=np.bool_)
            for (a, b), f in zip(pairs, flips):
                in_s[pos[a if f else b]] = True
            if forced is not None:
                in_s[pos[forced]] = True
            counts = _kernels.neighbor_count_in(indptr, indices, in_s, n)
            violated = np.nonzero(counts < need)[0]
            if violated.size == 0:
                s = sorted(int(verts[i]) for i in np.nonzero(in_s)[0])
                assert len(s) == (n + 1) // 2
                return s, total_resamples
            # resample pairs with an endpoint within distance 2 of a
            # violated vertex
            near = set(int(verts[i]) for i in violated)
            for i in violated:
                v = int(verts[i])
                for w in g.neighbors(v):
                    near.add(w)
                    near.update(g.neighbors(w))
            idxs = [k for k, (a, b) in enumerate(pairs) if a in near or b in near]
            if not idxs:
                break
            flips[np.array(idxs)] = rng.integers(0, 2, size=len(idxs))
            total_resamples += 1
    raise StrategyFailure("dense", "halving split budget exhausted")


def separate_dense(
    g: Graph,
    seed: int,
    params: DenseParams | None = None,
) -> DenseResult:
    """Exactly ceil(log2 n) separating cycles for a dense graph.

    Each round halves every indistinguishability class and covers the chosen
    half with a Hamilton cycle of the induced subgraph (an edge or a single
    vertex when the half is smaller than 3). Raises StrategyFailure with the
    round and set when Hamiltonicity fails within budget.
    """
    params = params or DenseParams()
    n = g.n
    if n < 2:
        raise ValueError("need at least 2 vertices")
    ell = lower_bound_log(n)
    d = params.d if params.d is not None else float(g.min_degree())
    t = params.t if params.t is not None else d / 4

    rng = rng_from(seed, 0xD5)
    partition: CliquePartition = [list(g.vertices)]
    paths: list[tuple[int, ...]] = []
    closed: list[bool] = []
    degenerate: list[int] = []
    resamples = 0
    ham_retries = 0

    for rnd in range(ell):
        cycle = None
        s: list[int] = []
        for attempt in range(params.round_retries):
            s, rs = halving_split(g, partition, d, t, rng, params)
            resamples += rs
            for cls in partition:
                inside = sum(1 for v in cls if v in set(s))
                assert inside in (len(cls) // 2, (len(cls) + 1) // 2)
            sub = g.induced(s)
            if len(s) == 1:
                cycle = (s[0],)
                break
            if len(s) == 2:
                if sub.m == 1:
                    cycle = tuple(s)
                    break
                ham_retries += 1
                continue
            found = hamilton_cycle(sub, sub_seed(rng), params.hamilton)
            if found is not None:
                cycle = found
                break
            ham_retries += 1
        if cycle is None:
            raise StrategyFailure(
                "dense",
                f"no Hamilton cycle for round {rnd} (|S|={len(s)})",
                details={"round": rnd, "set": s},
            )
        paths.append(cycle)
        closed.append(len(cycle) >= 3)
        if len(cycle) < 3:
            degenerate.append(rnd)
        s_set = set(cycle)
        new_partition: CliquePartition = []
        for cls in partition:
            a = [v for v in cls if v in s_set]
            b = [v for v in cls if v not in s_set]
            if a:
                new_partition.append(a)
            if b:
                new_partition.append(b)
        partition = new_partition

    assert all(len(c) == 1 for c in partition), "rounds must isolate all vertices"
    system = PathSystem.build(
        g, paths, closed, meta={"strategy": "dense", "degenerate_rounds": degenerate}
    )
    report = verify_separation(g, system)
    if not report.separates:
        raise StrategyFailure("dense", f"output failed verification: {report.witness_pair}")
    assert len(system) == ell
    return DenseResult(system, ell, resamples, ham_retries)
