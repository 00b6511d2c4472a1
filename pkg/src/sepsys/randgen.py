"""Seeded random graph generators: binomial G(n,p) and random d-regular.

All randomness flows through Philox streams derived from a 64-bit seed plus
an optional stream key, so parallel trials get independent, reproducible
streams from (seed, trial_index).
"""

from __future__ import annotations

import numpy as np

from .graphs import Graph


def rng_from(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for (seed, stream...). Same arguments, same
    stream; distinct stream keys are independent."""
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def sub_seed(rng: np.random.Generator) -> int:
    """Draw a fresh 64-bit sub-seed for handing to a compiled kernel."""
    return int(rng.integers(0, 2**63 - 1, dtype=np.int64))


def gnp(n: int, p: float, seed: int, stream: tuple[int, ...] = ()) -> Graph:
    """Binomial random graph: each of the C(n,2) pairs appears independently
    with probability p. Deterministic per (n, p, seed, stream)."""
    if n <= 0:
        raise ValueError("n must be positive")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be a probability")
    if p == 0.0 or n == 1:
        return Graph.from_edge_count(n, [])
    total = n * (n - 1) // 2
    if p == 1.0:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
        return Graph.from_edge_count(n, edges)

    # Geometric skipping over the C(n,2) pair indices: O(expected edges).
    rng = rng_from(seed, *stream)
    positions: list[np.ndarray] = []
    pos = -1
    batch = min(4_000_000, max(256, int(total * p * 1.2) + 16))
    while pos < total:
        gaps = rng.geometric(p, size=batch)
        cum = np.cumsum(gaps, dtype=np.int64) + pos
        positions.append(cum)
        pos = int(cum[-1])
    idx = np.concatenate(positions)
    idx = idx[idx < total]

    edges = [_pair_from_index(int(k), n) for k in idx]
    return Graph.from_edge_count(n, edges)


def _pair_from_index(k: int, n: int) -> tuple[int, int]:
    """Map a linear index in [0, C(n,2)) to the k-th pair (u,v), u<v, in
    row-major order (0,1),(0,2),...,(1,2),..."""
    # row u starts at offset u*n - u*(u+1)/2 - u... solve with exact fixup
    u = int((2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8 * k)) // 2)
    while u * (2 * n - u - 1) // 2 > k:
        u -= 1
    while (u + 1) * (2 * n - u - 2) // 2 <= k:
        u += 1
    v = k - u * (2 * n - u - 1) // 2 + u + 1
    return u, v


class RegularGraphError(RuntimeError):
    """Raised when the stub-pairing sampler runs out of restarts."""


def random_regular(
    n: int, d: int, seed: int, stream: tuple[int, ...] = (), restarts: int = 200
) -> Graph:
    """Random d-regular simple graph via configuration-model stub pairing.

    Stubs are paired sequentially; pairs that would create a loop or a
    parallel edge are rejected and the attempt restarts when no suitable
    pair remains. Deterministic per (n, d, seed, stream). Requires n*d even
    and d < n.
    """
    if d < 0 or n <= 0:
        raise ValueError("need n > 0 and d >= 0")
    if d >= n:
        raise ValueError("d must be smaller than n")
    if (n * d) % 2 != 0:
        raise ValueError("n*d must be even")
    if d == 0:
        return Graph.from_edge_count(n, [])

    rng = rng_from(seed, *stream)
    for _ in range(restarts):
        edges = _pairing_attempt(n, d, rng)
        if edges is not None:
            g = Graph.from_edge_count(n, edges)
            assert all(g.degree(v) == d for v in g.vertices)
            return g
    raise RegularGraphError(
        f"no simple pairing found for n={n}, d={d} in {restarts} restarts"
    )


def _pairing_attempt(n: int, d: int, rng: np.random.Generator) -> list[tuple[int, int]] | None:
    edges: set[tuple[int, int]] = set()
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    rounds = 0
    while stubs.size:
        rounds += 1
        if rounds > 100 + 10 * d:
            return None
        rng.shuffle(stubs)
        leftovers: dict[int, int] = {}
        it = iter(stubs.tolist())
        for s1, s2 in zip(it, it):
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
            else:
                leftovers[s1] = leftovers.get(s1, 0) + 1
                leftovers[s2] = leftovers.get(s2, 0) + 1
        if not leftovers:
            return sorted(edges)
        if not _has_suitable_pair(edges, leftovers):
            return None
        stubs = np.array(
            [v for v, c in leftovers.items() for _ in range(c)], dtype=np.int64
        )
    return sorted(edges)


def _has_suitable_pair(edges: set[tuple[int, int]], leftovers: dict[int, int]) -> bool:
    keys = sorted(leftovers)
    for i, s1 in enumerate(keys):
        for s2 in keys[i + 1 :]:
            if (s1, s2) not in edges:
                return True
    return False


def max_degree_ok(g: Graph, c: float = 1.0) -> bool:
    """Diagnostic: max degree within (c+2)*ln(n), the typical envelope for
    binomial graphs with np <= 2 ln n."""
    n = g.n
    if n <= 1:
        return True
    return g.max_degree() <= (c + 2) * np.log(n)
