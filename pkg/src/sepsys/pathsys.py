"""Path systems over a host graph, separation verification, lower bounds,
and an exact brute-force oracle for tiny graphs.

A path system is an ordered family of vertex paths (single vertices are
length-0 paths). An entry may be flagged "closed": the vertex sequence is
a Hamilton path of a cycle and the closing edge must also exist. Separation
depends only on the vertex sets, so the flag is metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graphs import Graph


class InvalidPathError(ValueError):
    """A system entry is not a valid (optionally closed) path of the host."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"path {index}: {reason}")
        self.index = index
        self.reason = reason


@dataclass(frozen=True)
class PathSystem:
    """Ordered family of paths living in `host`."""

    host: Graph
    paths: tuple[tuple[int, ...], ...]
    closed: tuple[bool, ...] = ()
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.closed:
            object.__setattr__(self, "closed", (False,) * len(self.paths))
        if len(self.closed) != len(self.paths):
            raise ValueError("closed flags must match the number of paths")

    def __len__(self) -> int:
        return len(self.paths)

    @classmethod
    def build(
        cls,
        host: Graph,
        paths: Iterable[Sequence[int]],
        closed: Iterable[bool] | None = None,
        meta: dict | None = None,
    ) -> "PathSystem":
        tpaths = tuple(tuple(int(v) for v in p) for p in paths)
        tclosed = tuple(bool(c) for c in closed) if closed is not None else ()
        return cls(host, tpaths, tclosed, meta or {})


@dataclass
class SeparationReport:
    """Outcome of verifying a path system against its host."""

    separates: bool
    witness_pair: tuple[int, int] | None
    codes: dict[int, int]  # vertex -> bitmask, bit j set iff vertex on path j
    n_paths: int

    def code_bits(self, v: int) -> str:
        return format(self.codes[v], f"0{self.n_paths}b")[::-1]


def validate_paths(g: Graph, sys: PathSystem) -> None:
    """Raise InvalidPathError on the first entry that is not a valid path
    (adjacency + distinct vertices; closed entries also need the closing
    edge and length >= 3)."""
    for idx, (seq, closed) in enumerate(zip(sys.paths, sys.closed)):
        if len(seq) == 0:
            raise InvalidPathError(idx, "empty vertex sequence")
        if len(set(seq)) != len(seq):
            raise InvalidPathError(idx, "repeated vertex")
        for v in seq:
            if v not in g:
                raise InvalidPathError(idx, f"unknown vertex {v}")
        for a, b in zip(seq, seq[1:]):
            if not g.has_edge(a, b):
                raise InvalidPathError(idx, f"missing edge ({a},{b})")
        if closed:
            if len(seq) < 3:
                raise InvalidPathError(idx, "closed entry with fewer than 3 vertices")
            if not g.has_edge(seq[-1], seq[0]):
                raise InvalidPathError(idx, f"missing closing edge ({seq[-1]},{seq[0]})")


def membership_codes(g: Graph, sys: PathSystem) -> dict[int, int]:
    """Per-vertex membership bitmasks (bit j = vertex lies on path j)."""
    codes = {v: 0 for v in g.vertices}
    for j, seq in enumerate(sys.paths):
        bit = 1 << j
        for v in seq:
            codes[v] |= bit
    return codes


def verify_separation(g: Graph, sys: PathSystem) -> SeparationReport:
    """Verify that sys separates V(g): validates every path, computes
    membership codes and checks pairwise distinctness. The witness pair, if
    any, is the lexicographically least unseparated pair."""
    if sys.host is not g and sys.host.vertices != g.vertices:
        raise ValueError("system host does not match graph")
    validate_paths(g, sys)
    codes = membership_codes(g, sys)
    by_code: dict[int, list[int]] = {}
    for v in g.vertices:  # vertices iterated in sorted order
        by_code.setdefault(codes[v], []).append(v)
    witness = None
    for members in by_code.values():
        if len(members) > 1:
            pair = (members[0], members[1])
            if witness is None or pair < witness:
                witness = pair
    return SeparationReport(
        separates=witness is None,
        witness_pair=witness,
        codes=codes,
        n_paths=len(sys),
    )


def lower_bound_log(n: int) -> int:
    """ceil(log2 n); 0 for n = 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return (n - 1).bit_length()


def lower_bound_leaves(g: Graph) -> int:
    """ceil(2*(L-1)/3) where L is the number of degree-1 vertices; 0 when
    there are none."""
    leaves = sum(1 for v in g.vertices if g.degree(v) == 1)
    if leaves == 0:
        return 0
    return -((-2 * (leaves - 1)) // 3)


# -- exact oracle ------------------------------------------------------------


class OracleBudgetError(RuntimeError):
    pass


DEFAULT_ORACLE_CAP = 8


def enumerate_path_sets(g: Graph) -> dict[int, tuple[int, ...]]:
    """All vertex sets realizable by simple paths of g, as bitmask ->
    one witness path. Positions follow g.vertices order."""
    verts = g.vertices
    pos = {v: i for i, v in enumerate(verts)}
    out: dict[int, tuple[int, ...]] = {}
    for v in verts:
        out.setdefault(1 << pos[v], (v,))

    def extend(path: list[int], mask: int):
        tail = path[-1]
        for w in g.neighbors(tail):
            b = 1 << pos[w]
            if mask & b:
                continue
            path.append(w)
            nm = mask | b
            # reversal dedup: keep paths whose endpoints are ordered
            if path[0] <= w:
                out.setdefault(nm, tuple(path))
            extend(path, nm)
            path.pop()

    for v in verts:
        extend([v], 1 << pos[v])
    return out


def exact_sp(
    g: Graph,
    cap: int = DEFAULT_ORACLE_CAP,
    force: bool = False,
    node_budget: int = 5_000_000,
) -> tuple[int, PathSystem]:
    """Minimum separating path system size by branch and bound over the
    distinct realizable path vertex-sets, plus a witness system.

    Only intended for tiny graphs; refuses n > cap unless force=True.
    """
    n = g.n
    if n == 0:
        raise ValueError("empty graph")
    if n > cap and not force:
        raise ValueError(f"n={n} above oracle cap {cap}; pass force=True to override")
    verts = g.vertices
    if n == 1:
        return 0, PathSystem.build(g, [])

    sets = enumerate_path_sets(g)
    masks = sorted(sets)
    full = (1 << n) - 1

    lb = max(lower_bound_log(n), lower_bound_leaves(g))
    nodes = 0

    def split_classes(classes: list[int], m: int) -> list[int]:
        out = []
        for c in classes:
            a = c & m
            b = c & ~m & full
            if a and a.bit_count() >= 1:
                out.append(a)
            if b and b.bit_count() >= 1:
                out.append(b)
        return out

    def min_extra(classes: list[int]) -> int:
        worst = max((c.bit_count() for c in classes), default=1)
        return (worst - 1).bit_length()

    def search(classes: list[int], chosen: list[int], budget: int) -> list[int] | None:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise OracleBudgetError(f"oracle node budget exhausted ({node_budget})")
        bad = [c for c in classes if c.bit_count() > 1]
        if not bad:
            return list(chosen)
        if budget == 0 or min_extra(bad) > budget:
            return None
        # branch on the least unseparated pair: candidates must split it
        target = min(bad, key=lambda c: _lowest_two(c))
        u_bit, v_bit = _lowest_two_bits(target)
        cands = [m for m in masks if bool(m & u_bit) != bool(m & v_bit)]
        # prefer candidates that split many currently-collided classes
        cands.sort(key=lambda m: -sum(1 for c in bad if 0 < (c & m).bit_count() < c.bit_count()))
        for m in cands:
            if m in chosen:
                continue
            chosen.append(m)
            res = search(split_classes(classes, m), chosen, budget - 1)
            if res is not None:
                return res
            chosen.pop()
        return None

    size = lb
    while True:
        res = search([full], [], size)
        if res is not None:
            witness = PathSystem.build(g, [sets[m] for m in res])
            report = verify_separation(g, witness)
            assert report.separates
            return size, witness
        size += 1


def _lowest_two(c: int) -> tuple[int, int]:
    i = (c & -c).bit_length() - 1
    rest = c & (c - 1)
    j = (rest & -rest).bit_length() - 1
    return (i, j)


def _lowest_two_bits(c: int) -> tuple[int, int]:
    lo = c & -c
    rest = c & (c - 1)
    return lo, rest & -rest


# -- path-system text format -------------------------------------------------
#
# One path per line, space-separated vertex ids; a trailing '*' marks a
# closed cycle; '#' starts a comment.


def parse_pathsystem(text: str, host: Graph) -> PathSystem:
    paths: list[tuple[int, ...]] = []
    closed: list[bool] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        is_closed = parts[-1] == "*"
        if is_closed:
            parts = parts[:-1]
        if not parts:
            raise ValueError("closed marker without vertices")
        paths.append(tuple(int(x) for x in parts))
        closed.append(is_closed)
    return PathSystem.build(host, paths, closed)


def format_pathsystem(sys: PathSystem) -> str:
    lines = []
    for seq, cl in zip(sys.paths, sys.closed):
        line = " ".join(str(v) for v in seq)
        if cl:
            line += " *"
        lines.append(line)
    return "\n".join(lines) + "\n"


def read_pathsystem(path: str, host: Graph) -> PathSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pathsystem(fh.read(), host)


def write_pathsystem(sys: PathSystem, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_pathsystem(sys))


def verify_large(g: Graph, sys: PathSystem) -> SeparationReport:
    """Vectorized verifier for systems with many long paths. Semantically
    identical to verify_separation; used by strategies on big hosts."""
    if g.n * max(len(sys), 1) < 2_000_000:
        return verify_separation(g, sys)
    validate_paths_vectorized(g, sys)
    verts = np.array(g.vertices, dtype=np.int64)
    pos = {int(v): i for i, v in enumerate(verts)}
    k = len(sys)
    matrix = np.zeros((g.n, k), dtype=bool)
    for j, seq in enumerate(sys.paths):
        rows = np.fromiter((pos[v] for v in seq), dtype=np.int64, count=len(seq))
        matrix[rows, j] = True
    packed = np.packbits(matrix, axis=1, bitorder="little")
    order = np.lexsort(packed.T[::-1])
    sortedp = packed[order]
    same = (sortedp[1:] == sortedp[:-1]).all(axis=1)
    witness = None
    i = 0
    while i < same.size:
        if same[i]:
            j = i
            while j < same.size and same[j]:
                j += 1
            group = sorted(int(verts[order[t]]) for t in range(i, j + 1))
            pair = (group[0], group[1])
            if witness is None or pair < witness:
                witness = pair
            i = j
        else:
            i += 1
    codes: dict[int, int] = {}
    for i, v in enumerate(verts):
        codes[int(v)] = int.from_bytes(packed[i].tobytes(), "little")
    return SeparationReport(separates=witness is None, witness_pair=witness, codes=codes, n_paths=k)


def validate_paths_vectorized(g: Graph, sys: PathSystem) -> None:
    keys = g.edge_keys()
    for idx, (seq, cl) in enumerate(zip(sys.paths, sys.closed)):
        if len(seq) == 0:
            raise InvalidPathError(idx, "empty vertex sequence")
        arr = np.array(seq, dtype=np.int64)
        if np.unique(arr).size != arr.size:
            raise InvalidPathError(idx, "repeated vertex")
        for v in (int(arr[0]), int(arr[-1])):
            if v not in g:
                raise InvalidPathError(idx, f"unknown vertex {v}")
        if arr.size > 1:
            if keys.size == 0:
                raise InvalidPathError(idx, f"missing edge ({int(arr[0])},{int(arr[1])})")
            a = arr[:-1]
            b = arr[1:]
            lo = np.minimum(a, b)
            hi = np.maximum(a, b)
            want = (lo << 32) | hi
            found = keys[np.clip(np.searchsorted(keys, want), 0, keys.size - 1)] == want
            if not found.all():
                bad = int(np.nonzero(~found)[0][0])
                raise InvalidPathError(idx, f"missing edge ({int(a[bad])},{int(b[bad])})")
        if cl:
            if arr.size < 3:
                raise InvalidPathError(idx, "closed entry with fewer than 3 vertices")
            u, v = int(arr[-1]), int(arr[0])
            if not g.has_edge(u, v):
                raise InvalidPathError(idx, f"missing closing edge ({u},{v})")
