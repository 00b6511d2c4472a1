"""Compiled inner loops for the rotation-extension Hamilton engines.

Everything here works on CSR adjacency over positional indices 0..n-1 and
uses a splitmix64 stream for reproducible decisions. The public wrappers in
hamilton.py translate to/from vertex ids and re-verify every result, so a
kernel bug can cause a missed cycle but never a wrong answer.

The path lives in the middle of a buffer of length 2n+2 and grows at both
ends; rotations reverse only the segment between the pivot and the working
end. Extension uses the Warnsdorff rule (fewest unvisited neighbors first),
which threads forced chains through degree-2 vertices; rotations prefer
pivots whose induced endpoint can extend.
"""

from __future__ import annotations

import numpy as np
from numba import njit

U64 = np.uint64

STATUS_CYCLE = 0
STATUS_PATH = 1
STATUS_FAIL = 2

MAX_EXTRA = 16


@njit(cache=True, inline="always")
def _mix(state):
    # splitmix64 step
    state = (state + U64(0x9E3779B97F4A7C15)) & U64(0xFFFFFFFFFFFFFFFF)
    z = state
    z = ((z ^ (z >> U64(30))) * U64(0xBF58476D1CE4E5B9)) & U64(0xFFFFFFFFFFFFFFFF)
    z = ((z ^ (z >> U64(27))) * U64(0x94D049BB133111EB)) & U64(0xFFFFFFFFFFFFFFFF)
    return state, z ^ (z >> U64(31))


@njit(cache=True, inline="always")
def _randint(state, bound):
    state, z = _mix(state)
    return state, np.int64(z % U64(bound))


@njit(cache=True)
def _has_static_edge(indptr, indices, u, v):
    lo = indptr[u]
    hi = indptr[u + 1]
    while lo < hi:
        mid = (lo + hi) // 2
        w = indices[mid]
        if w == v:
            return True
        if w < v:
            lo = mid + 1
        else:
            hi = mid
    return False


@njit(cache=True, inline="always")
def _has_edge(indptr, indices, extra, extra_cnt, u, v):
    if _has_static_edge(indptr, indices, u, v):
        return True
    for t in range(extra_cnt[u]):
        if extra[u, t] == v:
            return True
    return False


@njit(cache=True, inline="always")
def _nbr(indptr, indices, extra, extra_cnt, v, t):
    """t-th neighbor of v over static then extra adjacency."""
    base = indptr[v + 1] - indptr[v]
    if t < base:
        return indices[indptr[v] + t]
    return extra[v, t - base]


@njit(cache=True, inline="always")
def _deg(indptr, v, extra_cnt):
    return indptr[v + 1] - indptr[v] + extra_cnt[v]


@njit(cache=True, inline="always")
def _unvisited_degree(indptr, indices, extra, extra_cnt, pos, v):
    un = np.int64(0)
    for t in range(indptr[v], indptr[v + 1]):
        if pos[indices[t]] < 0:
            un += 1
    for t in range(extra_cnt[v]):
        if pos[extra[v, t]] < 0:
            un += 1
    return un


@njit(cache=True)
def rotation_engine(
    indptr,
    indices,
    n,
    seed,
    rot_budget,
    restarts,
    want_cycle,
    host_indptr,
    host_indices,
    use_boosters,
    booster_ok,
    stall_window,
):
    """Longest-path rotation-extension engine.

    Returns (status, order, n_added, added_edges). On failure `order` is the
    best path seen. Booster edges (host edges adopted between stuck endpoint
    pairs) persist across restarts and are reported in added_edges.
    """
    state = U64(seed if seed > 0 else 1)

    extra = np.full((n, MAX_EXTRA), -1, dtype=np.int64)
    extra_cnt = np.zeros(n, dtype=np.int64)
    added = np.empty((4 * n + MAX_EXTRA, 2), dtype=np.int64)
    n_added = 0

    buf = np.empty(2 * n + 2, dtype=np.int64)
    pos = np.full(n, -1, dtype=np.int64)
    best_path = np.empty(0, dtype=np.int64)

    if n == 0:
        return STATUS_FAIL, best_path, 0, added[:0]
    if n == 1:
        buf[0] = 0
        if want_cycle:
            return STATUS_FAIL, best_path, 0, added[:0]
        return STATUS_PATH, buf[:1].copy(), 0, added[:0]

    for _restart in range(restarts):
        for i in range(n):
            pos[i] = -1
        state, r = _randint(state, n)
        lo = n
        hi = n
        buf[lo] = r
        pos[r] = lo
        budget = rot_budget
        best_in_restart = np.int64(1)
        since_progress = np.int64(0)

        while budget > 0:
            plen = hi - lo + 1
            if plen > best_in_restart:
                best_in_restart = plen
                since_progress = 0
            tail = buf[hi]
            head = buf[lo]

            # recenter if the buffer edge is near
            if hi >= 2 * n or lo <= 1:
                shift = n - (hi - lo + 1) // 2 - lo
                if shift > 0:
                    for i in range(hi, lo - 1, -1):
                        buf[i + shift] = buf[i]
                        pos[buf[i + shift]] = i + shift
                else:
                    for i in range(lo, hi + 1):
                        buf[i + shift] = buf[i]
                        pos[buf[i + shift]] = i + shift
                lo += shift
                hi += shift
                tail = buf[hi]
                head = buf[lo]

            # -- extension, Warnsdorff at tail then head ------------------
            best = np.int64(-1)
            best_key = np.int64(1 << 60)
            at_tail = True
            for t in range(_deg(indptr, tail, extra_cnt)):
                w = _nbr(indptr, indices, extra, extra_cnt, tail, t)
                if pos[w] >= 0:
                    continue
                un = _unvisited_degree(indptr, indices, extra, extra_cnt, pos, w)
                state, z = _mix(state)
                key = un * np.int64(1 << 20) + np.int64(z & U64(0xFFFF))
                if key < best_key:
                    best_key = key
                    best = w
            if best >= 0:
                hi += 1
                buf[hi] = best
                pos[best] = hi
                continue
            for t in range(_deg(indptr, head, extra_cnt)):
                w = _nbr(indptr, indices, extra, extra_cnt, head, t)
                if pos[w] >= 0:
                    continue
                un = _unvisited_degree(indptr, indices, extra, extra_cnt, pos, w)
                state, z = _mix(state)
                key = un * np.int64(1 << 20) + np.int64(z & U64(0xFFFF))
                if key < best_key:
                    best_key = key
                    best = w
                    at_tail = False
            if best >= 0:
                lo -= 1
                buf[lo] = best
                pos[best] = lo
                continue

            # -- both ends stuck ------------------------------------------
            plen = hi - lo + 1
            if not want_cycle and plen == n:
                return STATUS_PATH, buf[lo : hi + 1].copy(), n_added, added[:n_added]

            closing = _has_edge(indptr, indices, extra, extra_cnt, tail, head)
            if not closing and use_boosters and plen > 2:
                if booster_ok[tail] and booster_ok[head]:
                    if _has_static_edge(host_indptr, host_indices, tail, head):
                        if (
                            extra_cnt[tail] < MAX_EXTRA
                            and extra_cnt[head] < MAX_EXTRA
                            and n_added < added.shape[0]
                        ):
                            extra[tail, extra_cnt[tail]] = head
                            extra_cnt[tail] += 1
                            extra[head, extra_cnt[head]] = tail
                            extra_cnt[head] += 1
                            added[n_added, 0] = tail
                            added[n_added, 1] = head
                            n_added += 1
                            closing = True

            if closing and plen == n:
                return (
                    STATUS_CYCLE if want_cycle else STATUS_PATH,
                    buf[lo : hi + 1].copy(),
                    n_added,
                    added[:n_added],
                )

            if closing:
                # cycle over the path's vertices: re-root at a vertex with
                # an unvisited neighbor and keep extending
                pivot = np.int64(-1)
                state, off = _randint(state, plen)
                for step in range(plen):
                    i = lo + ((off + step) % plen)
                    if _unvisited_degree(indptr, indices, extra, extra_cnt, pos, buf[i]) > 0:
                        pivot = i
                        break
                if pivot < 0:
                    break  # component exhausted; restart
                newbuf = np.empty(plen, dtype=np.int64)
                k = 0
                for i in range(pivot + 1, hi + 1):
                    newbuf[k] = buf[i]
                    k += 1
                for i in range(lo, pivot + 1):
                    newbuf[k] = buf[i]
                    k += 1
                lo = n - plen // 2
                hi = lo + plen - 1
                for k in range(plen):
                    buf[lo + k] = newbuf[k]
                    pos[newbuf[k]] = lo + k
                budget -= 1
                since_progress += 1
                if since_progress > stall_window:
                    break
                continue

            # -- rotation with look-ahead at both ends ---------------------
            chosen = np.int64(-1)
            chosen_end_tail = True
            chosen_key = np.int64(-1)
            fallback = np.int64(-1)
            fallback_end_tail = True
            fallback_key = np.int64(-1)
            for t in range(_deg(indptr, tail, extra_cnt)):
                u0 = _nbr(indptr, indices, extra, extra_cnt, tail, t)
                i0 = pos[u0]
                if i0 < lo or i0 >= hi - 1:
                    continue
                w0 = buf[i0 + 1]
                un = _unvisited_degree(indptr, indices, extra, extra_cnt, pos, w0)
                state, z = _mix(state)
                jitter = np.int64(z & U64(0xFFFF))
                if un > 0:
                    key = un * np.int64(1 << 20) + jitter
                    if key > chosen_key:
                        chosen_key = key
                        chosen = u0
                        chosen_end_tail = True
                elif jitter > fallback_key:
                    fallback_key = jitter
                    fallback = u0
                    fallback_end_tail = True
            for t in range(_deg(indptr, head, extra_cnt)):
                u0 = _nbr(indptr, indices, extra, extra_cnt, head, t)
                i0 = pos[u0]
                if i0 <= lo + 1 or i0 > hi:
                    continue
                w0 = buf[i0 - 1]
                un = _unvisited_degree(indptr, indices, extra, extra_cnt, pos, w0)
                state, z = _mix(state)
                jitter = np.int64(z & U64(0xFFFF))
                if un > 0:
                    key = un * np.int64(1 << 20) + jitter
                    if key > chosen_key:
                        chosen_key = key
                        chosen = u0
                        chosen_end_tail = False
                elif jitter > fallback_key:
                    fallback_key = jitter
                    fallback = u0
                    fallback_end_tail = False

            if chosen >= 0:
                u = chosen
                u_tail = chosen_end_tail
            elif fallback >= 0:
                u = fallback
                u_tail = fallback_end_tail
            else:
                break  # no rotation available; restart

            if u_tail:
                # reverse buf[pos[u]+1 .. hi]
                a = pos[u] + 1
                b = hi
            else:
                # reverse buf[lo .. pos[u]-1]
                a = lo
                b = pos[u] - 1
            while a < b:
                va = buf[a]
                vb = buf[b]
                buf[a] = vb
                buf[b] = va
                pos[va] = b
                pos[vb] = a
                a += 1
                b -= 1
            budget -= 1
            since_progress += 1
            if since_progress > stall_window:
                break

        plen = hi - lo + 1
        if plen > best_path.shape[0]:
            best_path = buf[lo : hi + 1].copy()

    return STATUS_FAIL, best_path, n_added, added[:n_added]


@njit(cache=True)
def neighbor_count_in(indptr, indices, members, n):
    """For each vertex, the number of neighbors inside the member mask."""
    out = np.zeros(n, dtype=np.int64)
    for v in range(n):
        c = 0
        for t in range(indptr[v], indptr[v + 1]):
            if members[indices[t]]:
                c += 1
        out[v] = c
    return out
