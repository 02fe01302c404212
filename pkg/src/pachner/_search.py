"""Compiled backtracking over gluing permutations for one face pairing.

Mirrors ``census.gluings_for_pairing`` but runs as an explicit-stack loop
and emits the minimal encoding of every surviving triangulation instead
of the triangulation itself.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from ._kernel import _CODES, _COMPOSE, _INVERSE, _PERMS, _digits, _min_encoding
from .perm import ODD, PERMS
from .triangulation import EDGE_INDEX, EDGE_VERTS

_ODD = np.array(ODD, dtype=np.int64)
_EDGE_INDEX = np.array(EDGE_INDEX, dtype=np.int64)
_FACE_EDGES = np.array(
    [[(s, a, b) for s, (a, b) in enumerate(EDGE_VERTS) if f not in (a, b)] for f in range(4)],
    dtype=np.int64,
)
_PERMS_TO = np.array(
    [[[i for i, p in enumerate(PERMS) if p[f] == g] for g in range(4)] for f in range(4)],
    dtype=np.int64,
)


@njit(cache=True, nogil=True)
def _uf_find(parent, parity, x):
    par = 0
    while parent[x] != x:
        par ^= parity[x]
        x = parent[x]
    return x, par


@njit(cache=True, nogil=True)
def _uf_union(parent, parity, rank, log, top, x, y, rel):
    # Returns (ok, new log top, merged).
    rx, px = _uf_find(parent, parity, x)
    ry, py = _uf_find(parent, parity, y)
    if rx == ry:
        log[top, 0] = -1
        return (px ^ py) == rel, top + 1, 0
    if rank[rx] > rank[ry]:
        rx, ry = ry, rx
    bump = 1 if rank[rx] == rank[ry] else 0
    parent[rx] = ry
    parity[rx] = px ^ py ^ rel
    rank[ry] += bump
    log[top, 0] = rx
    log[top, 1] = ry
    log[top, 2] = bump
    return True, top + 1, 1


@njit(cache=True, nogil=True)
def _uf_undo(parent, parity, rank, log, top, target):
    merges = 0
    while top > target:
        top -= 1
        rx = log[top, 0]
        if rx >= 0:
            parent[rx] = rx
            parity[rx] = 0
            rank[log[top, 1]] -= log[top, 2]
            merges += 1
    return merges


@njit(cache=True, nogil=True)
def _search(n, t1, f1, t2, f2, perms, odd, inverse, compose, edge_index, face_edges,
            perms_to, codes, d, one_vertex):
    depth = 2 * n
    eparent = np.arange(6 * n)
    eparity = np.zeros(6 * n, np.int64)
    erank = np.zeros(6 * n, np.int64)
    elog = np.zeros((3 * depth + 1, 3), np.int64)
    cparent = np.arange(4 * n)
    cparity = np.zeros(4 * n, np.int64)
    crank = np.zeros(4 * n, np.int64)
    clog = np.zeros((3 * depth + 1, 3), np.int64)
    etop_at = np.zeros(depth + 1, np.int64)
    ctop_at = np.zeros(depth + 1, np.int64)
    choice = np.full(depth, -1, np.int64)
    adj = np.full(4 * n, -1, np.int64)
    glu = np.full(4 * n, -1, np.int64)
    etop = 0
    ctop = 0
    emerges = 0
    cmerges = 0

    width = 3 + d + (4 * n + 2) // 3 + 2 * n * (d + 1)
    cap = 64
    out = np.zeros((cap, width), np.uint8)
    count = 0
    length = 0
    nodes = 0

    k = 0
    while k >= 0:
        if choice[k] >= 0:
            emerges -= _uf_undo(eparent, eparity, erank, elog, etop, etop_at[k])
            etop = etop_at[k]
            cmerges -= _uf_undo(cparent, cparity, crank, clog, ctop, ctop_at[k])
            ctop = ctop_at[k]
        choice[k] += 1
        if choice[k] == 6:
            choice[k] = -1
            k -= 1
            continue
        nodes += 1
        a, fa, b, fb = t1[k], f1[k], t2[k], f2[k]
        q = perms_to[fa, fb, choice[k]]
        etop_at[k] = etop
        ctop_at[k] = ctop
        ok = True
        for j in range(3):
            s = face_edges[fa, j, 0]
            x = face_edges[fa, j, 1]
            y = face_edges[fa, j, 2]
            c = perms[q, x]
            e = perms[q, y]
            rel = 1 if c > e else 0
            ok, etop, m = _uf_union(eparent, eparity, erank, elog, etop,
                                    6 * a + s, 6 * b + edge_index[c, e], rel)
            emerges += m
            if not ok:
                break
        if ok:
            rel = 0 if odd[q] == 1 else 1
            for v in range(4):
                if v == fa:
                    continue
                ok, ctop, m = _uf_union(cparent, cparity, crank, clog, ctop,
                                        4 * a + v, 4 * b + perms[q, v], rel)
                cmerges += m
                if not ok:
                    break
        if not ok:
            continue
        adj[4 * a + fa] = b
        glu[4 * a + fa] = q
        adj[4 * b + fb] = a
        glu[4 * b + fb] = inverse[q]
        if k < depth - 1:
            k += 1
            choice[k] = -1
            continue
        # Complete gluing: every vertex link is a closed orientable surface,
        # so they are all spheres exactly when V - E + n = 0.
        nv = 4 * n - cmerges
        ne = 6 * n - emerges
        if nv - ne + n != 0:
            continue
        if one_vertex and nv != 1:
            continue
        enc, bt, bp = _min_encoding(adj, glu, n, d, perms, compose, inverse, codes)
        length = enc.shape[0]
        if count == cap:
            bigger = np.zeros((2 * cap, width), np.uint8)
            bigger[:cap] = out
            out = bigger
            cap *= 2
        out[count, :length] = enc
        count += 1
    return out[:count, :length], nodes


def search_pairing(n, order, one_vertex=False):
    """Distinct signatures (as a set of str) of all valid gluings of one
    pairing, plus the number of search nodes visited."""
    arr = np.array(order, dtype=np.int64).reshape(-1, 4)
    enc, nodes = _search(n, arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy(), arr[:, 3].copy(),
                         _PERMS, _ODD, _INVERSE, _COMPOSE, _EDGE_INDEX, _FACE_EDGES,
                         _PERMS_TO, _CODES, _digits(n), one_vertex)
    sigs = {row.tobytes().decode("ascii") for row in enc}
    return sigs, int(nodes)
