"""Compiled minimum-encoding search.

Walks all 24n canonical labellings of a triangulation, encodes each one
into a byte buffer and keeps the smallest.  Every encoding of a given
triangulation has the same length, so a plain bytewise comparison gives
the ASCII order used for signatures.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .perm import COMPOSE, INVERSE, PERMS

_ALPHABET = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-"
_CODES = np.frombuffer(_ALPHABET.encode("ascii"), dtype=np.uint8).copy()
_PERMS = np.array(PERMS, dtype=np.int64)
_COMPOSE = np.array(COMPOSE, dtype=np.int64)
_INVERSE = np.array(INVERSE, dtype=np.int64)


@njit(cache=True, nogil=True)
def _encode_from(adj, glu, n, d, start_t, start_p, perms, compose, inverse, codes,
                 label_of, tet_of, phi, types, dests, qs, out):
    for t in range(n):
        label_of[t] = -1
    label_of[start_t] = 0
    tet_of[0] = start_t
    phi[0] = start_p
    n_labelled = 1
    n_types = 0
    n_old = 0
    for k in range(n):
        if k >= n_labelled:
            return -1
        t = tet_of[k]
        pk = phi[k]
        for f in range(4):
            i = 4 * t + perms[pk, f]
            a = adj[i]
            if a < 0:
                types[n_types] = 0
                n_types += 1
                continue
            g = glu[i]
            if label_of[a] < 0:
                label_of[a] = n_labelled
                tet_of[n_labelled] = a
                phi[n_labelled] = compose[g, pk]
                n_labelled += 1
                types[n_types] = 1
                n_types += 1
                continue
            k2 = label_of[a]
            q = compose[inverse[phi[k2]], compose[g, pk]]
            f2 = perms[q, f]
            if k2 < k or (k2 == k and f2 < f):
                continue
            types[n_types] = 2
            n_types += 1
            dests[n_old] = k2
            qs[n_old] = q
            n_old += 1

    pos = 0
    if n < 63:
        out[pos] = codes[n]
        pos += 1
    else:
        out[pos] = codes[63]
        out[pos + 1] = codes[d]
        pos += 2
        x = n
        for _ in range(d):
            out[pos] = codes[x & 63]
            x >>= 6
            pos += 1
    j = 0
    while j < n_types:
        v = types[j]
        if j + 1 < n_types:
            v += 4 * types[j + 1]
        if j + 2 < n_types:
            v += 16 * types[j + 2]
        out[pos] = codes[v]
        pos += 1
        j += 3
    for j in range(n_old):
        x = dests[j]
        for _ in range(d):
            out[pos] = codes[x & 63]
            x >>= 6
            pos += 1
    for j in range(n_old):
        out[pos] = codes[qs[j]]
        pos += 1
    return pos


@njit(cache=True, nogil=True)
def _min_encoding(adj, glu, n, d, perms, compose, inverse, codes):
    label_of = np.empty(n, np.int64)
    tet_of = np.empty(n, np.int64)
    phi = np.empty(n, np.int64)
    types = np.empty(4 * n, np.int64)
    dests = np.empty(2 * n, np.int64)
    qs = np.empty(2 * n, np.int64)
    size = 3 + d + (4 * n + 2) // 3 + 2 * n * (d + 1)
    best = np.empty(size, np.uint8)
    cur = np.empty(size, np.uint8)
    best_len = -1
    best_t = -1
    best_p = -1
    for t in range(n):
        for p in range(24):
            m = _encode_from(adj, glu, n, d, t, p, perms, compose, inverse, codes,
                             label_of, tet_of, phi, types, dests, qs, cur)
            if m < 0:
                return best[:0], -1, -1
            better = best_len < 0
            if not better:
                for j in range(m):
                    if cur[j] != best[j]:
                        better = cur[j] < best[j]
                        break
            if better:
                best[:m] = cur[:m]
                best_len = m
                best_t = t
                best_p = p
    return best[:best_len], best_t, best_p


def _digits(n):
    d = 1
    while 64 ** d <= n:
        d += 1
    return d


def min_encoding_with_start(adj, glu):
    """Smallest encoding plus the (tet, perm) start that produces it."""
    n = len(adj) // 4
    a = np.asarray(adj, dtype=np.int64)
    g = np.asarray(glu, dtype=np.int64)
    buf, t, p = _min_encoding(a, g, n, _digits(n), _PERMS, _COMPOSE, _INVERSE, _CODES)
    if t < 0:
        raise ValueError("triangulation is not connected")
    return buf.tobytes().decode("ascii"), int(t), int(p)


def min_encoding(adj, glu) -> str:
    return min_encoding_with_start(adj, glu)[0]
