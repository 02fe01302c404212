import itertools
from functools import lru_cache

import numpy as np
import pytest

from pachner.census import census_signatures, enumerate_census
from pachner.perm import COMPOSE, INVERSE, PERMS


@lru_cache(maxsize=None)
def census(n, one_vertex=False):
    return tuple(census_signatures(n, one_vertex))


@lru_cache(maxsize=None)
def tagged_census(n):
    return enumerate_census(n)


@pytest.fixture(scope="session")
def small_census():
    """Signatures of every closed triangulation with at most 3 tetrahedra."""
    return [s for n in (1, 2, 3) for s in census(n)]


_COMPOSE = np.array(COMPOSE)
_INVERSE = np.array(INVERSE)
_PERMS = np.array(PERMS)


def brute_canonical(tri):
    """Lexicographically smallest (adj, glu) table over all n! * 24^n
    relabellings.  Slow, but shares no code with the signature routines."""
    n = tri.size
    adj = np.array(tri.adj)
    glu = np.array(tri.glu)
    combos = np.array(list(itertools.product(range(24), repeat=n)))  # (24^n, n)
    best = None
    for sigma in itertools.permutations(range(n)):
        sigma = np.array(sigma)
        rows = np.zeros((len(combos), 8 * n), dtype=np.int64)
        for t in range(n):
            pt = combos[:, t]
            for f in range(4):
                a = adj[4 * t + f]
                col = 4 * sigma[t] + _PERMS[pt, f]  # (24^n,)
                pa = combos[:, a]
                g = _COMPOSE[_COMPOSE[pa, glu[4 * t + f]], _INVERSE[pt]]
                r = np.arange(len(combos))
                rows[r, col] = sigma[a]
                rows[r, 4 * n + col] = g
        order = np.lexsort(rows.T[::-1])
        cand = tuple(rows[order[0]])
        if best is None or cand < best:
            best = cand
    return best


def random_relabel(tri, rng):
    n = tri.size
    tet_map = list(range(n))
    rng.shuffle(tet_map)
    perms = [rng.randrange(24) for _ in range(n)]
    return tri.relabel(tet_map, perms)


def worked_example_triangulation():
    """The labelled three-tetrahedron example used to illustrate the
    encoding.  Each entry is (partner, images of the face's vertices in
    increasing order)."""
    from pachner.perm import from_images
    from pachner.triangulation import Triangulation

    table = {
        0: [(0, "120"), (1, "023"), (2, "013"), (0, "312")],
        1: [(2, "230"), (0, "023"), (1, "012"), (1, "013")],
        2: [(2, "012"), (1, "312"), (0, "013"), (2, "123")],
    }
    recs = []
    for t, row in table.items():
        for f, (t2, images) in enumerate(row):
            verts = [v for v in range(4) if v != f]
            m = {v: int(c) for v, c in zip(verts, images)}
            m[f] = ({0, 1, 2, 3} - set(m.values())).pop()
            recs.append((t, f, t2, from_images([m[v] for v in range(4)])))
    return Triangulation.from_gluings(3, recs)
