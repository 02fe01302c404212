"""Census of closed 3-manifold triangulations.

Enumeration runs in two stages.  First all connected 4-valent face
pairing graphs (loops and multiple edges allowed) are listed up to
isomorphism.  Then, for each pairing, the six possible gluing
permutations per face pair are tried by backtracking, pruning as soon
as an edge becomes identified with itself in reverse or a vertex link
becomes non-orientable.  Complete gluings whose vertex links are all
spheres are kept, and duplicates are removed by isomorphism signature.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .homology import homology_h1
from .isosig import decode, isosig
from .perm import INDEX, ODD, PERMS
from .triangulation import EDGE_INDEX, EDGE_VERTS, Triangulation, is_orientable, vertex_link_euler

UNPROVEN = "unproven"


# -- face pairings ------------------------------------------------------------


@dataclass(frozen=True)
class FacePairing:
    """A perfect matching on the 4n faces of n tetrahedra.

    ``pairs`` lists ``((t, f), (t2, f2))`` with the first face smaller,
    sorted.  ``matrix[i][j]`` counts face pairs between tetrahedra i and j
    (a loop counts twice on the diagonal, so every row sums to 4).
    """

    size: int
    pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]

    @property
    def matrix(self) -> list[list[int]]:
        m = [[0] * self.size for _ in range(self.size)]
        for (a, _), (b, _) in self.pairs:
            m[a][b] += 1
            m[b][a] += 1
        return m

    def partner(self) -> list[int]:
        out = [0] * (4 * self.size)
        for (a, f), (b, g) in self.pairs:
            out[4 * a + f] = 4 * b + g
            out[4 * b + g] = 4 * a + f
        return out


def _connected(m) -> bool:
    n = len(m)
    seen = {0}
    pending = [0]
    while pending:
        i = pending.pop()
        for j in range(n):
            if m[i][j] and j not in seen:
                seen.add(j)
                pending.append(j)
    return len(seen) == n


def _canonical_matrix(m) -> tuple:
    n = len(m)
    loops = [m[i][i] for i in range(n)]
    best = None
    # Only permutations sorting the loop counts can give the minimum.
    order = sorted(range(n), key=lambda i: -loops[i])
    groups = {}
    for i in order:
        groups.setdefault(loops[i], []).append(i)
    blocks = [groups[k] for k in sorted(groups, reverse=True)]

    def rec(k, prefix):
        nonlocal best
        if k == len(blocks):
            key = tuple(m[prefix[i]][prefix[j]] for i in range(n) for j in range(i, n))
            if best is None or key < best:
                best = key
            return
        for perm in permutations(blocks[k]):
            rec(k + 1, prefix + list(perm))

    rec(0, [])
    return best


def _matrices(n: int) -> Iterator[list[list[int]]]:
    """Symmetric non-negative matrices with even diagonal and row sums 4."""
    m = [[0] * n for _ in range(n)]
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    rest = [4] * n

    def rec(k):
        if k == len(cells):
            if not any(rest):
                yield [row[:] for row in m]
            return
        i, j = cells[k]
        if i == j:
            options = range(0, rest[i] // 2 + 1)
            for c in options:
                loops = 2 * c
                if loops > rest[i]:
                    break
                m[i][i] = loops
                rest[i] -= loops
                yield from rec(k + 1)
                rest[i] += loops
            m[i][i] = 0
        else:
            top = min(rest[i], rest[j])
            # Once the row is past its diagonal, the final cell takes the rest.
            if j == n - 1:
                options = [rest[i]] if rest[i] <= rest[j] else []
            else:
                options = range(top + 1)
            for c in options:
                m[i][j] = m[j][i] = c
                rest[i] -= c
                rest[j] -= c
                yield from rec(k + 1)
                rest[i] += c
                rest[j] += c
            m[i][j] = m[j][i] = 0

    yield from rec(0)


def _pairing_from_matrix(m) -> FacePairing:
    n = len(m)
    next_face = [0] * n
    pairs = []
    for i in range(n):
        for _ in range(m[i][i] // 2):
            a, b = next_face[i], next_face[i] + 1
            next_face[i] += 2
            pairs.append(((i, a), (i, b)))
        for j in range(i + 1, n):
            for _ in range(m[i][j]):
                pairs.append(((i, next_face[i]), (j, next_face[j])))
                next_face[i] += 1
                next_face[j] += 1
    return FacePairing(n, tuple(sorted(pairs)))


def enumerate_face_pairings(n: int) -> list[FacePairing]:
    """Connected face pairings of n tetrahedra, one per isomorphism class."""
    if n < 1:
        raise ValueError("size must be at least 1")
    seen = {}
    for m in _matrices(n):
        if not _connected(m):
            continue
        key = _canonical_matrix(m)
        if key not in seen:
            canon = [[0] * n for _ in range(n)]
            idx = 0
            for i in range(n):
                for j in range(i, n):
                    canon[i][j] = canon[j][i] = key[idx]
                    idx += 1
            seen[key] = _pairing_from_matrix(canon)
    return [seen[k] for k in sorted(seen)]


# -- gluing search ------------------------------------------------------------


class _UndoParityUF:
    """Union-find with parities and an undo log (no path compression)."""

    __slots__ = ("parent", "parity", "rank", "log")

    def __init__(self, size: int):
        self.parent = list(range(size))
        self.parity = [0] * size
        self.rank = [0] * size
        self.log = []

    def find(self, x):
        par = 0
        parent = self.parent
        while parent[x] != x:
            par ^= self.parity[x]
            x = parent[x]
        return x, par

    def union(self, x, y, rel) -> bool:
        """Impose parity(x) ^ parity(y) == rel; False on contradiction."""
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            self.log.append(None)
            return (px ^ py) == rel
        if self.rank[rx] > self.rank[ry]:
            rx, ry = ry, rx
        bump = self.rank[rx] == self.rank[ry]
        self.parent[rx] = ry
        self.parity[rx] = px ^ py ^ rel
        if bump:
            self.rank[ry] += 1
        self.log.append((rx, ry, bump))
        return True

    def undo(self):
        rec = self.log.pop()
        if rec is None:
            return
        rx, ry, bump = rec
        self.parent[rx] = rx
        self.parity[rx] = 0
        if bump:
            self.rank[ry] -= 1


# For each face f and each of its edges: (slot, a, b) with a < b.
_FACE_EDGES = tuple(
    tuple((s, a, b) for s, (a, b) in enumerate(EDGE_VERTS) if f not in (a, b)) for f in range(4)
)
# The six permutations sending f to g.
_PERMS_TO = tuple(tuple(tuple(i for i, p in enumerate(PERMS) if p[f] == g) for g in range(4)) for f in range(4))


def _pair_order(pairing: FacePairing):
    """Face pairs in breadth-first order from tetrahedron 0, so that
    constraints between nearby tetrahedra are checked early."""
    pairs = list(pairing.pairs)
    order = []
    reached = {0}
    used = [False] * len(pairs)
    while len(order) < len(pairs):
        pick = None
        for k, ((a, _), (b, _)) in enumerate(pairs):
            if not used[k] and (a in reached or b in reached):
                pick = k
                break
        used[pick] = True
        (a, f), (b, g) = pairs[pick]
        reached.update((a, b))
        order.append((a, f, b, g))
    return order


def gluings_for_pairing(pairing: FacePairing) -> Iterator[Triangulation]:
    """Every closed 3-manifold triangulation with this face pairing (labelled,
    so isomorphic triangulations may appear more than once)."""
    n = pairing.size
    order = _pair_order(pairing)
    edges = _UndoParityUF(6 * n)
    corners = _UndoParityUF(4 * n)
    adj = [-1] * (4 * n)
    glu = [-1] * (4 * n)
    depth = len(order)

    def place(k):
        if k == depth:
            tri = Triangulation(adj, glu)
            if all(x == 2 for x in vertex_link_euler(tri)):
                yield tri
            return
        t, f, t2, g = order[k]
        fe = _FACE_EDGES[f]
        for q in _PERMS_TO[f][g]:
            p = PERMS[q]
            ok = True
            steps = 0
            for s, a, b in fe:
                c, d = p[a], p[b]
                steps += 1
                if not edges.union(6 * t + s, 6 * t2 + EDGE_INDEX[c][d], 1 if c > d else 0):
                    ok = False
                    break
            csteps = 0
            if ok:
                rel = 0 if ODD[q] else 1
                for v in range(4):
                    if v == f:
                        continue
                    csteps += 1
                    if not corners.union(4 * t + v, 4 * t2 + p[v], rel):
                        ok = False
                        break
            if ok:
                adj[4 * t + f], glu[4 * t + f] = t2, q
                adj[4 * t2 + g], glu[4 * t2 + g] = t, INDEX[tuple(sorted(range(4), key=lambda v: p[v]))]
                yield from place(k + 1)
                adj[4 * t + f] = glu[4 * t + f] = -1
                adj[4 * t2 + g] = glu[4 * t2 + g] = -1
            for _ in range(csteps):
                corners.undo()
            for _ in range(steps):
                edges.undo()

    yield from place(0)


# -- census sets --------------------------------------------------------------


@dataclass(frozen=True)
class CensusEntry:
    signature: str
    one_vertex: bool
    orientable: bool
    s3: object = None  # True, False, UNPROVEN, or None when not computed


@dataclass
class CensusSet:
    """Signatures of one census size, sorted by character code, with flags."""

    size: int
    entries: dict = field(default_factory=dict)

    @property
    def signatures(self) -> list[str]:
        return sorted(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.signatures)

    def __contains__(self, sig) -> bool:
        return sig in self.entries

    def select(self, one_vertex: bool = False, s3_only: bool = False, orientable: bool = False) -> list[str]:
        out = []
        for s in self.signatures:
            e = self.entries[s]
            if one_vertex and not e.one_vertex:
                continue
            if orientable and not e.orientable:
                continue
            if s3_only and e.s3 is not True:
                continue
            out.append(s)
        return out

    def counts(self) -> dict:
        """Counts in the four columns of the census table."""
        out = {
            "all": len(self.select()),
            "one_vertex": len(self.select(one_vertex=True)),
        }
        if all(e.s3 is not None for e in self.entries.values()):
            out["s3"] = len(self.select(s3_only=True))
            out["one_vertex_s3"] = len(self.select(one_vertex=True, s3_only=True))
        return out


def census_signatures(n: int, one_vertex: bool = False, threads: int = 1) -> list[str]:
    """Sorted signatures of all closed 3-manifold triangulations of size n."""
    pairings = enumerate_face_pairings(n)
    work = [_pair_order(p) for p in pairings]
    from ._search import search_pairing

    def run(order):
        return search_pairing(n, order, one_vertex)[0]

    found = set()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for sigs in pool.map(run, work):
                found |= sigs
    else:
        for order in work:
            found |= run(order)
    return sorted(found)


def census_signatures_reference(n: int) -> list[str]:
    """The same census via the plain-Python search (slow; for cross-checks)."""
    found = set()
    for p in enumerate_face_pairings(n):
        for tri in gluings_for_pairing(p):
            found.add(isosig(tri))
    return sorted(found)


def enumerate_census(n: int, one_vertex: bool = False, s3_only: bool = False,
                     tag_s3: bool = True, threads: int = 1, budget: int = 500_000) -> CensusSet:
    """Census of size n, optionally restricted to one-vertex and/or 3-sphere
    triangulations.  ``tag_s3`` controls whether 3-sphere flags are computed
    (they are always computed when ``s3_only`` is set); ``budget`` bounds
    each recognizer search."""
    if n < 1:
        raise ValueError("size must be at least 1")
    out = CensusSet(n)
    for sig in census_signatures(n, one_vertex, threads):
        tri = decode(sig)
        ov = tri.skeleton.num_vertices == 1
        s3 = recognize_s3(tri, ov, budget) if (tag_s3 or s3_only) else None
        if s3_only and s3 is not True:
            continue
        out.entries[sig] = CensusEntry(sig, ov, is_orientable(tri), s3)
    return out


# -- 3-sphere recognition and simplification ----------------------------------

_S3_CACHE: dict = {}


@dataclass
class Reduction:
    """A move sequence taking ``start`` to a smaller triangulation ``end``.

    ``moves`` are applied in order to the labelled triangulation ``start``;
    ``signatures`` lists the signature reached after each move.
    """

    start: Triangulation
    end: Triangulation
    moves: list
    signatures: list


def reduce_once(tri: Triangulation, use_41: bool = False, budget: int = 500_000) -> Optional[Reduction]:
    """Search for a strictly smaller triangulation of the same manifold.

    Explores levels ``n`` and ``n + 1`` using 2-3 and 3-2 moves, plus flips
    at level ``n + 1`` (which pass through level ``n + 2``), so no
    intermediate triangulation has more than ``n + 2`` tetrahedra.  With
    ``use_41`` set, 4-1 moves are also tried and level ``n + 2`` is stored
    explicitly instead of being crossed by flips, since a 4-1 move may only
    become available there.  Returns None if no smaller
    triangulation is reachable; raises BudgetExceeded if more than
    ``budget`` triangulations would need to be stored.
    """
    from collections import deque

    from .moves import FLIPS, MOVE23, MOVE32, MOVE41, neighbours

    n = tri.size
    start_sig = isosig(tri)
    parent = {start_sig: None}
    objs = {start_sig: tri}
    pending = deque([start_sig])

    def path_to(sig, last_site, last_tri):
        moves, sigs = [last_site], [isosig(last_tri)]
        cur = sig
        while parent[cur] is not None:
            prev, site = parent[cur]
            moves.append(site)
            sigs.append(cur)
            cur = prev
        moves.reverse()
        sigs.reverse()
        return Reduction(tri, last_tri, moves, sigs)

    down = (MOVE32, MOVE41) if use_41 else (MOVE32,)
    while pending:
        sig = pending.popleft()
        cur = objs[sig]
        for site, res in neighbours(cur, down):
            if res.size < n:
                return path_to(sig, site, res)
            s = isosig(res)
            if s not in parent:
                parent[s] = (sig, site)
                objs[s] = res
                pending.append(s)
        if use_41:
            sideways = (MOVE23,) if cur.size < n + 2 else ()
        else:
            sideways = (MOVE23,) if cur.size == n else FLIPS
        for site, res in neighbours(cur, sideways):
            s = isosig(res)
            if s not in parent:
                parent[s] = (sig, site)
                objs[s] = res
                pending.append(s)
        if len(parent) > budget:
            raise BudgetExceeded(f"more than {budget} triangulations stored")
    return None


class BudgetExceeded(RuntimeError):
    """A search needed more nodes than its budget allows."""


def simplify(tri: Triangulation, use_41: Optional[bool] = None, budget: int = 500_000):
    """Greedily reduce until no smaller triangulation is reachable.

    Returns ``(final triangulation, moves, signatures)``; the moves replay
    from ``tri`` one at a time.
    """
    if use_41 is None:
        use_41 = tri.skeleton.num_vertices > 1
    moves, sigs = [], []
    cur = tri
    while True:
        red = reduce_once(cur, use_41, budget)
        if red is None:
            return cur, moves, sigs
        moves.extend(red.moves)
        sigs.extend(red.signatures)
        cur = red.end


def recognize_s3(tri: Triangulation, one_vertex: Optional[bool] = None, budget: int = 500_000):
    """Decide whether a closed triangulation of size at most 9 is a 3-sphere.

    Returns True or False, or ``UNPROVEN`` for larger triangulations or
    when the search budget runs out.  A False answer comes either from
    nontrivial homology, non-orientability, or from the bounded search
    failing to find any reduction.
    """
    if one_vertex is None:
        one_vertex = tri.skeleton.num_vertices == 1
    if tri.size > 9:
        return UNPROVEN
    sig = isosig(tri)
    hit = _S3_CACHE.get(sig)
    if hit is not None:
        return hit
    if not is_orientable(tri) or not homology_h1(tri).is_trivial():
        result = False
    elif tri.size <= 2:
        result = True
    else:
        try:
            red = reduce_once(tri, use_41=not one_vertex, budget=budget)
        except BudgetExceeded:
            return UNPROVEN
        if red is None:
            result = False
        else:
            result = recognize_s3(red.end, None, budget)
            if result is True:
                for s in red.signatures:
                    _S3_CACHE[s] = True
    if result is not UNPROVEN:
        _S3_CACHE[sig] = result
    return result


# -- files --------------------------------------------------------------------


def write_signatures(path, sigs: Iterable[str]) -> None:
    text = "".join(s + "\n" for s in sorted(sigs))
    Path(path).write_text(text, encoding="utf-8")


def read_signatures(path) -> list[str]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [ln.strip() for ln in lines if ln.strip()]


def census_report(sets: Iterable[CensusSet]) -> dict:
    """Per-size counts for each census column."""
    return {"sizes": [{"n": c.size, **c.counts()} for c in sets]}


def write_report(path, sets: Iterable[CensusSet]) -> None:
    Path(path).write_text(json.dumps(census_report(sets), indent=2) + "\n", encoding="utf-8")
