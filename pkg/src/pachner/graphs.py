"""Level-set searches through the Pachner graph.

Nodes are isomorphism signatures; the level of a node is its number of
tetrahedra.  Arcs are 2-3 / 3-2 moves between adjacent levels, and the
length searches also use octahedron, pillow and prism flips at the upper
level (each worth two moves, since each passes through the level above).

Every search processes its frontier in sorted-signature order and merges
results serially, so outputs do not depend on the thread count.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .census import BudgetExceeded
from .isosig import ALPHABET, decode, isosig
from .moves import FLIPS, MOVE23, MOVE32, MoveSite, apply_move, neighbours

INF = math.inf
DEFAULT_BUDGET = 1_000_000


def sig_level(sig: str) -> int:
    """Number of tetrahedra encoded by a signature (read from its header)."""
    first = ALPHABET.index(sig[0])
    if first < 63:
        return first
    d = ALPHABET.index(sig[1])
    return sum(ALPHABET.index(c) << (6 * k) for k, c in enumerate(sig[2:2 + d]))


# -- storage ------------------------------------------------------------------


class UnionFind:
    """Disjoint sets over dense integer ids, tracking the number of sets."""

    def __init__(self):
        self.parent: list[int] = []
        self.rank: list[int] = []
        self.count = 0

    def add(self) -> int:
        self.parent.append(len(self.parent))
        self.rank.append(0)
        self.count += 1
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.count -= 1
        return True


@dataclass(frozen=True)
class Arc:
    source: int
    target: int
    site: MoveSite
    weight: int


class NodeStore:
    """Signatures with dense ids, levels, optional arc records, and a
    union-find over the stored nodes."""

    def __init__(self, record_arcs: bool = False, budget: Optional[int] = None):
        self.ids: dict[str, int] = {}
        self.sigs: list[str] = []
        self.levels: list[int] = []
        self.uf = UnionFind()
        self.record_arcs = record_arcs
        self.arcs: list[Arc] = []
        self.budget = budget

    def __len__(self) -> int:
        return len(self.sigs)

    def __contains__(self, sig: str) -> bool:
        return sig in self.ids

    def add(self, sig: str) -> tuple[int, bool]:
        i = self.ids.get(sig)
        if i is not None:
            return i, False
        if self.budget is not None and len(self.sigs) >= self.budget:
            raise BudgetExceeded(f"node budget of {self.budget} exhausted")
        i = self.uf.add()
        self.ids[sig] = i
        self.sigs.append(sig)
        self.levels.append(sig_level(sig))
        return i, True

    def connect(self, a: int, b: int, site: MoveSite, weight: int = 1) -> bool:
        if self.record_arcs:
            self.arcs.append(Arc(a, b, site, weight))
        return self.uf.union(a, b)

    @property
    def components(self) -> int:
        return self.uf.count

    def level_counts(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for lv in self.levels:
            out[lv] = out.get(lv, 0) + 1
        return dict(sorted(out.items()))

    def arc_dump(self) -> list[tuple[str, str, MoveSite, int]]:
        """``(source, target, site, weight)`` per recorded arc; the site is
        relative to ``decode(source)``."""
        return [(self.sigs[a.source], self.sigs[a.target], a.site, a.weight) for a in self.arcs]


# -- expansion ----------------------------------------------------------------


def expand(sig: str, kinds) -> list[tuple[MoveSite, str]]:
    """``(site, target signature)`` for each move of the given kinds, with
    sites relative to ``decode(sig)``."""
    tri = decode(sig)
    return [(site, isosig(res)) for site, res in neighbours(tri, kinds)]


class _Expander:
    def __init__(self, threads: int = 1):
        self.threads = max(1, int(threads))

    def map(self, sigs: list[str], kinds_for) -> list:
        jobs = [(s, kinds_for(s)) for s in sigs]
        if self.threads == 1 or len(jobs) < 2:
            return [expand(s, k) for s, k in jobs]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(lambda job: expand(*job), jobs))


def _common_level(sigs: Iterable[str]) -> int:
    levels = {sig_level(s) for s in sigs}
    if len(levels) != 1:
        raise ValueError("all signatures must lie at the same level")
    return levels.pop()


# -- height bounds --------------------------------------------------------------


@dataclass
class HeightResult:
    """Outcome of a height search.

    ``bound`` is the excess height found (None if the search stopped
    without connecting everything).  ``trace[k]`` is the number of
    components once levels up to ``n + k`` have been added, and
    ``nodes_per_level`` counts stored nodes by level.
    """

    level: int
    bound: Optional[int]
    trace: list[int]
    nodes_per_level: dict[int, int]
    partial: bool = False
    arcs: list = field(default_factory=list)

    @property
    def tight(self) -> bool:
        return self.bound is not None and self.bound <= 2


def height_bound(level_set: Iterable[str], budget: int = DEFAULT_BUDGET, threads: int = 1,
                 max_height: Optional[int] = None, record_arcs: bool = False) -> HeightResult:
    """Expand upwards with 2-3 moves until the level set is connected."""
    start = sorted(set(level_set))
    n = _common_level(start)
    store = NodeStore(record_arcs, budget)
    for s in start:
        store.add(s)
    ex = _Expander(threads)
    trace = [store.components]
    top = n
    frontier = start
    try:
        while store.components > 1:
            if max_height is not None and top - n >= max_height:
                return HeightResult(n, None, trace, store.level_counts(), True, store.arc_dump())
            new = []
            for s, nbrs in zip(frontier, ex.map(frontier, lambda _: (MOVE23,))):
                a = store.ids[s]
                for site, t in nbrs:
                    b, fresh = store.add(t)
                    if fresh:
                        new.append(t)
                    store.connect(a, b, site)
            top += 1
            trace.append(store.components)
            frontier = sorted(new)
    except BudgetExceeded:
        trace.append(store.components)
        return HeightResult(n, None, trace, store.level_counts(), True, store.arc_dump())
    return HeightResult(n, top - n, trace, store.level_counts(), False, store.arc_dump())


def height_bound_two_phase(level_set: Iterable[str], budget: int = DEFAULT_BUDGET,
                           threads: int = 1, record_arcs: bool = False) -> HeightResult:
    """Add level n + 1 explicitly, then join its nodes by flips without ever
    storing level n + 2."""
    start = sorted(set(level_set))
    n = _common_level(start)
    store = NodeStore(record_arcs, budget)
    for s in start:
        store.add(s)
    ex = _Expander(threads)
    trace = [store.components]
    if store.components == 1:
        return HeightResult(n, 0, trace, store.level_counts(), False, store.arc_dump())
    upper = []
    try:
        for s, nbrs in zip(start, ex.map(start, lambda _: (MOVE23,))):
            a = store.ids[s]
            for site, t in nbrs:
                b, fresh = store.add(t)
                if fresh:
                    upper.append(t)
                store.connect(a, b, site)
    except BudgetExceeded:
        trace.append(store.components)
        return HeightResult(n, None, trace, store.level_counts(), True, store.arc_dump())
    trace.append(store.components)
    if store.components == 1:
        return HeightResult(n, 1, trace, store.level_counts(), False, store.arc_dump())
    upper.sort()
    for s, nbrs in zip(upper, ex.map(upper, lambda _: FLIPS)):
        a = store.ids[s]
        for site, t in nbrs:
            b = store.ids.get(t)
            if b is not None:
                store.connect(a, b, site, 2)
    trace.append(store.components)
    bound = 2 if store.components == 1 else None
    return HeightResult(n, bound, trace, store.level_counts(), False, store.arc_dump())


# -- weighted search over two levels ------------------------------------------


def _two_level_kinds(base: int):
    def kinds(sig):
        return (MOVE23,) if sig_level(sig) == base else (MOVE32,) + FLIPS
    return kinds


def _weighted_search(sources: list[str], base: int, targets: set, ex: _Expander,
                     budget: int) -> dict[str, int]:
    """Fewest moves from the sources to each node in levels ``base`` and
    ``base + 1``, counting flips as two moves.  Stops once every target is
    settled."""
    dist = {s: 0 for s in sources}
    buckets: list[list[str]] = [sorted(sources)]
    done = set()
    kinds = _two_level_kinds(base)
    d = 0
    while d < len(buckets):
        pending = sorted({v for v in buckets[d] if dist[v] == d and v not in done})
        for v, nbrs in zip(pending, ex.map(pending, kinds)):
            done.add(v)
            for site, w in nbrs:
                lv = sig_level(w)
                if lv != base and lv != base + 1:
                    continue
                step = 2 if site.kind in FLIPS else 1
                nd = d + step
                if w not in dist or nd < dist[w]:
                    if w not in dist and len(dist) >= budget:
                        raise BudgetExceeded(f"node budget of {budget} exhausted")
                    dist[w] = nd
                    while len(buckets) <= nd:
                        buckets.append([])
                    buckets[nd].append(w)
        if all(t in dist and dist[t] <= d for t in targets):
            break
        d += 1
    return dist


@dataclass
class LengthResult:
    """Outcome of the simplification-length search at one level.

    ``histogram[k]`` counts level-n nodes first reached after ``k`` steps.
    """

    level: int
    bound: float
    histogram: dict[int, int]
    sources: int
    total: int
    missing: int
    partial: bool = False

    @property
    def average_parts(self) -> tuple[int, int]:
        """Unreduced numerator and denominator of ``average_bound``."""
        return sum(c * (k + 1) for k, c in self.histogram.items()), self.total

    @property
    def average_bound(self) -> Fraction:
        """Mean of the per-node bounds ``k + 1`` over the level set."""
        return Fraction(*self.average_parts)

    @property
    def phi(self) -> Fraction:
        """Fraction of level-n nodes that have a 3-2 move."""
        return Fraction(self.sources, self.total)


def length_bound(level_set: Iterable[str], budget: int = DEFAULT_BUDGET, threads: int = 1) -> LengthResult:
    """Multi-source weighted search from the nodes that admit a 3-2 move."""
    nodes = sorted(set(level_set))
    n = _common_level(nodes)
    ex = _Expander(threads)
    sources = [s for s, nbrs in zip(nodes, ex.map(nodes, lambda _: (MOVE32,))) if nbrs]
    if not sources:
        return LengthResult(n, INF, {}, 0, len(nodes), len(nodes))
    try:
        dist = _weighted_search(sources, n, set(nodes), ex, budget)
        partial = False
    except BudgetExceeded:
        return LengthResult(n, INF, {}, len(sources), len(nodes), len(nodes), True)
    hist: dict[int, int] = {}
    missing = 0
    for s in nodes:
        if s in dist:
            hist[dist[s]] = hist.get(dist[s], 0) + 1
        else:
            missing += 1
    bound = INF if missing else max(hist) + 1
    return LengthResult(n, bound, dict(sorted(hist.items())), len(sources), len(nodes), missing, partial)


# -- minimal-level connectivity -----------------------------------------------


@dataclass
class MinResult:
    """``h_min`` from the level-capped union-find search and ``l_min`` from the
    per-source weighted searches (either may be None if not computed)."""

    level: int
    h_min: Optional[int] = None
    l_min: Optional[float] = None
    eccentricities: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    partial: bool = False


def min_height(base_set: Iterable[str], budget: int = DEFAULT_BUDGET, threads: int = 1,
               max_height: Optional[int] = None) -> MinResult:
    """Smallest excess height joining all nodes of the base level."""
    start = sorted(set(base_set))
    if not start:
        raise ValueError("base set must not be empty")
    b = _common_level(start)
    store = NodeStore(False, budget)
    for s in start:
        store.add(s)
    ex = _Expander(threads)
    top = b
    trace = [store.components]
    try:
        while store.components > 1:
            if max_height is not None and top - b >= max_height:
                return MinResult(b, None, trace=trace, partial=True)
            queue = deque(sorted(s for s in store.sigs if sig_level(s) == top))
            while queue:
                batch = sorted(queue)
                queue.clear()
                for s, nbrs in zip(batch, ex.map(batch, lambda _: (MOVE23, MOVE32))):
                    a = store.ids[s]
                    for site, t in nbrs:
                        if sig_level(t) > top + 1:
                            continue
                        c, fresh = store.add(t)
                        if fresh:
                            queue.append(t)
                        store.connect(a, c, site)
            top += 1
            trace.append(store.components)
    except BudgetExceeded:
        return MinResult(b, None, trace=trace, partial=True)
    return MinResult(b, top - b, trace=trace)


def min_length(base_set: Iterable[str], budget: int = DEFAULT_BUDGET, threads: int = 1) -> MinResult:
    """Largest, over base nodes, of the moves needed to reach every other
    base node within two levels above the base (flips counted as two)."""
    nodes = sorted(set(base_set))
    if not nodes:
        raise ValueError("base set must not be empty")
    b = _common_level(nodes)
    ex = _Expander(threads)
    ecc = {}
    targets = set(nodes)
    for s in nodes:
        try:
            dist = _weighted_search([s], b, targets, ex, budget)
        except BudgetExceeded:
            return MinResult(b, None, None, ecc, partial=True)
        ecc[s] = INF if any(t not in dist for t in nodes) else max(dist[t] for t in nodes)
    return MinResult(b, None, max(ecc.values()), ecc)


# -- paths and classes --------------------------------------------------------


@dataclass
class Path:
    """Moves taking ``decode(start)`` to a triangulation with signature
    ``end``; ``signatures[k]`` is reached after ``moves[k]``."""

    start: str
    end: str
    moves: list
    signatures: list

    @property
    def intermediate(self) -> list[str]:
        return self.signatures[:-1]

    def replay(self):
        """Apply the moves from ``decode(start)``, checking each signature."""
        cur = decode(self.start)
        for site, sig in zip(self.moves, self.signatures):
            cur = apply_move(cur, site)
            if isosig(cur) != sig:
                raise AssertionError(f"move {site} did not reach {sig}")
        return cur


def find_path(a: str, b: str, height_cap: int, budget: int = DEFAULT_BUDGET,
              threads: int = 1) -> Optional[Path]:
    """Shortest 2-3 / 3-2 path from ``a`` to ``b`` that never rises more
    than ``height_cap`` levels above the higher endpoint; None if there is
    none within the cap.  Raises BudgetExceeded if the search outgrows
    ``budget`` nodes."""
    a = isosig(decode(a))
    b = isosig(decode(b))
    if a == b:
        return Path(a, b, [], [])
    top = max(sig_level(a), sig_level(b)) + height_cap
    ex = _Expander(threads)
    parent = {a: None}
    frontier = [a]
    found = False
    while frontier and not found:
        nxt = []
        for s, nbrs in zip(frontier, ex.map(frontier, lambda _: (MOVE23, MOVE32))):
            for _, t in nbrs:
                if t in parent or sig_level(t) > top:
                    continue
                parent[t] = s
                nxt.append(t)
                if t == b:
                    found = True
            if len(parent) > budget:
                raise BudgetExceeded(f"node budget of {budget} exhausted")
        frontier = sorted(nxt)
    if not found:
        return None
    chain = [b]
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    chain.reverse()
    # Re-derive each move on the actual labelled triangulation reached so far.
    cur = decode(a)
    moves = []
    for want in chain[1:]:
        for site, res in neighbours(cur, (MOVE23, MOVE32)):
            if isosig(res) == want:
                moves.append(site)
                cur = res
                break
    return Path(a, b, moves, chain[1:])


class Partition(list):
    """Sorted list of classes; ``partial`` is set when the node budget ran
    out, in which case classes may still be split."""

    partial = False


def connectivity_classes(node_set: Iterable[str], height_cap: int, budget: int = DEFAULT_BUDGET,
                         threads: int = 1) -> Partition:
    """Partition same-level nodes by connectivity through 2-3 / 3-2 moves
    without rising more than ``height_cap`` levels."""
    nodes = sorted(set(node_set))
    if not nodes:
        return Partition()
    n = _common_level(nodes)
    store = NodeStore(False, budget)
    for s in nodes:
        store.add(s)
    ex = _Expander(threads)
    frontier = nodes
    partial = False
    try:
        while frontier:
            nxt = []
            for s, nbrs in zip(frontier, ex.map(frontier, lambda _: (MOVE23, MOVE32))):
                a = store.ids[s]
                for site, t in nbrs:
                    if sig_level(t) > n + height_cap:
                        continue
                    c, fresh = store.add(t)
                    if fresh:
                        nxt.append(t)
                    store.connect(a, c, site)
            frontier = sorted(nxt)
    except BudgetExceeded:
        partial = True
    groups: dict[int, list[str]] = {}
    for s in nodes:
        groups.setdefault(store.uf.find(store.ids[s]), []).append(s)
    out = Partition(sorted(groups.values()))
    out.partial = partial
    return out
