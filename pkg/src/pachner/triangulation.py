"""Generalised 3-manifold triangulations and their skeleta.

A triangulation of size ``n`` is stored as two flat tuples indexed by
``4 * tet + face``: ``adj`` holds the partner tetrahedron (``-1`` for a
boundary face) and ``glu`` the lexicographic index of the gluing
permutation.  A gluing permutation ``p`` on face ``f`` of ``t`` sends each
vertex ``v`` of ``t`` to vertex ``p(v)`` of the partner, with ``p(f)`` the
partner face.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

from .perm import COMPOSE, INVERSE, ODD, PERMS, Perm4, transposition

# Edge slots of a tetrahedron, ordered as pairs of vertices a < b.
EDGE_VERTS: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_INDEX = [[-1] * 4 for _ in range(4)]
for _e, (_a, _b) in enumerate(EDGE_VERTS):
    EDGE_INDEX[_a][_b] = EDGE_INDEX[_b][_a] = _e
del _e, _a, _b

_SWAP23 = transposition(2, 3)

# For each edge slot, a permutation P with P[0], P[1] the endpoints in
# increasing order and P[2] < P[3] the remaining two vertices.
EDGE_START: tuple[int, ...] = tuple(
    PERMS.index((a, b) + tuple(v for v in range(4) if v not in (a, b)))
    for a, b in EDGE_VERTS
)


class Triangulation:
    """An immutable labelled triangulation.

    Construct one with :meth:`from_gluings`, or pass the raw ``adj`` and
    ``glu`` tuples directly.  The raw constructor only checks shapes and
    ranges; reciprocity and the manifold conditions are reported by
    :func:`validate`.
    """

    __slots__ = ("size", "adj", "glu", "_skeleton")

    def __init__(self, adj: Iterable[int], glu: Iterable[int]):
        adj = tuple(adj)
        glu = tuple(glu)
        if not adj or len(adj) % 4 or len(adj) != len(glu):
            raise ValueError("gluing tables must have equal length 4n with n >= 1")
        n = len(adj) // 4
        for a, g in zip(adj, glu):
            if a == -1:
                if g != -1:
                    raise ValueError("boundary face carries a permutation")
            elif not (0 <= a < n and 0 <= g < 24):
                raise ValueError(f"gluing out of range: tet {a}, perm {g}")
        self.size = n
        self.adj = adj
        self.glu = glu
        self._skeleton = None

    @classmethod
    def from_gluings(cls, n: int, gluings) -> "Triangulation":
        """Build from ``(tet, face, partner, perm)`` records.

        ``perm`` may be a :class:`Perm4`, a lexicographic index, or an
        image tuple.  Reverse records are filled in automatically; giving
        both directions is allowed if they agree.
        """
        if n < 1:
            raise ValueError("a triangulation needs at least one tetrahedron")
        adj = [-1] * (4 * n)
        glu = [-1] * (4 * n)
        for t, f, t2, p in gluings:
            if isinstance(p, Perm4):
                p = p.index
            elif not isinstance(p, int):
                p = Perm4(p).index
            f2 = PERMS[p][f]
            if (t, f) == (t2, f2):
                raise ValueError(f"face {f} of tetrahedron {t} glued to itself")
            for (a, b, q) in ((t * 4 + f, t2, p), (t2 * 4 + f2, t, INVERSE[p])):
                if adj[a] != -1 and (adj[a], glu[a]) != (b, q):
                    raise ValueError(f"conflicting gluings for tetrahedron {a // 4} face {a % 4}")
                adj[a] = b
                glu[a] = q
        return cls(adj, glu)

    # -- basic queries ---------------------------------------------------

    def partner(self, t: int, f: int) -> Optional[tuple[int, int, int]]:
        """``(partner tet, partner face, perm index)`` or None on boundary."""
        i = 4 * t + f
        if self.adj[i] < 0:
            return None
        g = self.glu[i]
        return self.adj[i], PERMS[g][f], g

    def gluings(self) -> list[tuple[int, int, int, int]]:
        """Each glued face pair once, from its lexicographically smaller side."""
        out = []
        for i, a in enumerate(self.adj):
            if a < 0:
                continue
            t, f = divmod(i, 4)
            f2 = PERMS[self.glu[i]][f]
            if (t, f) < (a, f2):
                out.append((t, f, a, self.glu[i]))
        return out

    def is_closed(self) -> bool:
        return -1 not in self.adj

    def relabel(self, tet_map, vertex_perms) -> "Triangulation":
        """Isomorphic copy: old tet ``t`` becomes ``tet_map[t]`` and its vertex
        ``v`` becomes ``PERMS[vertex_perms[t]][v]``."""
        n = self.size
        adj = [-1] * (4 * n)
        glu = [-1] * (4 * n)
        for t in range(n):
            pt = vertex_perms[t]
            for f in range(4):
                i = 4 * t + f
                a = self.adj[i]
                j = 4 * tet_map[t] + PERMS[pt][f]
                if a < 0:
                    continue
                adj[j] = tet_map[a]
                glu[j] = COMPOSE[COMPOSE[vertex_perms[a]][self.glu[i]]][INVERSE[pt]]
        return Triangulation(adj, glu)

    @property
    def skeleton(self) -> "Skeleton":
        if self._skeleton is None:
            self._skeleton = compute_skeleton(self)
        return self._skeleton

    def __eq__(self, other) -> bool:
        return isinstance(other, Triangulation) and self.adj == other.adj and self.glu == other.glu

    def __hash__(self) -> int:
        return hash((self.adj, self.glu))

    def __repr__(self) -> str:
        return f"<Triangulation n={self.size} gluings={self.gluings()}>"


# -- skeleton -----------------------------------------------------------------


@dataclass(frozen=True)
class Skeleton:
    """Vertex, edge and face classes of a triangulation.

    ``vertex_of[4t+v]``, ``edge_of[6t+e]`` and ``face_of[4t+f]`` give class
    ids.  ``edge_sign[6t+e]`` is +1 when edge slot ``e`` of ``t`` (oriented
    from its smaller to its larger vertex) agrees with its class's reference
    orientation, -1 otherwise.  ``edge_degree`` counts slot incidences.
    ``bad_edges`` lists classes identified with themselves in reverse.
    """

    vertex_of: tuple[int, ...]
    edge_of: tuple[int, ...]
    edge_sign: tuple[int, ...]
    face_of: tuple[int, ...]
    vertex_classes: tuple[tuple[tuple[int, int], ...], ...]
    edge_classes: tuple[tuple[tuple[int, int], ...], ...]
    face_classes: tuple[tuple[tuple[int, int], ...], ...]
    edge_degree: tuple[int, ...]
    bad_edges: tuple[int, ...]

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_classes)

    @property
    def num_edges(self) -> int:
        return len(self.edge_classes)

    @property
    def num_faces(self) -> int:
        return len(self.face_classes)

    def edge_endpoints(self, e: int) -> tuple[int, int]:
        """Vertex classes at the tail and head of edge class ``e``."""
        t, slot = self.edge_classes[e][0]
        a, b = EDGE_VERTS[slot]
        if self.edge_sign[6 * t + slot] < 0:
            a, b = b, a
        return self.vertex_of[4 * t + a], self.vertex_of[4 * t + b]


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def _find_parity(parent, parity, x):
    # Returns (root, parity of x relative to root) with path compression.
    path = []
    while parent[x] != x:
        path.append(x)
        x = parent[x]
    root = x
    acc = 0
    for y in reversed(path):
        acc ^= parity[y]
        parity[y] = acc
        parent[y] = root
    return root, (parity[path[0]] if path else 0)


def _classes(keys, n_slots, per_tet):
    ids = {}
    of = [0] * n_slots
    members: list[list[tuple[int, int]]] = []
    for i in range(n_slots):
        r = keys[i]
        c = ids.get(r)
        if c is None:
            c = ids[r] = len(members)
            members.append([])
        of[i] = c
        members[c].append(divmod(i, per_tet))
    return tuple(of), tuple(tuple(m) for m in members)


def compute_skeleton(tri: Triangulation) -> Skeleton:
    n = tri.size
    adj, glu = tri.adj, tri.glu
    vparent = list(range(4 * n))
    eparent = list(range(6 * n))
    eparity = [0] * (6 * n)
    bad_slots = set()

    for i in range(4 * n):
        t2 = adj[i]
        if t2 < 0:
            continue
        t, f = divmod(i, 4)
        p = PERMS[glu[i]]
        if (t2, p[f]) < (t, f):
            continue
        for v in range(4):
            if v != f:
                a, b = _find(vparent, 4 * t + v), _find(vparent, 4 * t2 + p[v])
                if a != b:
                    vparent[a] = b
        for slot, (a, b) in enumerate(EDGE_VERTS):
            if a == f or b == f:
                continue
            c, d = p[a], p[b]
            x, y = 6 * t + slot, 6 * t2 + EDGE_INDEX[c][d]
            flip = 1 if c > d else 0
            rx, px = _find_parity(eparent, eparity, x)
            ry, py = _find_parity(eparent, eparity, y)
            if rx == ry:
                if px ^ py != flip:
                    bad_slots.add(x)
            else:
                eparent[rx] = ry
                eparity[rx] = px ^ py ^ flip

    vroots = [_find(vparent, i) for i in range(4 * n)]
    eroots = []
    signs = []
    for i in range(6 * n):
        r, p = _find_parity(eparent, eparity, i)
        eroots.append(r)
        signs.append(p)
    vertex_of, vertex_classes = _classes(vroots, 4 * n, 4)
    edge_of, edge_classes = _classes(eroots, 6 * n, 6)
    bad_edges = sorted({edge_of[x] for x in bad_slots})

    # Orientation relative to the first slot listed in each class.
    edge_sign = [0] * (6 * n)
    for c, members in enumerate(edge_classes):
        t0, s0 = members[0]
        ref = signs[6 * t0 + s0]
        for t, s in members:
            edge_sign[6 * t + s] = 1 if signs[6 * t + s] == ref else -1

    face_keys = []
    for i in range(4 * n):
        t2 = adj[i]
        if t2 < 0:
            face_keys.append(i)
        else:
            j = 4 * t2 + PERMS[glu[i]][i % 4]
            face_keys.append(min(i, j))
    face_of, face_classes = _classes(face_keys, 4 * n, 4)

    degree = tuple(len(m) for m in edge_classes)
    return Skeleton(
        vertex_of=vertex_of,
        edge_of=edge_of,
        edge_sign=tuple(edge_sign),
        face_of=face_of,
        vertex_classes=vertex_classes,
        edge_classes=edge_classes,
        face_classes=face_classes,
        edge_degree=degree,
        bad_edges=tuple(bad_edges),
    )


def skeleton(tri: Triangulation) -> Skeleton:
    return tri.skeleton


def edge_embedding(tri: Triangulation, t: int, slot: int) -> list[tuple[int, int]]:
    """Walk once around an edge, starting at slot ``slot`` of ``t``.

    Returns ``(tet, perm)`` pairs where ``perm`` sends 0, 1 to the edge's
    endpoints and 2, 3 to the other two vertices; consecutive entries are
    glued along the face opposite ``perm[2]`` of the earlier one.  Only
    meaningful for closed triangulations with no reversed edges.
    """
    start = (t, EDGE_START[slot])
    out = [start]
    cur_t, cur_p = start
    adj, glu = tri.adj, tri.glu
    while True:
        i = 4 * cur_t + PERMS[cur_p][2]
        g = glu[i]
        cur_t = adj[i]
        cur_p = COMPOSE[g][COMPOSE[cur_p][_SWAP23]]
        if (cur_t, cur_p) == start:
            return out
        out.append((cur_t, cur_p))
        if len(out) > 6 * tri.size:
            raise ValueError("edge walk did not close; is the triangulation valid?")


# -- validity -----------------------------------------------------------------


@dataclass(frozen=True)
class ValidityReport:
    reciprocal: bool
    connected: bool
    edges_valid: bool
    links_spherical: bool
    closed: bool

    @property
    def is_closed_3_manifold(self) -> bool:
        return self.reciprocal and self.connected and self.edges_valid and self.links_spherical and self.closed


def is_reciprocal(tri: Triangulation) -> bool:
    adj, glu = tri.adj, tri.glu
    for i, a in enumerate(adj):
        if a < 0:
            continue
        t, f = divmod(i, 4)
        j = 4 * a + PERMS[glu[i]][f]
        if j == i or adj[j] != t or glu[j] != INVERSE[glu[i]]:
            return False
    return True


def is_connected(tri: Triangulation) -> bool:
    seen = {0}
    pending = [0]
    while pending:
        t = pending.pop()
        for f in range(4):
            a = tri.adj[4 * t + f]
            if a >= 0 and a not in seen:
                seen.add(a)
                pending.append(a)
    return len(seen) == tri.size


def vertex_link_euler(tri: Triangulation) -> list[int]:
    """Euler characteristic of each vertex link (closed, valid edges assumed)."""
    sk = tri.skeleton
    corners = [len(c) for c in sk.vertex_classes]
    ends = [0] * sk.num_vertices
    for e in range(sk.num_edges):
        a, b = sk.edge_endpoints(e)
        ends[a] += 1
        ends[b] += 1
    # Each corner is a link triangle; link edges are glued in pairs.
    return [ends[v] - 3 * corners[v] // 2 + corners[v] for v in range(sk.num_vertices)]


def validate(tri: Triangulation) -> ValidityReport:
    if not is_reciprocal(tri):
        return ValidityReport(False, False, False, False, tri.is_closed())
    connected = is_connected(tri)
    closed = tri.is_closed()
    sk = tri.skeleton
    edges_ok = not sk.bad_edges
    links_ok = edges_ok and closed and all(x == 2 for x in vertex_link_euler(tri))
    return ValidityReport(True, connected, edges_ok, links_ok, closed)


def is_valid_closed(tri: Triangulation) -> bool:
    return validate(tri).is_closed_3_manifold


def is_orientable(tri: Triangulation) -> bool:
    """Whether tetrahedra can be oriented so every gluing is odd between
    equally oriented tetrahedra (and even between opposite ones)."""
    n = tri.size
    sign = [0] * n
    for root in range(n):
        if sign[root]:
            continue
        sign[root] = 1
        pending = deque([root])
        while pending:
            t = pending.popleft()
            for f in range(4):
                i = 4 * t + f
                a = tri.adj[i]
                if a < 0:
                    continue
                want = sign[t] if ODD[tri.glu[i]] else -sign[t]
                if sign[a] == 0:
                    sign[a] = want
                    pending.append(a)
                elif sign[a] != want:
                    return False
    return True


def num_vertices(tri: Triangulation) -> int:
    return tri.skeleton.num_vertices
