"""Pachner moves and the three composite flips.

Every move returns a new triangulation.  Tetrahedra untouched by a move
keep their relative order; newly created tetrahedra are appended.

Move sites refer to the labelled input triangulation: faces by their
smaller ``(tet, face)`` side, edges and vertices by skeleton class id.
Flips are carried out as a 2-3 move followed by a 3-2 move around the
flip edge; ``variant`` picks one of the distinct results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .perm import COMPOSE, INVERSE, PERMS, from_images, transposition
from .triangulation import EDGE_VERTS, Triangulation, edge_embedding

MOVE23 = "move23"
MOVE32 = "move32"
MOVE14 = "move14"
MOVE41 = "move41"
FLIP44 = "flip44"
FLIP_PILLOW = "flipPillow"
FLIP_PRISM = "flipPrism"

KINDS = (MOVE23, MOVE32, MOVE14, MOVE41, FLIP44, FLIP_PILLOW, FLIP_PRISM)
FLIPS = (FLIP44, FLIP_PILLOW, FLIP_PRISM)
_SIZE_CHANGE = {MOVE23: 1, MOVE32: -1, MOVE14: 3, MOVE41: -3,
                FLIP44: 0, FLIP_PILLOW: 0, FLIP_PRISM: 0}


class InapplicableMove(ValueError):
    """The requested move cannot be performed at the given site."""


@dataclass(frozen=True, order=True)
class MoveSite:
    """Where to perform a move.

    ``locus`` is a ``(tet, face)`` pair for 2-3 moves, a tetrahedron for
    1-4 moves, a vertex class for 4-1 moves and an edge class otherwise.
    """

    kind: str
    locus: object
    variant: int = 0

    @property
    def size_change(self) -> int:
        return _SIZE_CHANGE[self.kind]


@dataclass
class MoveList:
    """All applicable moves of one triangulation, grouped by kind."""

    sites: dict = field(default_factory=lambda: {k: [] for k in KINDS})

    def __getitem__(self, kind: str) -> list[MoveSite]:
        return self.sites[kind]

    def __iter__(self) -> Iterator[MoveSite]:
        for k in KINDS:
            yield from self.sites[k]

    def __len__(self) -> int:
        return sum(len(v) for v in self.sites.values())

    def counts(self) -> dict:
        return {k: len(v) for k, v in self.sites.items()}


# -- generic rewriting --------------------------------------------------------


def _rewrite(tri: Triangulation, removed, n_new: int, internal, outer) -> tuple[Triangulation, list[int]]:
    """Replace the tetrahedra in ``removed`` with ``n_new`` fresh ones.

    ``internal`` lists ``(a, fa, b, perm)`` gluings between new tetrahedra
    (each pair once).  ``outer`` maps each old ``(tet, face)`` on the
    boundary of the replaced region to ``(new tet, new face, mu)`` where
    ``mu`` sends new-tetrahedron vertices to the old tetrahedron's.
    Returns the new triangulation and the old-to-new index map of
    surviving tetrahedra (``-1`` for removed ones).
    """
    n = tri.size
    removed = set(removed)
    tet_map = []
    k = 0
    for t in range(n):
        if t in removed:
            tet_map.append(-1)
        else:
            tet_map.append(k)
            k += 1
    base = k
    m = base + n_new
    adj = [-1] * (4 * m)
    glu = [-1] * (4 * m)
    for t in range(n):
        nt = tet_map[t]
        if nt < 0:
            continue
        for f in range(4):
            a = tri.adj[4 * t + f]
            if a >= 0 and tet_map[a] >= 0:
                adj[4 * nt + f] = tet_map[a]
                glu[4 * nt + f] = tri.glu[4 * t + f]
    for a, fa, b, p in internal:
        i, j = 4 * (base + a) + fa, 4 * (base + b) + PERMS[p][fa]
        adj[i], glu[i] = base + b, p
        adj[j], glu[j] = base + a, INVERSE[p]
    for (t, f), (a, fa, mu) in outer.items():
        i = 4 * (base + a) + fa
        t2 = tri.adj[4 * t + f]
        if t2 < 0:
            continue
        h = tri.glu[4 * t + f]
        f2 = PERMS[h][f]
        other = outer.get((t2, f2))
        if other is not None:
            b, fb, mu2 = other
            adj[i], glu[i] = base + b, COMPOSE[INVERSE[mu2]][COMPOSE[h][mu]]
        else:
            nt2 = tet_map[t2]
            p = COMPOSE[h][mu]
            adj[i], glu[i] = nt2, p
            j = 4 * nt2 + f2
            adj[j], glu[j] = base + a, INVERSE[p]
    return Triangulation(adj, glu), tet_map


# -- the four Pachner moves ---------------------------------------------------


def _face_site(tri: Triangulation, site) -> tuple[int, int]:
    locus = site.locus if isinstance(site, MoveSite) else site
    t, f = locus
    if not (0 <= t < tri.size and 0 <= f < 4):
        raise InapplicableMove(f"no face {f} of tetrahedron {t}")
    return t, f


def _do_23(tri: Triangulation, t: int, f: int):
    t2 = tri.adj[4 * t + f]
    if t2 < 0:
        raise InapplicableMove("2-3 move on a boundary face")
    if t2 == t:
        raise InapplicableMove("2-3 move needs two distinct tetrahedra")
    g = tri.glu[4 * t + f]
    p = PERMS[g]
    x = [v for v in range(4) if v != f]
    internal = [(i, 2, (i + 1) % 3, 1) for i in range(3)]
    outer = {}
    for i in range(3):
        x0, x1, x2 = x[i], x[(i + 1) % 3], x[(i + 2) % 3]
        outer[(t, x0)] = (i, 1, from_images((f, x0, x1, x2)))
        outer[(t2, p[x0])] = (i, 0, from_images((p[x0], p[f], p[x1], p[x2])))
    return _rewrite(tri, (t, t2), 3, internal, outer)


def pachner_23(tri: Triangulation, site) -> Triangulation:
    """2-3 move on the face ``site`` (a MoveSite or ``(tet, face)``)."""
    t, f = _face_site(tri, site)
    return _do_23(tri, t, f)[0]


def _edge_class(tri: Triangulation, site) -> int:
    e = site.locus if isinstance(site, MoveSite) else site
    if not 0 <= e < tri.skeleton.num_edges:
        raise InapplicableMove(f"no edge class {e}")
    return e


def _embedding(tri: Triangulation, e: int):
    t, slot = tri.skeleton.edge_classes[e][0]
    return edge_embedding(tri, t, slot)


def can_32(tri: Triangulation, e: int) -> bool:
    sk = tri.skeleton
    if sk.edge_degree[e] != 3 or e in sk.bad_edges:
        return False
    return len({t for t, _ in sk.edge_classes[e]}) == 3


def _do_32(tri: Triangulation, e: int):
    if not can_32(tri, e):
        raise InapplicableMove(f"edge {e} is not a degree-3 edge in three distinct tetrahedra")
    emb = _embedding(tri, e)
    outer = {}
    for i, (t, q) in enumerate(emb):
        p = PERMS[q]
        ci, cj, opp = 1 + i % 3, 1 + (i + 1) % 3, 1 + (i + 2) % 3
        mu_u = [0] * 4
        mu_u[0], mu_u[ci], mu_u[cj], mu_u[opp] = p[0], p[2], p[3], p[1]
        mu_w = [0] * 4
        mu_w[0], mu_w[ci], mu_w[cj], mu_w[opp] = p[1], p[2], p[3], p[0]
        outer[(t, p[1])] = (0, opp, from_images(mu_u))
        outer[(t, p[0])] = (1, opp, from_images(mu_w))
    return _rewrite(tri, [t for t, _ in emb], 2, [(0, 0, 1, 0)], outer)


def pachner_32(tri: Triangulation, site) -> Triangulation:
    """3-2 move around the edge class ``site``."""
    return _do_32(tri, _edge_class(tri, site))[0]


def pachner_14(tri: Triangulation, site) -> Triangulation:
    """1-4 move on tetrahedron ``site``.  The new vertex is vertex ``i`` of
    the ``i``-th appended tetrahedron."""
    t = site.locus if isinstance(site, MoveSite) else site
    if not 0 <= t < tri.size:
        raise InapplicableMove(f"no tetrahedron {t}")
    internal = [(i, j, j, transposition(i, j)) for i in range(4) for j in range(i + 1, 4)]
    outer = {(t, i): (i, i, 0) for i in range(4)}
    return _rewrite(tri, (t,), 4, internal, outer)[0]


def _star_41(tri: Triangulation, v: int):
    """``[(tet, corner), ...]`` for a vertex whose star is four distinct
    tetrahedra arranged as a subdivided tetrahedron, else None."""
    sk = tri.skeleton
    corners = sk.vertex_classes[v]
    if len(corners) != 4 or len({t for t, _ in corners}) != 4:
        return None
    where = {t: c for t, c in corners}
    for t, c in corners:
        partners = set()
        for f in range(4):
            if f == c:
                continue
            a = tri.adj[4 * t + f]
            if a < 0 or a not in where or a == t:
                return None
            partners.add(a)
        if len(partners) != 3:
            return None
    return list(corners)


def can_41(tri: Triangulation, v: int) -> bool:
    return 0 <= v < tri.skeleton.num_vertices and _star_41(tri, v) is not None


def pachner_41(tri: Triangulation, site) -> Triangulation:
    """4-1 move removing the vertex class ``site``."""
    v = site.locus if isinstance(site, MoveSite) else site
    if not 0 <= v < tri.skeleton.num_vertices:
        raise InapplicableMove(f"no vertex class {v}")
    star = _star_41(tri, v)
    if star is None:
        raise InapplicableMove(f"vertex {v} does not have the star of a 1-4 move")
    # Group the outer corners of the star into the four vertices of the
    # tetrahedron that replaces it.
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, c in star:
        for w in range(4):
            if w != c:
                parent[(t, w)] = (t, w)
    for t, c in star:
        for f in range(4):
            if f == c:
                continue
            a = tri.adj[4 * t + f]
            p = PERMS[tri.glu[4 * t + f]]
            for w in range(4):
                if w not in (c, f):
                    ra, rb = find((t, w)), find((a, p[w]))
                    if ra != rb:
                        parent[ra] = rb
    roots = sorted({find(x) for x in parent})
    if len(roots) != 4:
        raise InapplicableMove(f"vertex {v} does not have the star of a 1-4 move")
    missing = []
    for t, c in star:
        seen = {find((t, w)) for w in range(4) if w != c}
        if len(seen) != 3:
            raise InapplicableMove(f"vertex {v} does not have the star of a 1-4 move")
        missing.append(next(r for r in roots if r not in seen))
    if len(set(missing)) != 4:
        raise InapplicableMove(f"vertex {v} does not have the star of a 1-4 move")
    label = {r: m for m, r in enumerate(missing)}
    outer = {}
    for m, (t, c) in enumerate(star):
        mu = [0] * 4
        mu[m] = c
        for w in range(4):
            if w != c:
                mu[label[find((t, w))]] = w
        outer[(t, c)] = (0, m, from_images(mu))
    return _rewrite(tri, [t for t, _ in star], 1, [], outer)[0]


# -- flips --------------------------------------------------------------------


def _composite(tri: Triangulation, face: tuple[int, int], e: int) -> Optional[Triangulation]:
    """2-3 move on ``face`` then 3-2 around edge class ``e`` of ``tri``,
    or None if the 3-2 move is then impossible."""
    t, f = face
    t2 = tri.adj[4 * t + f]
    if t2 < 0 or t2 == t:
        return None
    keep = next(((a, s) for a, s in tri.skeleton.edge_classes[e] if a not in (t, t2)), None)
    if keep is None:
        return None
    mid, tet_map = _do_23(tri, t, f)
    e2 = mid.skeleton.edge_of[6 * tet_map[keep[0]] + keep[1]]
    if not can_32(mid, e2):
        return None
    return _do_32(mid, e2)[0]


def _dedupe(results):
    from .isosig import isosig

    seen = set()
    out = []
    for r in results:
        if r is None:
            continue
        s = isosig(r)
        if s not in seen:
            seen.add(s)
            out.append(r)
    return out


def _face_edges(f: int):
    return [s for s, (a, b) in enumerate(EDGE_VERTS) if f not in (a, b)]


def flip_results(tri: Triangulation, kind: str, e: int) -> list[Triangulation]:
    """Every distinct result of a flip of the given kind around edge ``e``,
    in variant order."""
    sk = tri.skeleton
    if not 0 <= e < sk.num_edges or e in sk.bad_edges:
        return []
    deg = sk.edge_degree[e]
    tets = [t for t, _ in sk.edge_classes[e]]
    if kind == FLIP44:
        if deg != 4 or len(set(tets)) != 4:
            return []
        emb = _embedding(tri, e)
        out = []
        for i in (0, 1):
            t, q = emb[i]
            out.append(_composite(tri, (t, PERMS[q][2]), e))
        return [r for r in out if r is not None]
    if kind == FLIP_PILLOW:
        if deg != 2 or len(set(tets)) != 2:
            return []
        emb = _embedding(tri, e)
        cands = []
        for t, q in emb:
            for k in (0, 1):
                f = PERMS[q][k]
                if tri.adj[4 * t + f] not in tets:
                    cands.append(_composite(tri, (t, f), e))
        return _dedupe(cands)
    if kind == FLIP_PRISM:
        if deg != 5:
            return []
        counts = {}
        for t in tets:
            counts[t] = counts.get(t, 0) + 1
        cands = []
        for t, c in counts.items():
            if c != 2:
                continue
            for f in range(4):
                hits = sum(1 for s in _face_edges(f) if sk.edge_of[6 * t + s] == e)
                t2 = tri.adj[4 * t + f]
                if hits == 2 and t2 != t and counts.get(t2) == 2 and (t, f) < (t2, PERMS[tri.glu[4 * t + f]][f]):
                    cands.append(_composite(tri, (t, f), e))
        return _dedupe(cands)
    raise ValueError(f"not a flip kind: {kind}")


def prism_type(tri: Triangulation, e: int) -> Optional[str]:
    """"A" or "B" for a prism-flip edge, according to whether the two
    occurrences of ``e`` on the folded face run head to tail around it."""
    sk = tri.skeleton
    if not flip_results(tri, FLIP_PRISM, e):
        return None
    for t in range(tri.size):
        for f in range(4):
            slots = [s for s in _face_edges(f) if sk.edge_of[6 * t + s] == e]
            if len(slots) != 2 or tri.adj[4 * t + f] == t:
                continue
            # Orient both occurrences by e; compare at the shared vertex.
            (a1, b1), (a2, b2) = EDGE_VERTS[slots[0]], EDGE_VERTS[slots[1]]
            if sk.edge_sign[6 * t + slots[0]] < 0:
                a1, b1 = b1, a1
            if sk.edge_sign[6 * t + slots[1]] < 0:
                a2, b2 = b2, a2
            return "A" if (b1 == a2 or b2 == a1) else "B"
    return None


def flip(tri: Triangulation, site: MoveSite) -> Triangulation:
    """Perform an octahedron, pillow or prism flip."""
    if site.kind not in FLIPS:
        raise InapplicableMove(f"{site.kind} is not a flip")
    results = flip_results(tri, site.kind, _edge_class(tri, site))
    if not 0 <= site.variant < len(results):
        raise InapplicableMove(f"{site.kind} variant {site.variant} not available at edge {site.locus}")
    return results[site.variant]


# -- enumeration --------------------------------------------------------------


def enumerate_moves(tri: Triangulation, kinds=KINDS) -> MoveList:
    """All applicable move sites of a valid closed triangulation."""
    out = MoveList()
    sk = tri.skeleton
    if MOVE23 in kinds:
        for i, a in enumerate(tri.adj):
            t, f = divmod(i, 4)
            if a >= 0 and a != t and (t, f) < (a, PERMS[tri.glu[i]][f]):
                out[MOVE23].append(MoveSite(MOVE23, (t, f)))
    if MOVE32 in kinds:
        out[MOVE32].extend(MoveSite(MOVE32, e) for e in range(sk.num_edges) if can_32(tri, e))
    if MOVE14 in kinds:
        out[MOVE14].extend(MoveSite(MOVE14, t) for t in range(tri.size))
    if MOVE41 in kinds:
        out[MOVE41].extend(MoveSite(MOVE41, v) for v in range(sk.num_vertices) if can_41(tri, v))
    for kind in FLIPS:
        if kind in kinds:
            for e in range(sk.num_edges):
                for k in range(len(flip_results(tri, kind, e))):
                    out[kind].append(MoveSite(kind, e, k))
    return out


def apply_move(tri: Triangulation, site: MoveSite) -> Triangulation:
    if site.kind == MOVE23:
        return pachner_23(tri, site)
    if site.kind == MOVE32:
        return pachner_32(tri, site)
    if site.kind == MOVE14:
        return pachner_14(tri, site)
    if site.kind == MOVE41:
        return pachner_41(tri, site)
    return flip(tri, site)


def neighbours(tri: Triangulation, kinds=KINDS) -> Iterator[tuple[MoveSite, Triangulation]]:
    """``(site, result)`` for every applicable move of the given kinds."""
    sk = tri.skeleton
    if MOVE23 in kinds:
        for i, a in enumerate(tri.adj):
            t, f = divmod(i, 4)
            if a >= 0 and a != t and (t, f) < (a, PERMS[tri.glu[i]][f]):
                yield MoveSite(MOVE23, (t, f)), _do_23(tri, t, f)[0]
    if MOVE32 in kinds:
        for e in range(sk.num_edges):
            if can_32(tri, e):
                yield MoveSite(MOVE32, e), _do_32(tri, e)[0]
    if MOVE14 in kinds:
        for t in range(tri.size):
            yield MoveSite(MOVE14, t), pachner_14(tri, t)
    if MOVE41 in kinds:
        for v in range(sk.num_vertices):
            if can_41(tri, v):
                yield MoveSite(MOVE41, v), pachner_41(tri, v)
    for kind in FLIPS:
        if kind in kinds:
            for e in range(sk.num_edges):
                for k, r in enumerate(flip_results(tri, kind, e)):
                    yield MoveSite(kind, e, k), r
