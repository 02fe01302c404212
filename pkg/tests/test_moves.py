import random
from collections import Counter

import pytest

from pachner.homology import homology_h1
from pachner.isosig import decode, isosig
from pachner.moves import (FLIP44, FLIP_PILLOW, FLIP_PRISM, FLIPS, KINDS, MOVE14, MOVE23, MOVE32, MOVE41,
                           InapplicableMove, MoveSite, apply_move, enumerate_moves, flip, neighbours,
                           pachner_14, pachner_23, pachner_32, pachner_41, prism_type)
from pachner.triangulation import is_orientable, validate

from conftest import census, random_relabel


def sample_1000():
    small = [s for n in (1, 2, 3, 4) for s in census(n)]
    rng = random.Random(2024)
    return small + rng.sample(census(5), 1000 - len(small))


def composites(tri):
    """Signatures reachable by a 2-3 move followed by a 3-2 move."""
    return {isosig(r2) for _, r1 in neighbours(tri, (MOVE23,)) for _, r2 in neighbours(r1, (MOVE32,))}


def test_chain_moves():
    steps = [("cMcabbgaj", "dLQacccbgfg", MOVE23), ("dLQacccbgfg", "eLPkbcdddackff", MOVE23),
             ("eLPkbcdddackff", "fvPQccdeedegovggo", MOVE23), ("fvPQccdeedegovggo", "eLPkbcdddacrkk", MOVE32),
             ("eLPkbcdddacrkk", "dLQacccbgfo", MOVE32), ("dLQacccbgfo", "cMcabbjak", MOVE32)]
    for a, b, kind in steps:
        assert b in {isosig(r) for _, r in neighbours(decode(a), (kind,))}


def test_site_counts():
    for s in census(1):
        ml = enumerate_moves(decode(s))
        assert not ml[MOVE23] and not ml[MOVE32]
    for n in (2, 3, 4):
        for s in census(n):
            ml = enumerate_moves(decode(s))
            assert len(ml[MOVE23]) >= n - 1
            assert len(ml[MOVE32]) <= 6 * n
            assert len(ml[MOVE14]) == n


def test_inverse_23_32():
    for s in census(2) + census(3):
        tri = decode(s)
        n = tri.size
        for site in enumerate_moves(tri, (MOVE23,))[MOVE23]:
            up = pachner_23(tri, site)
            assert up.size == n + 1
            # the three new tetrahedra are appended and share the new edge
            new = {n - 2, n - 1, n}
            sk = up.skeleton
            back = [e for e in range(sk.num_edges)
                    if sk.edge_degree[e] == 3 and {t for t, _ in sk.edge_classes[e]} == new]
            assert any(isosig(pachner_32(up, e)) == s for e in back)


def test_inverse_14_41():
    for s in census(1) + census(2) + census(3)[:40]:
        tri = decode(s)
        n = tri.size
        for t in range(n):
            up = pachner_14(tri, t)
            assert up.size == n + 3
            assert up.skeleton.num_vertices == tri.skeleton.num_vertices + 1
            v = up.skeleton.vertex_of[4 * (n - 1)]
            assert isosig(pachner_41(up, v)) == s


def test_invariants_on_sample():
    sample = sample_1000()
    assert len(set(sample)) == 1000
    kinds_seen = set()
    for s in sample:
        tri = decode(s)
        h1 = homology_h1(tri)
        orient = is_orientable(tri)
        nv = tri.skeleton.num_vertices
        for site, res in neighbours(tri):
            kinds_seen.add(site.kind)
            assert res.size == tri.size + site.size_change
            assert validate(res).is_closed_3_manifold
            assert is_orientable(res) == orient
            assert homology_h1(res) == h1
            if site.kind == MOVE14:
                assert res.skeleton.num_vertices == nv + 1
            elif site.kind == MOVE41:
                assert res.skeleton.num_vertices == nv - 1
            else:
                assert res.skeleton.num_vertices == nv
    assert kinds_seen == set(KINDS)


def test_one_vertex_14_gives_two_vertices():
    tri = decode("cMcabbgaj")
    assert pachner_14(tri, 0).skeleton.num_vertices == 2


def test_inapplicable_sites():
    tri = decode("bkaagj")
    with pytest.raises(InapplicableMove):
        pachner_23(tri, (0, 0))
    with pytest.raises(InapplicableMove):
        pachner_32(tri, 0)
    with pytest.raises(InapplicableMove):
        pachner_41(tri, 0)
    with pytest.raises(InapplicableMove):
        flip(tri, MoveSite(FLIP44, 0))
    with pytest.raises(InapplicableMove):
        pachner_14(tri, 5)


def test_inputs_not_mutated():
    tri = decode("eLPkbcdddackff")
    adj, glu = list(tri.adj), list(tri.glu)
    for _ in neighbours(tri):
        pass
    assert list(tri.adj) == adj and list(tri.glu) == glu


def test_flips_are_composites():
    for n in (2, 3, 4):
        for s in census(n):
            tri = decode(s)
            flips = [isosig(r) for _, r in neighbours(tri, FLIPS)]
            if flips:
                assert set(flips) <= composites(tri)


def test_flip_variant_bounds():
    seen = Counter()
    for n in (2, 3, 4):
        for s in census(n):
            ml = enumerate_moves(decode(s), FLIPS)
            for kind, limit in ((FLIP44, 2), (FLIP_PILLOW, 4), (FLIP_PRISM, 1)):
                per_edge = Counter(site.locus for site in ml[kind])
                assert all(c <= limit for c in per_edge.values())
                seen[kind] += len(ml[kind])
    assert all(seen[k] > 0 for k in FLIPS)


def test_flip44_twice_returns():
    checked = 0
    for n in (3, 4):
        for s in census(n):
            tri = decode(s)
            for site in enumerate_moves(tri, (FLIP44,))[FLIP44]:
                once = flip(tri, site)
                back = {isosig(r) for _, r in neighbours(once, (FLIP44,))}
                assert s in back
                checked += 1
    assert checked > 0


def test_prism_types():
    types = Counter()
    for n in (3, 4):
        for s in census(n):
            tri = decode(s)
            for site in enumerate_moves(tri, (FLIP_PRISM,))[FLIP_PRISM]:
                types[prism_type(tri, site.locus)] += 1
    assert set(types) <= {"A", "B"}
    assert sum(types.values()) > 0


def test_reduce_cases_small_census():
    # Every 2-3 then 3-2 composite is undone, commutes to a 3-2 then 2-3,
    # or is a single flip.
    violations = []
    flip_needed = 0
    for n in (1, 2, 3):
        for s in census(n):
            tri = decode(s)
            swapped = {isosig(r2) for _, r1 in neighbours(tri, (MOVE32,))
                       for _, r2 in neighbours(r1, (MOVE23,))}
            flipped = {isosig(r) for _, r in neighbours(tri, FLIPS)}
            for x in composites(tri):
                if x == s or x in swapped:
                    continue
                if x in flipped:
                    flip_needed += 1
                else:
                    violations.append((s, x))
    assert violations == []
    assert flip_needed > 0


def test_enumeration_equivariant():
    rng = random.Random(4)
    for s in census(3)[::5]:
        tri = decode(s)
        other = random_relabel(tri, rng)
        a = enumerate_moves(tri).counts()
        b = enumerate_moves(other).counts()
        assert a == b
        ra = Counter(isosig(r) for _, r in neighbours(tri))
        rb = Counter(isosig(r) for _, r in neighbours(other))
        assert ra == rb


def test_apply_move_dispatch():
    tri = decode("dLQacccbgfg")
    for site in enumerate_moves(tri):
        assert site.kind in KINDS
        assert apply_move(tri, site).size == tri.size + site.size_change
    assert MOVE41 in KINDS
