"""Acceptance checks, one test per criterion.

Each test prints a single PASS or FAIL line (shown even when pytest
captures output).  Run alone with ``pytest tests/test_acceptance.py``.
"""

import random
from contextlib import contextmanager
from fractions import Fraction

import pytest

from pachner.census import census_signatures, enumerate_census
from pachner.graphs import INF, find_path, height_bound, height_bound_two_phase, length_bound, min_height, min_length
from pachner.homology import homology_h1
from pachner.isosig import ALPHABET, canonical_labellings, decode, encode, encode_large, isomorphic, isosig
from pachner.moves import FLIPS, KINDS, MOVE14, MOVE23, MOVE32, MOVE41, neighbours, pachner_14, pachner_41
from pachner.triangulation import is_orientable, validate

from conftest import brute_canonical, census, random_relabel, worked_example_triangulation


@contextmanager
def criterion(capsys, number, title):
    ok = False
    try:
        yield
        ok = True
    finally:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {title}")


@pytest.fixture(scope="module")
def censuses():
    return {n: enumerate_census(n) for n in range(1, 6)}


def one_vertex_s3(censuses, n):
    return censuses[n].select(one_vertex=True, s3_only=True)


def test_criterion_1_census_counts(capsys, censuses):
    with criterion(capsys, 1, "census counts for n = 1..5"):
        got = {key: [censuses[n].counts()[key] for n in range(1, 6)]
               for key in ("all", "one_vertex", "s3", "one_vertex_s3")}
        assert got["all"] == [4, 17, 81, 577, 5184]
        assert got["one_vertex"] == [3, 12, 63, 433, 3961]
        assert got["s3"] == [2, 6, 32, 198, 1903]
        assert got["one_vertex_s3"] == [1, 3, 20, 128, 1297]


def test_criterion_2_codec_example(capsys):
    with criterion(capsys, 2, "worked encoding example"):
        tri = worked_example_triangulation()
        assert encode(tri) == "dwQacbcvjbs"
        assert isosig(tri) == "dLQabccbcjj"
        assert encode_large(93, 100) == "Db"
        assert encode_large(5, 100) == "fa"


PUBLISHED_SIGS = ["cMcabbgaj", "cMcabbjak", "dLQacccbgfg", "dLQacccbgfo", "eLPkbcdddackff",
              "eLPkbcdddacrkk", "fvPQccdeedegovggo", "jLAMLLQbcbdeghhiixxnxxjqisj",
              "iLLLPQcbcgffghhhtsmhgosof", "kLLzLQAkaceiggghijjjkxuaatlsqw",
              "jLLALPQaceefgihhijkuxpwhwns"]


def test_criterion_3_published_signatures(capsys):
    with criterion(capsys, 3, "published signatures decode and re-encode"):
        for sig in PUBLISHED_SIGS:
            tri = decode(sig)
            assert tri.size == ALPHABET.index(sig[0])
            assert validate(tri).is_closed_3_manifold
            assert tri.skeleton.num_vertices == 1
            assert isosig(tri) == sig


def test_criterion_4_height(capsys, censuses):
    with criterion(capsys, 4, "height bounds on one-vertex 3-sphere levels 3-5"):
        expected = {3: [20, 8, 1], 4: [128, 50, 1], 5: [1297, 196, 1]}
        for n, trace in expected.items():
            nodes = one_vertex_s3(censuses, n)
            res = height_bound(nodes)
            assert res.bound == 2 and res.trace == trace and not res.partial
            two = height_bound_two_phase(nodes)
            assert two.bound == 2 and two.trace == trace
            assert set(two.nodes_per_level) == {n, n + 1}


def test_criterion_5_length(capsys, censuses):
    with criterion(capsys, 5, "length bounds on one-vertex 3-sphere levels 3-5"):
        expected = {
            3: ({0: 3, 2: 8, 4: 7, 6: 2}, Fraction(380, 100), (76, 20)),
            4: ({0: 46, 2: 38, 4: 43, 6: 1}, Fraction(299, 100), (382, 128)),
            5: ({0: 504, 2: 466, 4: 309, 6: 18}, Fraction(276, 100), None),
        }
        for n, (hist, cap, parts) in expected.items():
            res = length_bound(one_vertex_s3(censuses, n))
            assert res.bound == 7
            assert res.histogram == hist
            assert res.missing == 0
            assert res.average_bound <= cap
            assert cap - res.average_bound < Fraction(1, 100)
            if parts:
                assert res.average_parts == parts
            if n == 3:
                assert res.phi == Fraction(3, 20)


def test_criterion_6_lens_space_l31(capsys):
    with criterion(capsys, 6, "L(3,1) minimal height, length and explicit path"):
        pair = ["cMcabbgaj", "cMcabbjak"]
        assert min_height(pair).h_min == 3
        assert min_length(pair).l_min == INF
        path = find_path(*pair, height_cap=3)
        assert len(path.moves) == 6
        assert path.intermediate == ["dLQacccbgfg", "eLPkbcdddackff", "fvPQccdeedegovggo",
                                     "eLPkbcdddacrkk", "dLQacccbgfo"]
        assert isosig(path.replay()) == "cMcabbjak"


def test_criterion_7_reduce_cases(capsys):
    with criterion(capsys, 7, "every 2-3 then 3-2 composite at size <= 3 is undone, commutes, or is a flip"):
        violations = 0
        checked = 0
        for n in (1, 2, 3):
            for s in census(n):
                tri = decode(s)
                swapped = {isosig(r2) for _, r1 in neighbours(tri, (MOVE32,))
                           for _, r2 in neighbours(r1, (MOVE23,))}
                flipped = {isosig(r) for _, r in neighbours(tri, FLIPS)}
                for _, r1 in neighbours(tri, (MOVE23,)):
                    for _, r2 in neighbours(r1, (MOVE32,)):
                        checked += 1
                        x = isosig(r2)
                        if x != s and x not in swapped and x not in flipped:
                            violations += 1
        assert checked > 0
        assert violations == 0


def test_criterion_8_properties(capsys):
    with criterion(capsys, 8, "codec, oracle, move and thread-count properties"):
        rng = random.Random(8)
        small = [s for n in (1, 2, 3) for s in census(n)]
        # codec roundtrip and brute-force isomorphism agreement
        forms = {}
        for s in small:
            tri = decode(s)
            assert isosig(decode(isosig(tri))) == s
            other = random_relabel(tri, rng)
            assert isosig(other) == s
            forms[s] = brute_canonical(tri)
            assert brute_canonical(other) == forms[s]
        assert len(set(forms.values())) == len(small)
        for a in small:
            for b in small:
                assert isomorphic(decode(a), decode(b)) == (forms[a] == forms[b])
        # move inverses
        for s in census(3):
            tri = decode(s)
            for _, up in neighbours(tri, (MOVE23,)):
                assert s in {isosig(r) for _, r in neighbours(up, (MOVE32,))}
            up = pachner_14(tri, 0)
            assert isosig(pachner_41(up, up.skeleton.vertex_of[4 * (tri.size - 1)])) == s
        # invariants over 1000 sampled census triangulations
        pool = [s for n in (1, 2, 3, 4) for s in census(n)]
        sample = pool + rng.sample(census(5), 1000 - len(pool))
        for s in sample:
            tri = decode(s)
            h1, orient, nv = homology_h1(tri), is_orientable(tri), tri.skeleton.num_vertices
            for site, res in neighbours(tri, KINDS):
                assert homology_h1(res) == h1
                assert is_orientable(res) == orient
                shift = {MOVE14: 1, MOVE41: -1}.get(site.kind, 0)
                assert res.skeleton.num_vertices == nv + shift
        # 24n canonical labellings
        for n in (1, 2, 3, 4):
            for s in rng.sample(census(n), min(5, len(census(n)))):
                assert len(canonical_labellings(decode(s))) == 24 * n
        # identical outputs across thread counts
        base = census_signatures(4, threads=1)
        nodes = enumerate_census(3, one_vertex=True, s3_only=True).signatures
        h1_run = height_bound(nodes, threads=1, record_arcs=True)
        l1_run = length_bound(nodes, threads=1)
        for k in (4, 8):
            assert census_signatures(4, threads=k) == base
            assert height_bound(nodes, threads=k, record_arcs=True) == h1_run
            assert length_bound(nodes, threads=k) == l1_run
