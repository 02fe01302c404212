import itertools
import json

import pytest

from pachner.census import (UNPROVEN, CensusSet, census_report, census_signatures, census_signatures_reference,
                            enumerate_census, enumerate_face_pairings, gluings_for_pairing, read_signatures,
                            recognize_s3, simplify, write_report, write_signatures)
from pachner.isosig import decode, isosig
from pachner.moves import MOVE23, apply_move, neighbours
from pachner.perm import PERMS
from pachner.triangulation import Triangulation, validate

from conftest import census


def raw_matchings(faces):
    if not faces:
        yield []
        return
    a = faces[0]
    for k in range(1, len(faces)):
        rest = faces[1:k] + faces[k + 1:]
        for m in raw_matchings(rest):
            yield [(a, faces[k])] + m


def matching_connected(n, m):
    seen, pending = {0}, [0]
    while pending:
        t = pending.pop()
        for x, y in m:
            for u, v in ((x // 4, y // 4), (y // 4, x // 4)):
                if u == t and v not in seen:
                    seen.add(v)
                    pending.append(v)
    return len(seen) == n


def matching_class(n, m):
    best = None
    for sigma in itertools.permutations(range(n)):
        for pis in itertools.product(PERMS, repeat=n):
            img = sorted(tuple(sorted((4 * sigma[x // 4] + pis[x // 4][x % 4],
                                       4 * sigma[y // 4] + pis[y // 4][y % 4]))) for x, y in m)
            key = tuple(img)
            if best is None or key < best:
                best = key
    return best


@pytest.mark.parametrize("n", [1, 2])
def test_face_pairings_brute_force(n):
    raw = [m for m in raw_matchings(list(range(4 * n))) if matching_connected(n, m)]
    classes = {matching_class(n, m) for m in raw}
    emitted = enumerate_face_pairings(n)
    keys = [matching_class(n, [(4 * a + f, 4 * b + g) for (a, f), (b, g) in p.pairs]) for p in emitted]
    assert len(keys) == len(set(keys))
    assert set(keys) == classes
    if n == 1:
        assert len(emitted) == 1


def test_face_pairings_connected():
    for n in (1, 2, 3, 4):
        for p in enumerate_face_pairings(n):
            assert matching_connected(n, [(4 * a + f, 4 * b + g) for (a, f), (b, g) in p.pairs])
            assert all(sum(row) == 4 for row in p.matrix)


def test_face_pairing_counts():
    assert [len(enumerate_face_pairings(n)) for n in (1, 2, 3, 4)] == [1, 2, 4, 10]
    with pytest.raises(ValueError):
        enumerate_face_pairings(0)


@pytest.mark.parametrize("n", [1, 2])
def test_census_against_raw_gluings(n):
    found = set()
    for m in raw_matchings(list(range(4 * n))):
        if not matching_connected(n, m):
            continue
        choices = [[p for p in range(24) if PERMS[p][x % 4] == y % 4] for x, y in m]
        for ps in itertools.product(*choices):
            recs = [(x // 4, x % 4, y // 4, p) for (x, y), p in zip(m, ps)]
            tri = Triangulation.from_gluings(n, recs)
            if validate(tri).is_closed_3_manifold:
                found.add(isosig(tri))
    assert sorted(found) == list(census(n))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_reference_search_agrees(n):
    assert census_signatures_reference(n) == list(census(n))


def test_reference_gluings_are_valid():
    for p in enumerate_face_pairings(2):
        for tri in gluings_for_pairing(p):
            assert validate(tri).is_closed_3_manifold


def test_census_isomorph_free_and_sorted():
    for n in (1, 2, 3, 4):
        sigs = census(n)
        assert list(sigs) == sorted(set(sigs))
        for s in sigs:
            tri = decode(s)
            assert tri.size == n
            assert validate(tri).is_closed_3_manifold
            assert isosig(tri) == s


def test_one_vertex_filter():
    for n in (1, 2, 3):
        ov = census(n, True)
        assert set(ov) == {s for s in census(n) if decode(s).skeleton.num_vertices == 1}


def test_thread_counts_identical():
    base = census_signatures(4, threads=1)
    for k in (4, 8):
        assert census_signatures(4, threads=k) == base


def test_census_set_counts():
    cs = enumerate_census(3)
    assert isinstance(cs, CensusSet)
    assert cs.counts() == {"all": 81, "one_vertex": 63, "s3": 32, "one_vertex_s3": 20}
    assert len(cs.select(one_vertex=True, s3_only=True)) == 20
    assert enumerate_census(3, one_vertex=True, s3_only=True).signatures == cs.select(True, True)
    assert enumerate_census(2, tag_s3=False).counts() == {"all": 17, "one_vertex": 12}
    with pytest.raises(ValueError):
        enumerate_census(0)


def test_recognize_examples():
    assert recognize_s3(decode("cMcabbgaj")) is False
    assert recognize_s3(decode("jLAMLLQbcbdeghhiixxnxxjqisj")) is False
    assert recognize_s3(decode("kLLzLQAkaceiggghijjjkxuaatlsqw")) == UNPROVEN
    spheres = [s for s in census(3, True) if recognize_s3(decode(s)) is True]
    assert len(spheres) == 20


def test_recognize_is_move_invariant():
    for s in census(3, True)[::3]:
        tri = decode(s)
        want = recognize_s3(tri)
        for _, res in neighbours(tri, (MOVE23,)):
            assert recognize_s3(res) == want


def test_simplify_examples():
    end, moves, sigs = simplify(decode("fvPQccdeedegovggo"))
    assert end.size == 2
    assert len(moves) == len(sigs)
    cur = decode("fvPQccdeedegovggo")
    for site, sig in zip(moves, sigs):
        cur = apply_move(cur, site)
        assert isosig(cur) == sig
    end, moves, _ = simplify(decode("cMcabbgaj"))
    assert isosig(end) == "cMcabbgaj" and moves == []


def test_files_roundtrip(tmp_path):
    path = tmp_path / "c3.txt"
    write_signatures(path, reversed(census(3)))
    assert read_signatures(path) == list(census(3))
    assert path.read_text().endswith("\n")
    report = tmp_path / "r.json"
    write_report(report, [enumerate_census(1), enumerate_census(2)])
    data = json.loads(report.read_text())
    assert data == census_report([enumerate_census(1), enumerate_census(2)])
    assert [row["all"] for row in data["sizes"]] == [4, 17]
