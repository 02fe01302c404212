import itertools
import math
import random

from pachner.census import recognize_s3
from pachner.homology import AbelianGroup, homology_h1, smith_diagonal
from pachner.isosig import decode

from conftest import census

CHAIN = ["cMcabbgaj", "dLQacccbgfg", "eLPkbcdddackff", "fvPQccdeedegovggo",
         "eLPkbcdddacrkk", "dLQacccbgfo", "cMcabbjak"]


def _det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([row[:j] + row[j + 1:] for row in m[1:]]) for j in range(len(m)))


def determinantal_diagonal(m):
    """Invariant factors from gcds of k-by-k minors."""
    rows, cols = len(m), len(m[0])
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = math.gcd(g, _det([[m[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def test_smith_against_minors():
    rng = random.Random(2)
    for _ in range(200):
        rows, cols = rng.randint(1, 4), rng.randint(1, 4)
        m = [[rng.randint(-6, 6) for _ in range(cols)] for _ in range(rows)]
        assert smith_diagonal(m) == determinantal_diagonal(m)


def test_smith_divisibility():
    assert smith_diagonal([[2, 0, 0], [0, 4, 0], [0, 0, 6]]) == [2, 2, 12]
    assert smith_diagonal([[0, 0], [0, 0]]) == []


def test_lens_space():
    assert homology_h1(decode("cMcabbgaj")) == AbelianGroup(0, (3,))
    assert str(homology_h1(decode("cMcabbgaj"))) == "Z_3"


def test_chain_has_constant_homology():
    for s in CHAIN:
        assert homology_h1(decode(s)) == AbelianGroup(0, (3,))


def test_trivial_homology_at_size_two():
    trivial = [s for s in census(2, True) if homology_h1(decode(s)).is_trivial()]
    assert len(trivial) == 3
    assert all(recognize_s3(decode(s)) is True for s in trivial)


def test_group_strings():
    assert str(AbelianGroup(0)) == "0"
    assert str(AbelianGroup(1, (2,))) == "Z + Z_2"
    assert str(AbelianGroup(2)) == "2 Z"
