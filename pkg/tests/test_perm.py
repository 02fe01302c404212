import itertools

import pytest

from pachner.perm import COMPOSE, INVERSE, ODD, PERMS, Perm4, perm_from_index, perm_index


def test_index_roundtrip():
    for i in range(24):
        assert perm_index(perm_from_index(i)) == i


def test_lexicographic_examples():
    assert perm_from_index(0).image == (0, 1, 2, 3)
    assert perm_from_index(1).image == (0, 1, 3, 2)
    assert perm_from_index(23).image == (3, 2, 1, 0)
    assert [p.image for p in map(perm_from_index, range(24))] == sorted(itertools.permutations(range(4)))


@pytest.mark.parametrize("bad", [-1, 24, 100])
def test_index_out_of_range(bad):
    with pytest.raises(ValueError):
        perm_from_index(bad)


def test_tables_match_tuple_arithmetic():
    for a, b in itertools.product(range(24), repeat=2):
        assert PERMS[COMPOSE[a][b]] == tuple(PERMS[a][PERMS[b][v]] for v in range(4))
    for a in range(24):
        assert COMPOSE[a][INVERSE[a]] == 0
        assert COMPOSE[INVERSE[a]][a] == 0


def test_parity():
    assert sum(ODD) == 12
    for a, b in itertools.product(range(24), repeat=2):
        assert ODD[COMPOSE[a][b]] == ODD[a] ^ ODD[b]


def test_perm_object():
    p = Perm4(1, 0, 2, 3)
    q = Perm4((0, 2, 1, 3))
    assert (p * q).image == tuple(p(q(v)) for v in range(4))
    assert (p * p.inverse()).index == 0
    with pytest.raises(ValueError):
        Perm4(0, 0, 1, 2)
