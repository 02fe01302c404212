"""Permutations of {0, 1, 2, 3}.

Permutations are numbered 0..23 in lexicographic order of their image
tuples.  Most of the package works directly with these indices and the
lookup tables below; :class:`Perm4` is the friendlier object form.
"""

from __future__ import annotations

from itertools import permutations

PERMS: tuple[tuple[int, int, int, int], ...] = tuple(permutations(range(4)))
INDEX: dict[tuple[int, ...], int] = {p: i for i, p in enumerate(PERMS)}

IDENTITY = 0

# COMPOSE[a][b] is the index of a∘b, i.e. v -> PERMS[a][PERMS[b][v]].
COMPOSE: tuple[tuple[int, ...], ...] = tuple(
    tuple(INDEX[tuple(a[b[v]] for v in range(4))] for b in PERMS) for a in PERMS
)
INVERSE: tuple[int, ...] = tuple(
    INDEX[tuple(sorted(range(4), key=lambda v: p[v]))] for p in PERMS
)


def _parity(p: tuple[int, ...]) -> int:
    inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
    return inversions & 1


# 1 for odd permutations, 0 for even ones.
ODD: tuple[int, ...] = tuple(_parity(p) for p in PERMS)


def transposition(a: int, b: int) -> int:
    """Index of the permutation swapping ``a`` and ``b``."""
    image = [0, 1, 2, 3]
    image[a], image[b] = b, a
    return INDEX[tuple(image)]


def from_images(images) -> int:
    """Index of the permutation sending ``v`` to ``images[v]``."""
    key = tuple(images)
    try:
        return INDEX[key]
    except KeyError:
        raise ValueError(f"not a permutation of 0..3: {key!r}") from None


class Perm4:
    """A permutation of {0, 1, 2, 3}, stored by its lexicographic index."""

    __slots__ = ("index",)

    def __init__(self, *images: int):
        if len(images) == 1 and not isinstance(images[0], int):
            images = tuple(images[0])
        self.index = from_images(images)

    @classmethod
    def from_index(cls, i: int) -> "Perm4":
        if not isinstance(i, int) or not 0 <= i < 24:
            raise ValueError(f"permutation index out of range: {i!r}")
        p = cls.__new__(cls)
        p.index = i
        return p

    @property
    def image(self) -> tuple[int, int, int, int]:
        return PERMS[self.index]

    def __call__(self, v: int) -> int:
        return PERMS[self.index][v]

    def __mul__(self, other: "Perm4") -> "Perm4":
        return Perm4.from_index(COMPOSE[self.index][other.index])

    def inverse(self) -> "Perm4":
        return Perm4.from_index(INVERSE[self.index])

    def is_odd(self) -> bool:
        return bool(ODD[self.index])

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm4) and other.index == self.index

    def __hash__(self) -> int:
        return self.index

    def __repr__(self) -> str:
        return "Perm4(%d, %d, %d, %d)" % self.image


def perm_from_index(i: int) -> Perm4:
    """The ``i``-th permutation of (0, 1, 2, 3) in lexicographic order."""
    return Perm4.from_index(i)


def perm_index(p: Perm4) -> int:
    return p.index
