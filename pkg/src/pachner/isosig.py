"""Isomorphism signatures.

A signature is the smallest printable encoding of a triangulation over all
24n canonical labellings.  Characters compare by ASCII code, so digits sort
before upper-case letters, which sort before lower-case letters.

The per-labelling encoding is implemented here in plain Python; the
minimum over all labellings is delegated to a compiled kernel (see
``_kernel.py``), which must agree with ``min(encode_labelled(...))``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .perm import COMPOSE, INVERSE, PERMS
from .triangulation import Triangulation, is_connected

ALPHABET = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-"
_VALUE = {c: i for i, c in enumerate(ALPHABET)}


class SignatureError(ValueError):
    """A signature string could not be decoded."""


class InvalidCharacter(SignatureError):
    pass


class MalformedHeader(SignatureError):
    pass


class TruncatedSignature(SignatureError):
    pass


class TrailingCharacters(SignatureError):
    pass


class DestinationOutOfRange(SignatureError):
    pass


class NonCanonicalSignature(SignatureError):
    pass


class NotCanonicalLabelling(ValueError):
    """A labelling fails the canonical conditions."""


# -- integers ----------------------------------------------------------------


def digits_for(n: int) -> int:
    """Number of base-64 characters used for integers in 0..n."""
    d = 1
    while 64 ** d <= n:
        d += 1
    return d


def encode_small(i: int) -> str:
    return ALPHABET[i]


def encode_large(i: int, n: int) -> str:
    """``i`` in ``d`` base-64 characters, least significant first."""
    d = digits_for(n)
    if not 0 <= i < 64 ** d:
        raise ValueError(f"{i} does not fit in {d} characters")
    out = []
    for _ in range(d):
        out.append(ALPHABET[i & 63])
        i >>= 6
    return "".join(out)


def header(n: int) -> str:
    if n < 63:
        return ALPHABET[n]
    d = digits_for(n)
    return ALPHABET[63] + ALPHABET[d] + encode_large(n, n)


# -- labellings --------------------------------------------------------------


@dataclass(frozen=True)
class Labelling:
    """A relabelling of tetrahedra and vertices.

    ``tets[k]`` is the original tetrahedron given label ``k``; ``perms[k]``
    sends new vertex numbers of tetrahedron ``k`` to original ones.
    """

    start_tet: int
    start_perm: int
    tets: tuple[int, ...]
    perms: tuple[int, ...]

    def apply(self, tri: Triangulation) -> Triangulation:
        n = tri.size
        tet_map = [0] * n
        vperms = [0] * n
        for k, t in enumerate(self.tets):
            tet_map[t] = k
            vperms[t] = INVERSE[self.perms[k]]
        return tri.relabel(tet_map, vperms)


def extend_labelling(tri: Triangulation, start_tet: int, start_perm: int) -> Labelling:
    """The unique canonical labelling with the given choice for label 0."""
    n = tri.size
    label = [-1] * n
    label[start_tet] = 0
    tets = [start_tet]
    perms = [start_perm]
    k = 0
    while k < len(tets):
        t, phi = tets[k], perms[k]
        for f in range(4):
            i = 4 * t + PERMS[phi][f]
            a = tri.adj[i]
            if a >= 0 and label[a] < 0:
                label[a] = len(tets)
                tets.append(a)
                perms.append(COMPOSE[tri.glu[i]][phi])
        k += 1
    if len(tets) != n:
        raise ValueError("triangulation is not connected")
    return Labelling(start_tet, start_perm, tuple(tets), tuple(perms))


def canonical_labellings(tri: Triangulation) -> list[Labelling]:
    """All 24n canonical labellings, ordered by (start tet, start perm)."""
    return [extend_labelling(tri, t, p) for t in range(tri.size) for p in range(24)]


def is_canonical(tri: Triangulation) -> bool:
    """Whether the triangulation's own labelling is canonical."""
    seen = 1
    for i in range(4 * tri.size):
        a = tri.adj[i]
        if a < 0:
            continue
        if a == seen:
            if tri.glu[i] != 0:
                return False
            seen += 1
        elif a > seen:
            return False
    return seen == tri.size


# -- encoding ----------------------------------------------------------------


def _sequences(tri: Triangulation):
    types, dests, perms = [], [], []
    seen = 1
    for i in range(4 * tri.size):
        a = tri.adj[i]
        if a < 0:
            types.append(0)
            continue
        t, f = divmod(i, 4)
        g = tri.glu[i]
        if (a, PERMS[g][f]) < (t, f):
            continue
        if a == seen:
            if g != 0:
                raise NotCanonicalLabelling(f"first gluing to tetrahedron {a} is not the identity")
            types.append(1)
            seen += 1
        elif a > seen:
            raise NotCanonicalLabelling(f"tetrahedron {a} appears before tetrahedron {seen}")
        else:
            types.append(2)
            dests.append(a)
            perms.append(g)
    if seen != tri.size:
        raise NotCanonicalLabelling("triangulation is not connected")
    return types, dests, perms


def encode(tri: Triangulation) -> str:
    """Encode a triangulation whose own labelling is canonical."""
    n = tri.size
    types, dests, perms = _sequences(tri)
    out = [header(n)]
    padded = types + [0] * (-len(types) % 3)
    for j in range(0, len(padded), 3):
        out.append(ALPHABET[padded[j] + 4 * padded[j + 1] + 16 * padded[j + 2]])
    out.extend(encode_large(a, n) for a in dests)
    out.extend(ALPHABET[g] for g in perms)
    return "".join(out)


def encode_labelled(tri: Triangulation, labelling: Labelling) -> str:
    return encode(labelling.apply(tri))


# -- signatures --------------------------------------------------------------


def isosig(tri: Triangulation) -> str:
    """The isomorphism signature of a connected triangulation."""
    from ._kernel import min_encoding

    if not is_connected(tri):
        raise ValueError("isomorphism signatures need a connected triangulation")
    return min_encoding(tri.adj, tri.glu)


def isosig_reference(tri: Triangulation) -> str:
    """Signature computed by explicitly encoding every canonical labelling."""
    return min(encode_labelled(tri, lab) for lab in canonical_labellings(tri))


def isomorphic(a: Triangulation, b: Triangulation) -> bool:
    return a.size == b.size and isosig(a) == isosig(b)


# -- decoding ----------------------------------------------------------------


def _values(s: str, pos: int, count: int) -> list[int]:
    if pos + count > len(s):
        raise TruncatedSignature(f"signature {s!r} ends early")
    return [_VALUE[c] for c in s[pos:pos + count]]


def decode(s: str) -> Triangulation:
    """Rebuild the canonically labelled triangulation a signature encodes."""
    if not isinstance(s, str) or not s:
        raise MalformedHeader("empty signature")
    bad = [c for c in s if c not in _VALUE]
    if bad:
        raise InvalidCharacter(f"invalid character {bad[0]!r} in signature")

    first = _VALUE[s[0]]
    if first < 63:
        n, d, pos = first, 1, 1
    else:
        if len(s) < 2:
            raise MalformedHeader("missing digit count after the large-size marker")
        d = _VALUE[s[1]]
        if d < 1:
            raise MalformedHeader("digit count must be positive")
        vals = _values(s, 2, d)
        n = sum(v << (6 * k) for k, v in enumerate(vals))
        pos = 2 + d
        if n < 63 or digits_for(n) != d:
            raise MalformedHeader(f"size {n} is not written in canonical form")
    if n == 0:
        raise MalformedHeader("signature describes an empty triangulation")

    # Type sequence: stop once every face is accounted for.
    types = []
    covered = 0
    while covered < 4 * n:
        if pos >= len(s):
            raise TruncatedSignature(f"signature {s!r} ends inside the type sequence")
        v = _VALUE[s[pos]]
        pos += 1
        chunk = [v & 3, (v >> 2) & 3, (v >> 4) & 3]
        if 3 in chunk:
            raise MalformedHeader(f"invalid face type character {s[pos - 1]!r}")
        for j, ty in enumerate(chunk):
            if covered >= 4 * n:
                if ty != 0:
                    raise NonCanonicalSignature("nonzero padding in the type sequence")
                continue
            types.append(ty)
            covered += 1 if ty == 0 else 2
        if covered > 4 * n:
            raise NonCanonicalSignature("face types account for more faces than exist")

    n_old = types.count(2)
    raw = _values(s, pos, n_old * d)
    pos += n_old * d
    dests = [sum(raw[j * d + k] << (6 * k) for k in range(d)) for j in range(n_old)]
    perms = _values(s, pos, n_old)
    pos += n_old
    if pos != len(s):
        raise TrailingCharacters(f"{len(s) - pos} unused characters at the end of {s!r}")
    bad_perm = [g for g in perms if g >= 24]
    if bad_perm:
        raise MalformedHeader(f"permutation number {bad_perm[0]} out of range")

    adj = [-1] * (4 * n)
    glu = [-1] * (4 * n)
    done = [False] * (4 * n)
    it_types = iter(types)
    it_dests = iter(dests)
    it_perms = iter(perms)
    seen = 1
    for i in range(4 * n):
        if done[i]:
            continue
        t, f = divmod(i, 4)
        ty = next(it_types)
        done[i] = True
        if ty == 0:
            continue
        if ty == 1:
            if seen >= n:
                raise NonCanonicalSignature("more new tetrahedra than the stated size")
            a, g = seen, 0
            seen += 1
        else:
            a = next(it_dests)
            g = next(it_perms)
            if a >= n:
                raise DestinationOutOfRange(f"destination {a} with only {n} tetrahedra")
            if a >= seen:
                raise NonCanonicalSignature(f"tetrahedron {a} referenced before its first appearance")
        j = 4 * a + PERMS[g][f]
        if j <= i or done[j]:
            raise NonCanonicalSignature(f"gluing of tetrahedron {t} face {f} collides with an earlier face")
        done[j] = True
        adj[i], glu[i] = a, g
        adj[j], glu[j] = t, INVERSE[g]
    if seen != n:
        raise NonCanonicalSignature(f"only {seen} of {n} tetrahedra appear")
    return Triangulation(adj, glu)
