"""First homology with integer coefficients.

Computed from the cellular chain complex of the triangulation's edges and
faces, using a Smith normal form over Python integers (no overflow).
"""

from __future__ import annotations

from dataclasses import dataclass

from .triangulation import EDGE_INDEX, Triangulation


@dataclass(frozen=True)
class AbelianGroup:
    """Z^rank plus cyclic torsion factors, each dividing the next."""

    rank: int
    torsion: tuple[int, ...] = ()

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"{self.rank} Z")
        parts.extend(f"Z_{k}" for k in self.torsion)
        return " + ".join(parts) if parts else "0"


def smith_diagonal(matrix: list[list[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form, each dividing the next."""
    a = [list(row) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    r = 0
    while r < rows and r < cols:
        # Pivot: the smallest nonzero absolute value in the remaining block.
        pivot = None
        for i in range(r, rows):
            for j in range(r, cols):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        a[r], a[i] = a[i], a[r]
        for row in a:
            row[r], row[j] = row[j], row[r]
        while True:
            p = a[r][r]
            done = True
            for i in range(r + 1, rows):
                q = a[i][r] // p
                if q:
                    ri, rr = a[i], a[r]
                    for j in range(r, cols):
                        ri[j] -= q * rr[j]
                if a[i][r]:
                    done = False
            for j in range(r + 1, cols):
                q = a[r][j] // p
                if q:
                    for i in range(r, rows):
                        a[i][j] -= q * a[i][r]
                if a[r][j]:
                    done = False
            if done:
                # Make sure the pivot divides the rest of the block.
                bad = None
                for i in range(r + 1, rows):
                    for j in range(r + 1, cols):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                for j in range(r, cols):
                    a[r][j] += a[bad][j]
                continue
            # Move the smallest remaining entry of the pivot row/column up.
            best = (abs(p), r, r)
            for i in range(r + 1, rows):
                if a[i][r] and abs(a[i][r]) < best[0]:
                    best = (abs(a[i][r]), i, r)
            for j in range(r + 1, cols):
                if a[r][j] and abs(a[r][j]) < best[0]:
                    best = (abs(a[r][j]), r, j)
            _, i, j = best
            if i != r:
                a[r], a[i] = a[i], a[r]
            if j != r:
                for row in a:
                    row[r], row[j] = row[j], row[r]
        diag.append(abs(a[r][r]))
        r += 1
    return diag


def boundary_matrices(tri: Triangulation):
    """Boundary maps faces -> edges and edges -> vertices as integer matrices.

    Each face class is oriented by the vertex order of its first listed
    (tet, face) occurrence; each edge class by its reference orientation.
    """
    sk = tri.skeleton
    ne, nf, nv = sk.num_edges, sk.num_faces, sk.num_vertices
    d1 = [[0] * ne for _ in range(nv)]
    for e in range(ne):
        a, b = sk.edge_endpoints(e)
        d1[b][e] += 1
        d1[a][e] -= 1
    d2 = [[0] * nf for _ in range(ne)]
    for c, members in enumerate(sk.face_classes):
        t, f = members[0]
        v = [x for x in range(4) if x != f]
        # Boundary of the oriented triangle [v0, v1, v2].
        for (x, y), s in (((v[1], v[2]), 1), ((v[0], v[2]), -1), ((v[0], v[1]), 1)):
            slot = EDGE_INDEX[x][y]
            e = sk.edge_of[6 * t + slot]
            d2[e][c] += s * sk.edge_sign[6 * t + slot]
    return d1, d2


def homology_h1(tri: Triangulation) -> AbelianGroup:
    """H1(M; Z) of a triangulation with no reversed edges."""
    if tri.skeleton.bad_edges:
        raise ValueError("homology needs a triangulation with no reversed edges")
    d1, d2 = boundary_matrices(tri)
    ne = tri.skeleton.num_edges
    rank1 = len(smith_diagonal(d1)) if d1 and ne else 0
    diag2 = smith_diagonal(d2) if ne else []
    torsion = tuple(x for x in diag2 if x > 1)
    return AbelianGroup(ne - rank1 - len(diag2), torsion)
