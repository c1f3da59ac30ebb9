"""Integer simplicial homology through the Smith normal form.

Orientation follows the sorted vertex order: the edge ``(a, b)`` with
``a < b`` has boundary ``b - a`` and the triangle ``(a, b, c)`` has boundary
``[bc] - [ac] + [ab]``.  Matrices act on column vectors, so ``d1`` is
``vertices x edges`` and ``d2`` is ``edges x triangles``.  All arithmetic
uses Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from npc2.complex import connected_components, edges_of

ORIENTATION = "sorted vertices: d[a,b] = b - a; d[a,b,c] = [b,c] - [a,c] + [a,b]"


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _to_rows(A) -> list[list[int]]:
    return [[int(x) for x in row] for row in np.asarray(A, dtype=object).tolist()] if len(A) else []


def smith_normal_form(A, shape: tuple[int, int] | None = None):
    """Return ``(U, D, V)`` with ``D = U @ A @ V``, ``U`` and ``V`` unimodular.

    ``D`` is diagonal with non-negative entries ``d1 | d2 | ...``.  Pass
    ``shape`` for matrices with a zero dimension, where it cannot be
    inferred from an empty list.
    """
    D = _to_rows(A)
    if shape is None:
        arr = np.asarray(A, dtype=object)
        shape = arr.shape if arr.ndim == 2 else (len(D), len(D[0]) if D else 0)
    m, n = shape
    if not D:
        D = [[0] * n for _ in range(m)]
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst += q * row src
        D[dst] = [x + q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (pivot is None or abs(D[i][j]) < abs(D[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return _finish(U, D, V, m, n)
            if pivot[0] != t:
                swap_rows(t, pivot[0])
            if pivot[1] != t:
                swap_cols(t, pivot[1])
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return _finish(U, D, V, m, n)


def _finish(U, D, V, m, n):
    def arr(rows, r, c):
        out = np.empty((r, c), dtype=object)
        for i in range(r):
            for j in range(c):
                out[i, j] = rows[i][j]
        return out

    return arr(U, m, m), arr(D, m, n), arr(V, n, n)


def diagonal(D) -> list[int]:
    return [int(D[i, i]) for i in range(min(D.shape))]


def invariant_factors(A, shape=None) -> list[int]:
    """Nonzero diagonal entries of the Smith form of ``A``."""
    _, D, _ = smith_normal_form(A, shape)
    return [d for d in diagonal(D) if d]


@dataclass(frozen=True)
class ChainComplexData:
    d1: np.ndarray
    d2: np.ndarray
    vertices: tuple
    edges: tuple
    triangles: tuple
    orientation: str = ORIENTATION


def boundary_matrices(s) -> ChainComplexData:
    vidx = {v: i for i, v in enumerate(s.vertices)}
    eidx = {e: i for i, e in enumerate(s.edges)}
    d1 = np.zeros((len(s.vertices), len(s.edges)), dtype=object)
    d2 = np.zeros((len(s.edges), len(s.triangles)), dtype=object)
    for j, (a, b) in enumerate(s.edges):
        d1[vidx[a], j] -= 1
        d1[vidx[b], j] += 1
    for j, t in enumerate(s.triangles):
        ab, ac, bc = edges_of(t)
        d2[eidx[bc], j] += 1
        d2[eidx[ac], j] -= 1
        d2[eidx[ab], j] += 1
    return ChainComplexData(d1, d2, s.vertices, s.edges, s.triangles)


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple[int, int, int]
    torsion: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion)


def homology(s) -> HomologyResult:
    data = boundary_matrices(s)
    nv, ne, nt = len(s.vertices), len(s.edges), len(s.triangles)
    f1 = invariant_factors(data.d1, (nv, ne))
    f2 = invariant_factors(data.d2, (ne, nt))
    r1, r2 = len(f1), len(f2)
    betti = (nv - r1, ne - r1 - r2, nt - r2)
    # d1 always has unit invariant factors; H1 torsion comes from d2
    torsion = (tuple(d for d in f1 if d > 1), tuple(d for d in f2 if d > 1), ())
    return HomologyResult(betti, torsion)


def component_count(s) -> int:
    return len(connected_components(s))
