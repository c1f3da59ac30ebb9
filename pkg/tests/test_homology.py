import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors as sympy_factors

from npc2.complex import Complex2, closure, connected_components
from npc2.harness import enumerate_subcomplexes, generate, octahedron_parts
from npc2.homology import (
    boundary_matrices,
    diagonal,
    homology,
    invariant_factors,
    smith_normal_form,
)

from conftest import builtin, random_complexes

RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
       (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]

matrices = st.integers(0, 6).flatmap(
    lambda m: st.integers(0, 6).flatmap(
        lambda n: st.lists(st.lists(st.integers(-10, 10), min_size=n, max_size=n), min_size=m, max_size=m)
        .map(lambda rows: (rows, (m, n)))
    )
)


def check_snf(rows, shape):
    A = np.array(rows, dtype=object).reshape(shape)
    U, D, V = smith_normal_form(A, shape)
    assert (U.dot(A).dot(V) == D).all()
    m, n = shape
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i, j] == 0
    d = diagonal(D)
    assert all(x >= 0 for x in d)
    nz = [x for x in d if x]
    assert d[: len(nz)] == nz  # nonzero entries come first
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    # unimodular transforms
    if m:
        assert abs(sympy.Matrix(U.tolist()).det()) == 1
    if n:
        assert abs(sympy.Matrix(V.tolist()).det()) == 1
    return nz


class TestSmithNormalForm:
    def test_identity(self):
        _, D, _ = smith_normal_form(np.eye(3, dtype=int).astype(object))
        assert diagonal(D) == [1, 1, 1]

    def test_two_by_two(self):
        assert check_snf([[2, 4], [6, 8]], (2, 2)) == [2, 4]

    def test_zero(self):
        assert diagonal(smith_normal_form(np.zeros((2, 3), dtype=object))[1]) == [0, 0]

    def test_empty_shapes(self):
        for shape in [(0, 0), (0, 3), (3, 0)]:
            U, D, V = smith_normal_form([], shape)
            assert D.shape == shape and U.shape == (shape[0],) * 2 and V.shape == (shape[1],) * 2

    def test_big_entries_stay_exact(self):
        big = 10**30
        assert invariant_factors([[big, 0], [0, big * 3]]) == [big, 3 * big]

    @given(matrices)
    @settings(max_examples=150, deadline=None)
    def test_properties_and_sympy_oracle(self, data):
        rows, shape = data
        nz = check_snf(rows, shape)
        if 0 in shape:
            assert nz == []
            return
        want = [abs(int(x)) for x in sympy_factors(sympy.Matrix(rows), domain=sympy.ZZ) if x != 0]
        assert nz == want


class TestBoundary:
    def test_triangle_column(self):
        data = boundary_matrices(builtin("triangle"))
        assert data.edges == ((0, 1), (0, 2), (1, 2))
        assert list(data.d2[:, 0]) == [1, -1, 1]

    def test_empty(self):
        data = boundary_matrices(Complex2(()))
        assert data.d1.shape == (0, 0) and data.d2.shape == (0, 0)

    def test_octahedron_shapes(self, octahedron):
        data = boundary_matrices(octahedron)
        assert data.d1.shape == (6, 12) and data.d2.shape == (12, 8)
        assert not data.d1.dot(data.d2).any()

    @given(random_complexes())
    @settings(max_examples=80, deadline=None)
    def test_boundary_of_boundary(self, c):
        data = boundary_matrices(c)
        if data.d2.size and data.d1.size:
            assert not data.d1.dot(data.d2).any()


class TestHomology:
    def test_octahedron(self, octahedron):
        h = homology(octahedron)
        assert h.betti == (1, 0, 1) and h.torsion_free

    def test_torus(self):
        h = homology(generate("torus_grid", n=3)[0])
        assert h.betti == (1, 2, 1) and h.torsion_free

    def test_equator(self, octahedron):
        h = homology(octahedron_parts(octahedron)["equator"])
        assert h.betti == (1, 1, 0)

    def test_projective_plane_torsion(self):
        h = homology(Complex2.from_triangles(RP2))
        assert h.betti == (1, 0, 0)
        assert h.torsion == ((), (2,), ())

    def test_empty(self):
        assert homology(Complex2(())).betti == (0, 0, 0)

    @given(random_complexes())
    @settings(max_examples=80, deadline=None)
    def test_euler_characteristic(self, c):
        b0, b1, b2 = homology(c).betti
        nv, ne, nt = c.counts()
        assert b0 - b1 + b2 == nv - ne + nt

    @given(random_complexes())
    @settings(max_examples=80, deadline=None)
    def test_b0_counts_components(self, c):
        assert homology(c).betti[0] == len(connected_components(c))

    @given(random_complexes())
    @settings(max_examples=60, deadline=None)
    def test_rational_ranks_match_sympy(self, c):
        data = boundary_matrices(c)
        r1 = sympy.Matrix(data.d1.tolist()).rank() if data.d1.size else 0
        r2 = sympy.Matrix(data.d2.tolist()).rank() if data.d2.size else 0
        nv, ne, nt = c.counts()
        assert homology(c).betti == (nv - r1, ne - r1 - r2, nt - r2)

    def test_subcomplexes_of_disk_have_no_h2(self):
        c = generate("disk_grid", n=3)[0]
        tris = c.triangles
        # every union of triangles, closed under faces
        for mask in range(1, 1 << len(tris)):
            s = closure(c, [t for i, t in enumerate(tris) if mask >> i & 1])
            assert homology(s).betti[2] == 0

    def test_disk_grid_two_all_subcomplexes(self):
        c = generate("disk_grid", n=2)[0]
        for s in enumerate_subcomplexes(c):
            h = homology(s)
            assert h.betti[2] == 0 and h.torsion_free
