import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from npc2.complex import Complex2, ParentMismatch, closure, connected_components, induced, union
from npc2.groups import abelianization, is_trivial_group, reduce_word
from npc2.harness import generate, octahedron_parts
from npc2.homology import homology
from npc2.pi1 import (
    EmptyComponent,
    Pi1Cache,
    fundamental_group,
    generator_loop,
    induced_map_injectivity,
    path_word,
    verify_witness,
    word_loop,
)
from npc2.verdict import Budget

from conftest import builtin, complex_and_subcomplexes, random_complexes

RP2 = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
       (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]


def cycle_graph(n):
    return Complex2.from_triangles([], edges=[(i, (i + 1) % n) for i in range(n)])


class TestPresentation:
    def test_filled_triangle(self):
        p = fundamental_group(builtin("triangle"))
        assert p.rank == 1 and len(p.relators) == 1
        assert is_trivial_group(p).yes

    def test_four_cycle(self):
        p = fundamental_group(cycle_graph(4))
        assert p.rank == 1 and p.relators == ()
        assert p.origin["basepoint"] == 0

    def test_torus(self):
        p = fundamental_group(generate("torus_grid", n=3)[0])
        ab = abelianization(p)
        assert ab.free_rank == 2 and ab.torsion == ()

    def test_projective_plane(self):
        ab = abelianization(fundamental_group(Complex2.from_triangles(RP2)))
        assert ab.free_rank == 0 and ab.torsion == (2,)

    def test_component_of_basepoint(self):
        c = Complex2.from_triangles([(0, 1, 2)], edges=[(5, 6), (6, 7), (5, 7)])
        p = fundamental_group(c, 6)
        assert p.origin["basepoint"] == 5 and p.rank == 1 and p.relators == ()

    def test_empty(self):
        with pytest.raises(EmptyComponent):
            fundamental_group(Complex2(()))
        with pytest.raises(EmptyComponent):
            fundamental_group(builtin("triangle"), 9)

    @given(random_complexes())
    @settings(max_examples=60, deadline=None)
    def test_abelianization_is_h1(self, c):
        comp = connected_components(c).components[0]
        ab = abelianization(fundamental_group(comp))
        h = homology(comp)
        assert ab.free_rank == h.betti[1]
        assert ab.torsion == h.torsion[1]

    @given(random_complexes())
    @settings(max_examples=60, deadline=None)
    def test_generator_loops_read_back(self, c):
        p = fundamental_group(c)
        for k in range(1, p.rank + 1):
            loop = generator_loop(p, k)
            assert loop[0] == loop[-1] == p.origin["basepoint"]
            assert path_word(p, loop) == (k,)
        w = tuple(range(1, p.rank + 1)) + tuple(-k for k in range(1, p.rank + 1))
        assert path_word(p, word_loop(p, w)) == reduce_word(w)

    def test_path_word_rejects_non_edges(self, octahedron):
        p = fundamental_group(octahedron)
        with pytest.raises(ValueError):
            path_word(p, [0, 5, 0])


class TestInjectivity:
    def test_equator_in_upper_disk(self, octahedron):
        parts = octahedron_parts(octahedron)
        (v,) = induced_map_injectivity(parts["equator"], parts["upper"])
        assert v.no
        loop = v.witness["loop"]
        assert loop[0] == loop[-1] and sorted(set(loop)) == [1, 2, 3, 4] and len(loop) == 5
        assert v.certificate["nontrivial_in_sub"] == "free-reduction"
        assert verify_witness(parts["equator"], parts["upper"], loop)

    def test_equator_in_sphere(self, octahedron):
        parts = octahedron_parts(octahedron)
        (v,) = induced_map_injectivity(parts["equator"], octahedron.full())
        # the sphere's presentation simplifies to the trivial one
        assert v.no and v.certificate["trivial_in_ambient"] == {"method": "free-image", "ambient_rank": 0}
        assert verify_witness(parts["equator"], octahedron.full(), v.witness["loop"])

    def test_triangle_into_anything(self, octahedron):
        t = closure(octahedron, [(0, 1, 2)])
        (v,) = induced_map_injectivity(t, octahedron.full())
        assert v.yes

    def test_circle_into_annulus_and_disk(self):
        c = generate("disk_grid", n=3)[0]
        annulus = induced(c, c.full(), [v for v in c.vertices if v != 4])
        boundary = closure(c, [e for e in c.edges if 4 not in e and e not in ((1, 5), (3, 7))])
        assert boundary.counts() == (8, 8, 0)
        (v,) = induced_map_injectivity(boundary, annulus)
        assert v.yes and v.certificate["method"] == "stallings-rank"
        (v,) = induced_map_injectivity(boundary, c.full())
        assert v.no

    def test_meridian_of_torus(self):
        c = generate("torus_grid", n=3)[0]
        meridian = closure(c, [(0, 1), (1, 2), (0, 2)])
        (v,) = induced_map_injectivity(meridian, c.full())
        assert v.yes and v.certificate["method"] == "infinite-order-image"

    def test_loop_in_projective_plane(self):
        c = Complex2.from_triangles(RP2)
        # 0-1-3 bounds no triangle; it generates pi_1 = Z/2
        loop = closure(c, [(0, 1), (1, 3), (0, 3)])
        (v,) = induced_map_injectivity(loop, c.full())
        assert v.no and v.certificate["trivial_in_ambient"]["order"] == 2
        assert verify_witness(loop, c.full(), v.witness["loop"])

    def test_one_verdict_per_component(self, octahedron):
        s = closure(octahedron, [(0, 1, 2), 5])
        vs = induced_map_injectivity(s, octahedron.full())
        assert len(vs) == 2 and all(v.yes for v in vs)
        assert [v.certificate["basepoint"] for v in vs] == [0, 5]

    def test_not_contained(self, octahedron):
        parts = octahedron_parts(octahedron)
        with pytest.raises(ValueError):
            induced_map_injectivity(parts["upper"], parts["lower"])

    def test_parent_mismatch(self, octahedron):
        with pytest.raises(ParentMismatch):
            induced_map_injectivity(builtin("triangle").full(), octahedron.full())

    def test_verify_rejects_bad_loops(self, octahedron):
        parts = octahedron_parts(octahedron)
        eq, up = parts["equator"], parts["upper"]
        assert not verify_witness(eq, up, [1, 2, 3])
        assert not verify_witness(eq, up, [1, 2, 1])
        assert not verify_witness(eq, up, [1, 3, 1])
        assert not verify_witness(eq, octahedron_parts(octahedron)["equator"], [1, 2, 3, 4, 1])

    @given(random_complexes(max_triangles=0, max_edges=10), st.data())
    @settings(max_examples=80, deadline=None)
    def test_graphs_always_inject(self, g, data):
        ambient = g.full()
        keep = data.draw(st.lists(st.sampled_from(g.edges), unique=True)) if g.edges else []
        sub = closure(g, keep + list(g.vertices))
        vs = induced_map_injectivity(sub, ambient)
        assert all(v.yes for v in vs)

    @given(complex_and_subcomplexes(count=2))
    @settings(max_examples=60, deadline=None)
    def test_no_verdicts_replay(self, data):
        _, x, y = data
        ambient = union(x, y)
        for v in induced_map_injectivity(x, ambient):
            if v.no and "loop" in v.witness:
                assert verify_witness(x, ambient, v.witness["loop"])

    @given(complex_and_subcomplexes(count=2))
    @settings(max_examples=40, deadline=None)
    def test_budget_monotone(self, data):
        _, x, y = data
        ambient = union(x, y)
        small = induced_map_injectivity(x, ambient, Budget(tietze_moves=5, max_cosets=20, word_length=3))
        big = induced_map_injectivity(x, ambient, Budget())
        for s, b in zip(small, big):
            if not s.unknown:
                assert s.value == b.value

    def test_cache_reuse(self, octahedron):
        parts = octahedron_parts(octahedron)
        cache = Pi1Cache()
        a = induced_map_injectivity(parts["equator"], parts["upper"], cache=cache)
        b = induced_map_injectivity(parts["equator"], parts["upper"], cache=cache)
        assert a == b
