import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from npc2.collapse import (
    EDGE_COLLAPSE,
    EDGE_EXTENSION,
    TRIANGLE_COLLAPSE,
    TRIANGLE_EXTENSION,
    CollapseCertificate,
    InvalidGluing,
    Move,
    NotFree,
    apply_move,
    free_pairs,
    inverse_move,
    is_collapsible,
    verify_certificate,
)
from npc2.complex import Complex2
from npc2.groups import is_trivial_group
from npc2.harness import generate
from npc2.homology import homology
from npc2.pi1 import fundamental_group
from npc2.verdict import Budget

from conftest import builtin, complexes, random_complexes
from oracles import greedy_collapse

# Dunce hat: a triangle with its sides glued as a a a^-1, subdivided twice.
# Contractible, yet no edge or vertex is free.
DUNCE_HAT = [
    (0, 1, 2), (0, 1, 7), (0, 1, 12), (0, 2, 3), (0, 3, 7), (0, 9, 10), (0, 9, 14), (0, 9, 16),
    (0, 10, 11), (0, 11, 12), (0, 14, 15), (0, 15, 16), (1, 2, 4), (1, 4, 7), (1, 4, 12),
    (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 6, 7), (4, 5, 10), (4, 7, 8), (4, 8, 14), (4, 9, 10),
    (4, 9, 14), (4, 9, 16), (4, 12, 13), (4, 13, 16), (5, 6, 10), (6, 7, 8), (6, 8, 14),
    (6, 10, 11), (6, 11, 12), (6, 12, 13), (6, 13, 16), (6, 14, 15), (6, 15, 16),
]


def path3():
    return Complex2.from_triangles([], edges=[(0, 1), (1, 2)])


class TestFreePairs:
    def test_triangle(self):
        pairs = free_pairs(builtin("triangle"))
        assert pairs == [((0, 1), (0, 1, 2)), ((0, 2), (0, 1, 2)), ((1, 2), (0, 1, 2))]

    def test_octahedron(self, octahedron):
        assert free_pairs(octahedron) == []

    def test_path(self):
        assert free_pairs(path3()) == [(0, (0, 1)), (2, (1, 2))]


class TestApplyMove:
    def test_collapse_triangle(self):
        c = apply_move(builtin("triangle"), Move(TRIANGLE_COLLAPSE, ((0, 2), (0, 1, 2))))
        assert c == path3()

    def test_extend(self):
        c = apply_move(path3(), Move(TRIANGLE_EXTENSION, ((0, 1), (1, 2))))
        assert c == builtin("triangle")

    def test_extend_rejects_existing_third_edge(self):
        c = Complex2.from_triangles([], edges=[(0, 1), (1, 2), (0, 2)])
        with pytest.raises(InvalidGluing):
            apply_move(c, Move(TRIANGLE_EXTENSION, ((0, 1), (1, 2))))

    def test_extend_rejects_disjoint_edges(self):
        c = Complex2.from_triangles([], edges=[(0, 1), (2, 3)])
        with pytest.raises(InvalidGluing):
            apply_move(c, Move(TRIANGLE_EXTENSION, ((0, 1), (2, 3))))

    def test_collapse_on_octahedron(self, octahedron):
        with pytest.raises(NotFree):
            apply_move(octahedron, Move(TRIANGLE_COLLAPSE, ((0, 1), (0, 1, 2))))

    def test_edge_moves(self):
        c = apply_move(path3(), Move(EDGE_COLLAPSE, (2, (1, 2))))
        assert c.counts() == (2, 1, 0)
        with pytest.raises(NotFree):
            apply_move(path3(), Move(EDGE_COLLAPSE, (1, (1, 2))))
        d = apply_move(c, Move(EDGE_EXTENSION, (1, 2)))
        assert d == path3()
        with pytest.raises(InvalidGluing):
            apply_move(c, Move(EDGE_EXTENSION, (1, 0)))

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            Move("Teleport", ())

    def test_move_round_trip(self):
        m = Move(TRIANGLE_COLLAPSE, ((0, 2), (0, 1, 2)))
        assert Move.from_dict(m.to_dict()) == m


class TestMoveInvariants:
    @given(st.one_of(complexes(), random_complexes()), st.data())
    @settings(max_examples=80, deadline=None)
    def test_collapse_preserves_homology_and_reverses(self, c, data):
        pairs = free_pairs(c)
        if not pairs:
            return
        face, coface = data.draw(st.sampled_from(pairs))
        kind = EDGE_COLLAPSE if isinstance(face, int) else TRIANGLE_COLLAPSE
        m = Move(kind, (face, coface))
        d = apply_move(c, m)
        assert homology(d) == homology(c)
        assert apply_move(d, inverse_move(c, m)) == c

    @given(st.one_of(complexes(), random_complexes()))
    @settings(max_examples=40, deadline=None)
    def test_collapse_preserves_triviality(self, c):
        pairs = free_pairs(c)
        if not pairs or not c.vertices:
            return
        face, coface = pairs[0]
        kind = EDGE_COLLAPSE if isinstance(face, int) else TRIANGLE_COLLAPSE
        d = apply_move(c, Move(kind, (face, coface)))
        # a vertex of the collapsed pair that survives the move
        base = next(v for v in coface if v != face) if isinstance(face, int) else face[0]
        budget = Budget(max_cosets=2000)
        before = is_trivial_group(fundamental_group(c, base), budget)
        after = is_trivial_group(fundamental_group(d, base), budget)
        if not before.unknown and not after.unknown:
            assert before.value == after.value


class TestIsCollapsible:
    def test_triangle(self):
        v = is_collapsible(builtin("triangle"))
        assert v.yes and len(v.witness.moves) == 3
        assert verify_certificate(builtin("triangle"), v.witness)

    def test_octahedron(self, octahedron):
        assert is_collapsible(octahedron).no

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_disk_grid(self, n):
        c = generate("disk_grid", n=n)[0]
        assert greedy_collapse(c) == (1, 0, 0)
        v = is_collapsible(c)
        assert v.yes and verify_certificate(c, v.witness)

    def test_dunce_hat(self):
        c = Complex2.from_triangles(DUNCE_HAT)
        assert homology(c).betti == (1, 0, 0)
        assert free_pairs(c) == []
        assert is_trivial_group(fundamental_group(c)).yes
        v = is_collapsible(c)
        assert v.no and v.certificate["method"] == "search-exhausted"

    def test_disconnected_and_empty(self):
        assert is_collapsible(Complex2((0, 1))).no
        assert is_collapsible(Complex2(())).no

    def test_budget(self):
        c = generate("disk_grid", n=3)[0]
        v = is_collapsible(c, Budget(search_nodes=3))
        assert v.unknown

    @given(st.one_of(complexes(), random_complexes()))
    @settings(max_examples=80, deadline=None)
    def test_certificates_verify(self, c):
        v = is_collapsible(c)
        if v.yes:
            assert verify_certificate(c, v.witness)
            assert homology(c).betti == (1, 0, 0)
            assert not is_trivial_group(fundamental_group(c)).no


class TestVerifyCertificate:
    def test_reordered(self):
        c = builtin("triangle")
        cert = is_collapsible(c).witness
        moves = list(cert.moves)
        bad = CollapseCertificate(tuple(moves[1:] + moves[:1]), cert.terminal)
        check = verify_certificate(c, bad)
        assert not check and check.failed_at is not None

    def test_edge_before_triangle(self):
        c = builtin("triangle")
        bad = CollapseCertificate((Move(EDGE_COLLAPSE, (0, (0, 1))),), 1)
        check = verify_certificate(c, bad)
        assert not check and check.failed_at == 0

    def test_wrong_complex(self, octahedron):
        cert = is_collapsible(builtin("triangle")).witness
        assert not verify_certificate(octahedron, cert)
        assert not verify_certificate(path3(), cert)

    def test_wrong_terminal(self):
        c = builtin("triangle")
        cert = is_collapsible(c).witness
        other = next(v for v in c.vertices if v != cert.terminal)
        check = verify_certificate(c, CollapseCertificate(cert.moves, other))
        assert not check and check.failed_at == len(cert.moves)
