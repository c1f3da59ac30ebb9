import pytest
from hypothesis import strategies as st

from npc2.complex import Complex2, closure
from npc2.harness import generate

BUILTINS = [
    ("triangle", {}),
    ("octahedron", {}),
    ("disk_grid", {"n": 3}),
    ("torus_grid", {"n": 3}),
    ("cone", {"k": 4}),
    ("path", {"k": 3}),
]


@pytest.fixture
def octahedron():
    return generate("octahedron")[0]


@pytest.fixture
def torus():
    return generate("torus_grid", n=3)[0]


def builtin(name, **params):
    return generate(name, **params)[0]


@st.composite
def complexes(draw, names=tuple(n for n, _ in BUILTINS)):
    name = draw(st.sampled_from(names))
    params = dict(BUILTINS)[name]
    return builtin(name, **params)


@st.composite
def subcomplexes_of(draw, c: Complex2):
    simplices = list(c.simplices)
    seeds = draw(st.lists(st.sampled_from(simplices), max_size=8))
    return closure(c, seeds)


@st.composite
def complex_and_subcomplexes(draw, count=2, names=tuple(n for n, _ in BUILTINS)):
    c = draw(complexes(names))
    return (c,) + tuple(draw(subcomplexes_of(c)) for _ in range(count))


@st.composite
def weighted_graphs(draw, max_nodes=8, max_arcs=12, multi=True):
    n = draw(st.integers(1, max_nodes))
    nodes = list(range(n))
    if n < 2:
        return nodes, []
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    raw = draw(st.lists(pairs, max_size=max_arcs))
    if not multi:
        raw = list({tuple(sorted(p)) for p in raw})
    weights = draw(st.lists(st.floats(0.05, 3.0), min_size=len(raw), max_size=len(raw)))
    return nodes, [(u, w, x) for (u, w), x in zip(raw, weights)]


def pytest_configure(config):
    config._acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@st.composite
def random_complexes(draw, max_vertices=7, max_triangles=8, max_edges=6):
    """Arbitrary small 2-complexes: random triangles, dangling edges, isolated vertices."""
    n = draw(st.integers(1, max_vertices))
    verts = st.integers(0, n - 1)
    tris = draw(st.lists(st.tuples(verts, verts, verts).filter(lambda t: len(set(t)) == 3),
                         max_size=max_triangles))
    edges = draw(st.lists(st.tuples(verts, verts).filter(lambda e: e[0] != e[1]), max_size=max_edges))
    return Complex2.from_triangles(tris, edges=edges, vertices=range(n))
