"""Finite 2-dimensional simplicial complexes and their subcomplexes.

Simplices are stored canonically: a vertex is an ``int``, an edge a sorted
pair and a triangle a sorted triple.  Both :class:`Complex2` and
:class:`Subcomplex` are immutable, so every operation here is pure.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


class ComplexError(ValueError):
    pass


class ValidationProblem(ComplexError):
    """One diagnostic found while validating a complex description."""

    kind = "problem"

    def __init__(self, simplex, message=""):
        self.simplex = simplex
        super().__init__(message or f"{self.kind}: {simplex}")


class MissingFace(ValidationProblem):
    kind = "MissingFace"


class DuplicateSimplex(ValidationProblem):
    kind = "DuplicateSimplex"


class DegenerateSimplex(ValidationProblem):
    kind = "DegenerateSimplex"


class ValidationError(ComplexError):
    def __init__(self, diagnostics: list[ValidationProblem]):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"{len(self.diagnostics)} validation problem(s): {lines}")


class UnknownSimplex(ComplexError):
    pass


class UnknownVertex(ComplexError):
    pass


class ParentMismatch(ComplexError):
    pass


def edges_of(tri: Triangle) -> tuple[Edge, Edge, Edge]:
    a, b, c = tri
    return (a, b), (a, c), (b, c)


def _as_simplex(s) -> tuple[int, ...]:
    if isinstance(s, int):
        return (s,)
    return tuple(sorted(int(v) for v in s))


class _Cells:
    """Shared read-only views over ``vertices``/``edges``/``triangles``."""

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    triangles: tuple[Triangle, ...]

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def triangle_set(self) -> frozenset[Triangle]:
        return frozenset(self.triangles)

    @property
    def size(self) -> int:
        return len(self.vertices) + len(self.edges) + len(self.triangles)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def dimension(self) -> int:
        if self.triangles:
            return 2
        if self.edges:
            return 1
        return 0 if self.vertices else -1

    @property
    def simplices(self) -> tuple[tuple[int, ...], ...]:
        return tuple((v,) for v in self.vertices) + self.edges + self.triangles

    @cached_property
    def neighbors(self) -> dict[int, tuple[int, ...]]:
        nbrs: dict[int, list[int]] = {v: [] for v in self.vertices}
        for a, b in self.edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        return {v: tuple(sorted(n)) for v, n in nbrs.items()}

    @cached_property
    def edge_cofaces(self) -> dict[Edge, tuple[Triangle, ...]]:
        cof: dict[Edge, list[Triangle]] = {e: [] for e in self.edges}
        for t in self.triangles:
            for e in edges_of(t):
                cof[e].append(t)
        return {e: tuple(ts) for e, ts in cof.items()}

    def contains(self, simplex) -> bool:
        s = _as_simplex(simplex)
        if len(s) == 1:
            return s[0] in self.vertex_set
        if len(s) == 2:
            return s in self.edge_set
        if len(s) == 3:
            return s in self.triangle_set
        return False

    def key(self) -> tuple:
        """Canonical hashable form (ignores any parent)."""
        return (self.vertices, self.edges, self.triangles)

    def counts(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.triangles)


def _problems(vertices, edges, triangles) -> list[ValidationProblem]:
    problems: list[ValidationProblem] = []
    seen_v: set[int] = set()
    for v in vertices:
        if v in seen_v:
            problems.append(DuplicateSimplex((v,)))
        seen_v.add(v)
    seen_e: set[Edge] = set()
    for e in edges:
        if len(e) != 2 or e[0] == e[1]:
            problems.append(DegenerateSimplex(tuple(e)))
            continue
        if e in seen_e:
            problems.append(DuplicateSimplex(e))
        seen_e.add(e)
        for v in e:
            if v not in seen_v:
                problems.append(MissingFace((v,), f"MissingFace: vertex {v} of edge {e}"))
    seen_t: set[Triangle] = set()
    for t in triangles:
        if len(t) != 3 or len(set(t)) != 3:
            problems.append(DegenerateSimplex(tuple(t)))
            continue
        if t in seen_t:
            problems.append(DuplicateSimplex(t))
        seen_t.add(t)
        for e in edges_of(t):
            if e not in seen_e:
                problems.append(MissingFace(e, f"MissingFace: edge {e} of triangle {t}"))
    return problems


@dataclass(frozen=True, eq=True)
class Complex2(_Cells):
    """A finite simplicial complex of dimension at most two."""

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...] = ()
    triangles: tuple[Triangle, ...] = ()

    def __post_init__(self):
        vs = [int(v) for v in self.vertices]
        es = [tuple(sorted(int(x) for x in e)) for e in self.edges]
        ts = [tuple(sorted(int(x) for x in t)) for t in self.triangles]
        problems = _problems(vs, es, ts)
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "vertices", tuple(sorted(vs)))
        object.__setattr__(self, "edges", tuple(sorted(es)))
        object.__setattr__(self, "triangles", tuple(sorted(ts)))

    @classmethod
    def from_triangles(cls, triangles: Iterable, edges: Iterable = (), vertices: Iterable = ()):
        """Build a complex, adding every face implied by the given simplices."""
        ts = {tuple(sorted(t)) for t in triangles}
        es = {tuple(sorted(e)) for e in edges}
        for t in ts:
            es.update(edges_of(t))
        vs = set(vertices)
        for e in es:
            vs.update(e)
        return cls(tuple(vs), tuple(es), tuple(ts))

    def full(self) -> "Subcomplex":
        return Subcomplex(self, self.vertices, self.edges, self.triangles)

    def as_complex(self) -> "Complex2":
        return self

    @property
    def root(self) -> "Complex2":
        return self


def validate(raw: Mapping) -> Complex2:
    """Check a raw ``{vertices, edges, triangles}`` description.

    Raises :class:`ValidationError` listing every problem found, not just
    the first one.
    """
    problems: list[ValidationProblem] = []
    try:
        vertices = [int(v) for v in raw.get("vertices", ())]
        edges = [tuple(sorted(int(x) for x in e)) for e in raw.get("edges", ())]
        triangles = [tuple(sorted(int(x) for x in t)) for t in raw.get("triangles", ())]
    except (TypeError, ValueError) as exc:
        raise ValidationError([ValidationProblem(None, f"malformed simplex list: {exc}")]) from exc
    for simplex in raw.get("higher", ()):
        problems.append(DegenerateSimplex(tuple(simplex), f"dimension > 2: {simplex}"))
    problems.extend(_problems(vertices, edges, triangles))
    if problems:
        raise ValidationError(problems)
    return Complex2(tuple(vertices), tuple(edges), tuple(triangles))


@dataclass(frozen=True, eq=False)
class Subcomplex(_Cells):
    """A face-closed subset of the simplices of ``parent``."""

    parent: Complex2
    vertices: tuple[int, ...] = ()
    edges: tuple[Edge, ...] = ()
    triangles: tuple[Triangle, ...] = ()

    def __post_init__(self):
        vs = tuple(sorted({int(v) for v in self.vertices}))
        es = tuple(sorted({tuple(sorted(e)) for e in self.edges}))
        ts = tuple(sorted({tuple(sorted(t)) for t in self.triangles}))
        p = self.parent
        for s in vs + es + ts:
            if not p.contains(s):
                raise UnknownSimplex(f"{s} is not a simplex of the parent complex")
        problems = [d for d in _problems(vs, es, ts) if isinstance(d, MissingFace)]
        if problems:
            raise ValidationError(problems)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)
        object.__setattr__(self, "triangles", ts)

    def __eq__(self, other):
        if not isinstance(other, Subcomplex):
            return NotImplemented
        return self.parent == other.parent and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __le__(self, other: "Subcomplex") -> bool:
        _same_parent(self, other)
        return (
            self.vertex_set <= other.vertex_set
            and self.edge_set <= other.edge_set
            and self.triangle_set <= other.triangle_set
        )

    def as_complex(self) -> Complex2:
        return Complex2(self.vertices, self.edges, self.triangles)

    @property
    def root(self) -> Complex2:
        return self.parent

    def __repr__(self):
        return f"Subcomplex(V={list(self.vertices)}, E={list(self.edges)}, T={list(self.triangles)})"


def _same_parent(a: Subcomplex, b: Subcomplex) -> None:
    if a.parent is not b.parent and a.parent != b.parent:
        raise ParentMismatch("subcomplexes belong to different parent complexes")


def as_subcomplex(x) -> Subcomplex:
    if isinstance(x, Subcomplex):
        return x
    if isinstance(x, Complex2):
        return x.full()
    raise TypeError(f"expected Complex2 or Subcomplex, got {type(x).__name__}")


def closure(parent: Complex2, seeds: Iterable) -> Subcomplex:
    """Smallest subcomplex of ``parent`` containing every seed simplex."""
    vs: set[int] = set()
    es: set[Edge] = set()
    ts: set[Triangle] = set()
    for seed in seeds:
        s = _as_simplex(seed)
        if not parent.contains(s):
            raise UnknownSimplex(f"{s} is not a simplex of the parent complex")
        if len(s) == 3:
            ts.add(s)
            es.update(edges_of(s))
        elif len(s) == 2:
            es.add(s)
        vs.update(s)
    for e in es:
        vs.update(e)
    return Subcomplex(parent, tuple(vs), tuple(es), tuple(ts))


def intersect(a: Subcomplex, b: Subcomplex) -> Subcomplex:
    _same_parent(a, b)
    return Subcomplex(
        a.parent,
        tuple(a.vertex_set & b.vertex_set),
        tuple(a.edge_set & b.edge_set),
        tuple(a.triangle_set & b.triangle_set),
    )


def union(a: Subcomplex, b: Subcomplex) -> Subcomplex:
    _same_parent(a, b)
    return Subcomplex(
        a.parent,
        tuple(a.vertex_set | b.vertex_set),
        tuple(a.edge_set | b.edge_set),
        tuple(a.triangle_set | b.triangle_set),
    )


@dataclass(frozen=True)
class CombinatorialLink:
    """Nodes are the far ends of edges at ``center``; arcs are triangle corners."""

    center: int
    nodes: tuple[int, ...]
    arcs: tuple[tuple[int, int], ...]


def star_and_link(c, v: int) -> tuple[Subcomplex, CombinatorialLink]:
    if v not in c.vertex_set:
        raise UnknownVertex(v)
    parent = c.root
    seeds: list = [v]
    seeds += [e for e in c.edges if v in e]
    seeds += [t for t in c.triangles if v in t]
    star = closure(parent, seeds)
    nodes = c.neighbors[v]
    arcs = tuple(tuple(x for x in t if x != v) for t in c.triangles if v in t)
    return star, CombinatorialLink(v, nodes, arcs)


@dataclass(frozen=True)
class ComponentDecomposition:
    components: tuple[Subcomplex, ...]
    basepoints: tuple[int, ...]

    def __len__(self):
        return len(self.components)

    def component_of(self, v: int) -> Subcomplex:
        for comp in self.components:
            if v in comp.vertex_set:
                return comp
        raise UnknownVertex(v)


def vertex_components(c) -> list[list[int]]:
    """Vertex classes under edge connectivity, each sorted, ordered by minimum."""
    seen: set[int] = set()
    out = []
    nbrs = c.neighbors
    for v in c.vertices:
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in nbrs[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def induced(parent: Complex2, within, vertex_subset) -> Subcomplex:
    """All simplices of ``within`` whose vertices lie in ``vertex_subset``."""
    keep = set(vertex_subset)
    return Subcomplex(
        parent,
        tuple(v for v in within.vertices if v in keep),
        tuple(e for e in within.edges if e[0] in keep and e[1] in keep),
        tuple(t for t in within.triangles if keep.issuperset(t)),
    )


def connected_components(s) -> ComponentDecomposition:
    classes = vertex_components(s)
    comps = tuple(induced(s.root, s, verts) for verts in classes)
    return ComponentDecomposition(comps, tuple(vs[0] for vs in classes))


def is_connected(s) -> bool:
    return len(vertex_components(s)) == 1


def edge_distances(c, v: int) -> dict[int, int]:
    dist = {v: 0}
    queue = deque([v])
    nbrs = c.neighbors
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def combinatorial_ball(c, v: int, r: int) -> Subcomplex:
    """Every simplex of ``c`` all of whose vertices are within ``r`` edges of ``v``."""
    if v not in c.vertex_set:
        raise UnknownVertex(v)
    if r < 0:
        raise ValueError("radius must be non-negative")
    dist = edge_distances(c, v)
    return induced(c.root, c, [u for u, d in dist.items() if d <= r])


def relabel(c: Complex2, mapping: Mapping[int, int]) -> Complex2:
    return Complex2(
        tuple(mapping[v] for v in c.vertices),
        tuple(tuple(mapping[x] for x in e) for e in c.edges),
        tuple(tuple(mapping[x] for x in t) for t in c.triangles),
    )


def faces(simplex: tuple[int, ...]) -> list[tuple[int, ...]]:
    return [f for k in range(1, len(simplex)) for f in combinations(simplex, k)]
