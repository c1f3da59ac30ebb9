"""Piecewise-Euclidean metrics, vertex links and the link condition.

Each triangle is a flat Euclidean triangle with the given side lengths.
The link of a vertex is a metric graph: one node per incident edge and one
arc per incident triangle, weighted by the triangle's corner angle.  A
2-complex is nonpositively curved exactly when no link contains an
injective loop shorter than ``2*pi``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

from npc2.complex import Edge, Triangle, UnknownVertex, edges_of, is_connected
from npc2.verdict import Budget, TriVerdict, Verdict

TWO_PI = 2.0 * math.pi
#: triangle-inequality slack below this is an error
DEGENERACY = 1e-12
DEFAULT_TOL = 1e-9


class DegenerateTriangle(ValueError):
    pass


def corner_angle(a: float, b: float, c: float) -> float:
    """Angle between sides ``b`` and ``c``, i.e. opposite side ``a``."""
    if min(a, b, c) <= 0:
        raise DegenerateTriangle(f"non-positive side in ({a}, {b}, {c})")
    if b + c - a < DEGENERACY or a + c - b < DEGENERACY or a + b - c < DEGENERACY:
        raise DegenerateTriangle(f"triangle inequality fails for ({a}, {b}, {c})")
    cos = (b * b + c * c - a * a) / (2.0 * b * c)
    return math.acos(max(-1.0, min(1.0, cos)))


@dataclass(frozen=True)
class MetricAssignment:
    lengths: Mapping[Edge, float]
    is_default: bool = False

    @classmethod
    def for_complex(cls, c, lengths: Mapping | None = None) -> "MetricAssignment":
        """Lengths for every edge of ``c``; missing edges get length 1."""
        given = {tuple(sorted(e)): float(x) for e, x in (lengths or {}).items()}
        unknown = set(given) - set(c.edge_set)
        if unknown:
            raise ValueError(f"lengths given for edges not in the complex: {sorted(unknown)}")
        full = {e: given.get(e, 1.0) for e in c.edges}
        for e, x in full.items():
            if not (x > 0 and math.isfinite(x)):
                raise ValueError(f"edge {e} has non-positive length {x}")
        m = cls(full, is_default=not given)
        for t in c.triangles:
            m.triangle_angles(t)
        return m

    @classmethod
    def unit(cls, c) -> "MetricAssignment":
        return cls.for_complex(c)

    def __getitem__(self, e: Edge) -> float:
        return self.lengths[tuple(sorted(e))]

    def scaled(self, factor: float) -> "MetricAssignment":
        return MetricAssignment({e: x * factor for e, x in self.lengths.items()}, self.is_default)

    def triangle_angles(self, t: Triangle) -> dict[int, float]:
        """Corner angle at each vertex of ``t``."""
        a, b, c = t
        ab, ac, bc = (self[e] for e in edges_of(t))
        return {
            a: corner_angle(bc, ab, ac),
            b: corner_angle(ac, ab, bc),
            c: corner_angle(ab, ac, bc),
        }


class Arc(NamedTuple):
    u: int
    w: int
    weight: float
    triangle: Triangle | None = None


@dataclass(frozen=True)
class LinkGraph:
    center: int | None
    nodes: tuple[int, ...]
    arcs: tuple[Arc, ...]


def build_link(c, m: MetricAssignment, v: int) -> LinkGraph:
    if v not in c.vertex_set:
        raise UnknownVertex(v)
    arcs = []
    for t in c.triangles:
        if v in t:
            u, w = (x for x in t if x != v)
            arcs.append(Arc(u, w, m.triangle_angles(t)[v], t))
    return LinkGraph(v, c.neighbors[v], tuple(arcs))


def shortest_cycle(nodes, arcs) -> tuple[float, list[int]]:
    """Girth of a weighted multigraph and one cycle achieving it.

    For every arc ``(u, w)`` the shortest cycle through it is the arc plus
    the shortest ``u``-``w`` path avoiding it; the minimum over arcs is the
    girth.  The cycle is returned closed (first node repeated at the end);
    ``(inf, [])`` on a forest.
    """
    adj: dict[int, list[tuple[int, float, int]]] = {n: [] for n in nodes}
    for i, arc in enumerate(arcs):
        adj[arc[0]].append((arc[1], arc[2], i))
        adj[arc[1]].append((arc[0], arc[2], i))
    best, best_cycle = math.inf, []
    for i, arc in enumerate(arcs):
        u, w, weight = arc[0], arc[1], arc[2]
        if weight >= best:
            continue
        dist = {u: 0.0}
        prev: dict[int, int] = {}
        heap = [(0.0, u)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > dist[x]:
                continue
            if x == w or d + weight >= best:
                break
            for y, wt, j in adj[x]:
                if j == i:
                    continue
                nd = d + wt
                if nd < dist.get(y, math.inf):
                    dist[y] = nd
                    prev[y] = x
                    heapq.heappush(heap, (nd, y))
        if w in dist and dist[w] + weight < best:
            best = dist[w] + weight
            path = [w]
            while path[-1] != u:
                path.append(prev[path[-1]])
            best_cycle = path[::-1] + [u]
    return best, best_cycle


def systole(g: LinkGraph) -> float:
    return shortest_cycle(g.nodes, g.arcs)[0]


PASS, FAIL, MARGINAL = "PASS", "FAIL", "MARGINAL"


def classify(value: float, tol: float) -> str:
    if abs(value - TWO_PI) <= tol:
        return MARGINAL
    return FAIL if value < TWO_PI - tol else PASS


@dataclass
class CurvatureReport:
    systoles: dict[int, float]
    verdicts: dict[int, str]
    cycles: dict[int, list[int]]
    tol: float
    assume_flat_ok: bool = False
    default_metric: bool = False

    @property
    def failing(self) -> list[int]:
        return [v for v, s in self.verdicts.items() if s == FAIL]

    @property
    def marginal(self) -> list[int]:
        return [v for v, s in self.verdicts.items() if s == MARGINAL]

    @property
    def nonpositively_curved(self) -> bool:
        if self.failing:
            return False
        return self.assume_flat_ok or not self.marginal

    @property
    def inconclusive(self) -> bool:
        return not self.failing and bool(self.marginal) and not self.assume_flat_ok


def check_link_condition(
    c, m: MetricAssignment | None = None, tol: float = DEFAULT_TOL, assume_flat_ok: bool = False
) -> CurvatureReport:
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    m = MetricAssignment.unit(c) if m is None else m
    systoles, verdicts, cycles = {}, {}, {}
    for v in c.vertices:
        link = build_link(c, m, v)
        length, cycle = shortest_cycle(link.nodes, link.arcs)
        systoles[v] = length
        verdicts[v] = classify(length, tol)
        cycles[v] = cycle
    return CurvatureReport(systoles, verdicts, cycles, tol, assume_flat_ok, m.is_default)


def is_cat0(
    c,
    m: MetricAssignment | None = None,
    budget: Budget | None = None,
    tol: float = DEFAULT_TOL,
    assume_flat_ok: bool = False,
) -> TriVerdict:
    """CAT(0) for a finite connected 2-complex: link condition plus simple connectivity."""
    from npc2.pi1 import fundamental_group
    from npc2.groups import is_trivial_group

    if not is_connected(c):
        raise ValueError("is_cat0 needs a connected complex")
    budget = budget or Budget()
    report = check_link_condition(c, m, tol, assume_flat_ok)
    info = {"tol": tol, "assume_flat_ok": assume_flat_ok, "default_metric": report.default_metric}
    if report.failing:
        v = report.failing[0]
        return TriVerdict(
            Verdict.NO,
            witness={"kind": "short-link-loop", "vertex": v, "systole": report.systoles[v],
                     "cycle": report.cycles[v]},
            certificate={"failing_vertices": report.failing, **info},
        )
    group = is_trivial_group(fundamental_group(c), budget)
    if group.no:
        return TriVerdict(Verdict.NO, witness={"kind": "nontrivial-pi1", **group.certificate},
                          certificate=info, budget_spent=group.budget_spent)
    if report.inconclusive:
        return TriVerdict(Verdict.UNKNOWN, certificate={"marginal_vertices": report.marginal, **info},
                          budget_spent=group.budget_spent)
    if group.yes:
        return TriVerdict(Verdict.YES, certificate={"link_condition": "holds", "pi1": group.certificate,
                                                   **info}, budget_spent=group.budget_spent)
    return TriVerdict(Verdict.UNKNOWN, certificate={"pi1": "undecided", **info},
                      budget_spent=group.budget_spent)
