"""Elementary collapses and extensions, and a collapsibility search.

The search only collapses: extensions are available as moves but would
make the search space unbounded.
"""

from __future__ import annotations

from dataclasses import dataclass

from npc2.complex import Complex2, edges_of, is_connected
from npc2.homology import homology
from npc2.verdict import Budget, TriVerdict, Verdict

TRIANGLE_COLLAPSE = "TriangleCollapse"
TRIANGLE_EXTENSION = "TriangleExtension"
EDGE_COLLAPSE = "EdgeCollapse"
EDGE_EXTENSION = "EdgeExtension"
KINDS = (TRIANGLE_COLLAPSE, TRIANGLE_EXTENSION, EDGE_COLLAPSE, EDGE_EXTENSION)


class NotFree(ValueError):
    pass


class InvalidGluing(ValueError):
    pass


@dataclass(frozen=True)
class Move:
    """``TriangleCollapse(edge, triangle)``, ``EdgeCollapse(vertex, edge)``,
    ``TriangleExtension(edge, edge)`` or ``EdgeExtension(vertex, new_vertex)``."""

    kind: str
    operands: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown move kind {self.kind!r}")
        ops = tuple(op if isinstance(op, int) else tuple(sorted(op)) for op in self.operands)
        object.__setattr__(self, "operands", ops)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "operands": [op if isinstance(op, int) else list(op)
                                                for op in self.operands]}

    @classmethod
    def from_dict(cls, d) -> "Move":
        return cls(d["kind"], tuple(op if isinstance(op, int) else tuple(op) for op in d["operands"]))


@dataclass(frozen=True)
class CollapseCertificate:
    moves: tuple[Move, ...]
    terminal: int


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    failed_at: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def free_pairs(c) -> list[tuple]:
    """``(edge, triangle)`` and ``(vertex, edge)`` pairs with a free face."""
    pairs: list[tuple] = []
    cof = c.edge_cofaces
    for e in c.edges:
        if len(cof[e]) == 1:
            pairs.append((e, cof[e][0]))
    in_triangle = {v for t in c.triangles for v in t}
    for v in c.vertices:
        nb = c.neighbors[v]
        if len(nb) == 1 and v not in in_triangle:
            pairs.append((v, tuple(sorted((v, nb[0])))))
    return pairs


def _collapse_move(pair) -> Move:
    face, coface = pair
    if isinstance(face, int):
        return Move(EDGE_COLLAPSE, (face, coface))
    return Move(TRIANGLE_COLLAPSE, (face, coface))


def apply_move(c: Complex2, m: Move) -> Complex2:
    vs, es, ts = set(c.vertices), set(c.edges), set(c.triangles)
    if m.kind == TRIANGLE_COLLAPSE:
        e, t = m.operands
        if t not in ts or e not in edges_of(t):
            raise NotFree(f"{e} is not an edge of a triangle {t} in the complex")
        if len(c.edge_cofaces[e]) != 1:
            raise NotFree(f"edge {e} lies in {len(c.edge_cofaces[e])} triangles")
        es.discard(e)
        ts.discard(t)
    elif m.kind == EDGE_COLLAPSE:
        v, e = m.operands
        if e not in es or v not in e:
            raise NotFree(f"{v} is not a vertex of an edge {e} in the complex")
        if len(c.neighbors[v]) != 1 or any(v in t for t in ts):
            raise NotFree(f"vertex {v} is not free")
        vs.discard(v)
        es.discard(e)
    elif m.kind == TRIANGLE_EXTENSION:
        e1, e2 = m.operands
        if e1 not in es or e2 not in es:
            raise InvalidGluing(f"gluing edges {e1}, {e2} must both exist")
        shared = set(e1) & set(e2)
        if len(shared) != 1:
            raise InvalidGluing(f"gluing edges {e1}, {e2} must share exactly one vertex")
        third = tuple(sorted(set(e1) ^ set(e2)))
        if third in es:
            raise InvalidGluing(f"free edge {third} of the new triangle already exists")
        es.add(third)
        ts.add(tuple(sorted(set(e1) | set(e2))))
    else:
        v, new = m.operands
        if v not in vs:
            raise InvalidGluing(f"vertex {v} is not in the complex")
        if new in vs:
            raise InvalidGluing(f"vertex {new} already exists")
        vs.add(new)
        es.add(tuple(sorted((v, new))))
    return Complex2(tuple(vs), tuple(es), tuple(ts))


def inverse_move(c: Complex2, m: Move) -> Move:
    """The move undoing ``m`` when applied to ``apply_move(c, m)``."""
    if m.kind == TRIANGLE_EXTENSION:
        e1, e2 = m.operands
        third = tuple(sorted(set(e1) ^ set(e2)))
        return Move(TRIANGLE_COLLAPSE, (third, tuple(sorted(set(e1) | set(e2)))))
    if m.kind == EDGE_EXTENSION:
        v, new = m.operands
        return Move(EDGE_COLLAPSE, (new, (v, new)))
    if m.kind == TRIANGLE_COLLAPSE:
        e, t = m.operands
        rest = [f for f in edges_of(t) if f != e]
        return Move(TRIANGLE_EXTENSION, tuple(rest))
    v, e = m.operands
    (u,) = [x for x in e if x != v]
    return Move(EDGE_EXTENSION, (u, v))


def _state_pairs(vs, es, ts):
    cof: dict = {}
    for t in ts:
        for e in edges_of(t):
            cof.setdefault(e, []).append(t)
    degree: dict = {}
    for a, b in es:
        degree.setdefault(a, []).append((a, b))
        degree.setdefault(b, []).append((a, b))
    in_tri = {v for t in ts for v in t}
    pairs = [(e, cof[e][0]) for e in sorted(es) if len(cof.get(e, ())) == 1]
    pairs += [(v, degree[v][0]) for v in sorted(vs) if len(degree.get(v, ())) == 1 and v not in in_tri]
    return pairs


def is_collapsible(c: Complex2, budget: Budget | None = None) -> TriVerdict:
    """Depth-first search for a sequence of collapses down to one vertex.

    Intermediate complexes are memoized; the budget counts how many distinct
    complexes were visited.
    """
    budget = budget or Budget()
    if not c.vertices:
        return TriVerdict(Verdict.NO, certificate={"method": "empty"})
    if not is_connected(c):
        return TriVerdict(Verdict.NO, certificate={"method": "disconnected"})
    h = homology(c)
    if h.betti != (1, 0, 0) or h.torsion[1]:
        # collapses preserve homology, so a point is unreachable
        return TriVerdict(Verdict.NO, certificate={"method": "homology", "betti": list(h.betti)})
    start = (frozenset(c.vertices), frozenset(c.edges), frozenset(c.triangles))
    visited = {start}
    stack = [(start, iter(_state_pairs(*start)))]
    path: list[Move] = []
    while stack:
        state, pairs = stack[-1]
        vs, es, ts = state
        if len(vs) == 1 and not es and not ts:
            (terminal,) = vs
            cert = CollapseCertificate(tuple(path), terminal)
            return TriVerdict(Verdict.YES, witness=cert, certificate={"moves": len(path)},
                              budget_spent={"search_nodes": len(visited)})
        pair = next(pairs, None)
        if pair is None:
            stack.pop()
            if path:
                path.pop()
            continue
        face, coface = pair
        if isinstance(face, int):
            nxt = (vs - {face}, es - {coface}, ts)
        else:
            nxt = (vs, es - {face}, ts - {coface})
        if nxt in visited:
            continue
        if len(visited) >= budget.search_nodes:
            return TriVerdict(Verdict.UNKNOWN, certificate={"reason": "search budget exhausted"},
                              budget_spent={"search_nodes": len(visited)})
        visited.add(nxt)
        path.append(_collapse_move(pair))
        stack.append((nxt, iter(_state_pairs(*nxt))))
    return TriVerdict(Verdict.NO, certificate={"method": "search-exhausted"},
                      budget_spent={"search_nodes": len(visited)})


def verify_certificate(c: Complex2, cert: CollapseCertificate) -> CertificateCheck:
    current = c
    for i, m in enumerate(cert.moves):
        try:
            current = apply_move(current, m)
        except (NotFree, InvalidGluing, ValueError) as exc:
            return CertificateCheck(False, i, str(exc))
    if current.vertices != (cert.terminal,) or current.edges or current.triangles:
        return CertificateCheck(False, len(cert.moves), f"ends at {current.counts()} simplices, not the terminal vertex")
    return CertificateCheck(True)
