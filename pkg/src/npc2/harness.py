"""Builtin complexes and the exhaustive strong pi_1-injectivity scanner.

A subcomplex ``Y`` is strongly pi_1-injective when every component of
``Y & Z`` injects on pi_1 into ``Z``, for every subcomplex ``Z``.  The
scanner checks this pair by pair over enumerated candidates.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from npc2.complex import Complex2, Subcomplex, closure, intersect, is_connected
from npc2.groups import stallings_fold
from npc2.metric import MetricAssignment
from npc2.pi1 import Pi1Cache, induced_map_injectivity, verify_witness
from npc2.verdict import Budget, TriVerdict, Verdict


class UnknownGenerator(ValueError):
    pass


class BadParams(ValueError):
    pass


def _grid_triangles(n: int, wrap: bool) -> list[tuple[int, int, int]]:
    span = n if wrap else n - 1

    def vid(i, j):
        return (i % n) * n + (j % n)

    tris = []
    for i in range(span):
        for j in range(span):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)
            tris.append((a, b, d))
            tris.append((a, c, d))
    return tris


def _grid_metric(c: Complex2, n: int) -> MetricAssignment:
    # legs along rows and columns have length 1, the diagonals sqrt(2)
    lengths = {}
    for a, b in c.edges:
        di = (b // n - a // n) % n
        dj = (b % n - a % n) % n
        lengths[(a, b)] = math.sqrt(2.0) if di and dj else 1.0
    return MetricAssignment.for_complex(c, lengths)


def generate(name: str, n: int | None = None, k: int | None = None,
             metric: str = "natural") -> tuple[Complex2, MetricAssignment]:
    """Builtin complexes: ``triangle``, ``disk_grid(n)``, ``octahedron``,
    ``torus_grid(n)``, ``cone(k)`` and ``path(k)``.

    Grids have ``n x n`` vertices, numbered ``row * n + col``, with every
    square cut along the same diagonal.  The natural metric makes grids
    flat (unit legs, diagonals of length ``sqrt 2``) and everything else
    equilateral; ``metric="unit"`` forces all lengths to 1.
    """
    if metric not in ("natural", "unit"):
        raise BadParams(f"unknown metric {metric!r}")
    grid = False
    if name == "triangle":
        c = Complex2.from_triangles([(0, 1, 2)])
    elif name == "octahedron":
        tris = [(0, i, i % 4 + 1) for i in range(1, 5)] + [(5, i, i % 4 + 1) for i in range(1, 5)]
        c = Complex2.from_triangles(tris)
    elif name == "disk_grid":
        if n is None or n < 1:
            raise BadParams("disk_grid needs n >= 1")
        c = Complex2.from_triangles(_grid_triangles(n, False), vertices=range(n * n))
        grid = True
    elif name == "torus_grid":
        if n is None or n < 3:
            raise BadParams("torus_grid needs n >= 3 to be simplicial")
        c = Complex2.from_triangles(_grid_triangles(n, True))
        grid = True
    elif name == "cone":
        if k is None or k < 3:
            raise BadParams("cone needs k >= 3")
        c = Complex2.from_triangles([(0, i, i % k + 1) for i in range(1, k + 1)])
    elif name == "path":
        if k is None or k < 0:
            raise BadParams("path needs k >= 0")
        c = Complex2.from_triangles([], edges=[(i, i + 1) for i in range(k)], vertices=[0])
    else:
        raise UnknownGenerator(name)
    if grid and metric == "natural":
        return c, _grid_metric(c, n)
    return c, MetricAssignment.unit(c)


GENERATORS = ("triangle", "disk_grid", "octahedron", "torus_grid", "cone", "path")


def octahedron_parts(c: Complex2) -> dict[str, Subcomplex]:
    """Closed upper and lower disks of the builtin octahedron and their equator."""
    upper = closure(c, [t for t in c.triangles if 0 in t])
    lower = closure(c, [t for t in c.triangles if 5 in t])
    return {"upper": upper, "lower": lower, "equator": intersect(upper, lower)}


# --- enumeration --------------------------------------------------------------


def subcomplex_order(s: Subcomplex) -> tuple:
    return (s.size, s.vertices, s.edges, s.triangles)


def enumerate_subcomplexes(
    c: Complex2,
    cap: int | None = None,
    connected: bool = False,
    predicate: Callable[[Subcomplex], bool] | None = None,
) -> Iterator[Subcomplex]:
    """Every nonempty face-closed subcomplex with at most ``cap`` simplices.

    Yields in canonical order (size, then simplices), without duplicates.
    """
    cap = c.size if cap is None else cap
    if cap <= 0:
        return iter(())
    found: list[Subcomplex] = []
    tris, edges, verts = c.triangles, c.edges, c.vertices

    def pick_vertices(ts, es, vs):
        base = len(ts) + len(es) + len(vs)
        free = [v for v in verts if v not in vs]
        room = cap - base

        def rec(i, chosen):
            if i == len(free):
                if base + len(chosen):
                    found.append(Subcomplex(c, tuple(vs) + tuple(chosen), tuple(es), tuple(ts)))
                return
            rec(i + 1, chosen)
            if len(chosen) < room:
                chosen.append(free[i])
                rec(i + 1, chosen)
                chosen.pop()

        rec(0, [])

    def pick_edges(ts, forced_e):
        forced_v = {v for e in forced_e for v in e}
        free = [e for e in edges if e not in forced_e]

        def rec(i, es, vs):
            if len(ts) + len(es) + len(vs) > cap:
                return
            if i == len(free):
                pick_vertices(ts, sorted(es), vs)
                return
            rec(i + 1, es, vs)
            e = free[i]
            new_v = {v for v in e if v not in vs}
            if len(ts) + len(es) + 1 + len(vs) + len(new_v) <= cap:
                rec(i + 1, es | {e}, vs | new_v)

        rec(0, set(forced_e), set(forced_v))

    def pick_triangles(i, ts, forced_e):
        if i == len(tris):
            pick_edges(ts, forced_e)
            return
        pick_triangles(i + 1, ts, forced_e)
        t = tris[i]
        a, b, cc = t
        new_e = forced_e | {(a, b), (a, cc), (b, cc)}
        nv = len({v for e in new_e for v in e})
        if len(ts) + 1 + len(new_e) + nv <= cap:
            pick_triangles(i + 1, ts + [t], new_e)

    pick_triangles(0, [], frozenset())
    found.sort(key=subcomplex_order)
    out = (s for s in found if (not connected or is_connected(s)) and (predicate is None or predicate(s)))
    return out


# --- scanning -----------------------------------------------------------------


@dataclass
class ScanConfig:
    max_y_size: int | None = None
    max_z_size: int | None = None
    budget: Budget = field(default_factory=Budget)
    require_y_pi1_injective: bool = True
    connected_only: bool = True
    y_candidates: Sequence[Subcomplex] | None = None
    z_candidates: Sequence[Subcomplex] | None = None
    workers: int = 1

    def __post_init__(self):
        for cap in (self.max_y_size, self.max_z_size):
            if cap is not None and cap < 0:
                raise BadParams("caps must be non-negative")
        if self.workers < 1:
            raise BadParams("workers must be positive")


@dataclass
class Violation:
    y: Subcomplex
    z: Subcomplex
    verdict: TriVerdict

    @property
    def loop(self) -> list[int]:
        """Witness loop; empty when the NO rests on a rank-drop certificate alone."""
        return (self.verdict.witness or {}).get("loop", [])

    @property
    def component_key(self):
        verts, edges, tris = self.verdict.certificate["component"]
        return tuple(verts), tuple(map(tuple, edges)), tuple(map(tuple, tris))


@dataclass
class Inconclusive:
    y: Subcomplex
    z: Subcomplex
    verdict: TriVerdict


@dataclass
class ScanReport:
    pairs_tested: int = 0
    violations: list[Violation] = field(default_factory=list)
    unknowns: list[Inconclusive] = field(default_factory=list)
    y_candidates: int = 0
    z_candidates: int = 0
    y_not_injective: int = 0
    y_skipped_unknown: int = 0
    max_y_size: int | None = None
    max_z_size: int | None = None
    budget: Budget = field(default_factory=Budget)

    @property
    def verdict(self) -> str:
        if self.violations:
            return "VIOLATION"
        if self.unknowns:
            return "INCONCLUSIVE"
        return "CLEAN"

    @property
    def violation_classes(self) -> list[tuple]:
        """Distinct intersection components that failed to inject."""
        return sorted({v.component_key for v in self.violations})


def _is_pi1_injective(y: Subcomplex, whole: Subcomplex, budget, cache) -> Verdict:
    verdicts = induced_map_injectivity(y, whole, budget, cache)
    if any(v.no for v in verdicts):
        return Verdict.NO
    if all(v.yes for v in verdicts):
        return Verdict.YES
    return Verdict.UNKNOWN


def strong_injectivity_scan(c: Complex2, cfg: ScanConfig | None = None) -> ScanReport:
    cfg = cfg or ScanConfig()
    budget = cfg.budget
    whole = c.full()
    if cfg.y_candidates is not None:
        ys = list(cfg.y_candidates)
    else:
        ys = list(enumerate_subcomplexes(c, cfg.max_y_size, cfg.connected_only))
    if cfg.z_candidates is not None:
        zs = list(cfg.z_candidates)
    else:
        zs = list(enumerate_subcomplexes(c, cfg.max_z_size, cfg.connected_only))
    report = ScanReport(y_candidates=len(ys), z_candidates=len(zs), max_y_size=cfg.max_y_size,
                        max_z_size=cfg.max_z_size, budget=budget)
    cache = Pi1Cache()
    pair_memo: dict[tuple, list[TriVerdict]] = {}

    def admit(y):
        if not cfg.require_y_pi1_injective:
            return Verdict.YES
        return _is_pi1_injective(y, whole, budget, cache)

    def scan_y(y):
        tested, bad, unknown = 0, [], []
        for z in zs:
            w = intersect(y, z)
            tested += 1
            if w.is_empty:
                continue
            key = (w.key(), z.key())
            verdicts = pair_memo.get(key)
            if verdicts is None:
                verdicts = induced_map_injectivity(w, z, budget, cache)
                pair_memo[key] = verdicts
            for v in verdicts:
                if v.no:
                    bad.append(Violation(y, z, v))
                elif v.unknown:
                    unknown.append(Inconclusive(y, z, v))
        return tested, bad, unknown

    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            admissions = list(pool.map(admit, ys))
    else:
        admissions = [admit(y) for y in ys]
    admitted = []
    for y, a in zip(ys, admissions):
        if a is Verdict.YES:
            admitted.append(y)
        elif a is Verdict.NO:
            report.y_not_injective += 1
        else:
            report.y_skipped_unknown += 1

    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(scan_y, admitted))
    else:
        results = [scan_y(y) for y in admitted]
    for tested, bad, unknown in results:
        report.pairs_tested += tested
        report.violations.extend(bad)
        report.unknowns.extend(unknown)
    return report


def verify_violation(v: Violation, budget: Budget | None = None) -> bool:
    """Replay a violation's witness loop independently of the scan.

    Without a loop, refold the recorded free images and check the rank drop.
    """
    if v.loop:
        return verify_witness(intersect(v.y, v.z), v.z, v.loop, budget)
    cert = v.verdict.certificate
    if cert.get("method") != "stallings-rank":
        return False
    images = [tuple(w) for w in cert["images"]]
    return stallings_fold(images).rank < cert["source_rank"] == len(images)
