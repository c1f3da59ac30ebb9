"""Brute-force reference computations, deliberately naive and independent
of the code paths they check."""

import itertools
import math
from collections import deque

from npc2.groups import reduce_word


def simple_cycle_lengths(nodes, arcs):
    """Lengths of all simple cycles, by trying every subset of arcs."""
    lengths = []
    m = len(arcs)
    for r in range(1, m + 1):
        for subset in itertools.combinations(range(m), r):
            deg = {}
            for i in subset:
                u, w = arcs[i][0], arcs[i][1]
                deg[u] = deg.get(u, 0) + 1
                deg[w] = deg.get(w, 0) + 1
            if any(d != 2 for d in deg.values()):
                continue
            # connected?
            adj = {v: [] for v in deg}
            for i in subset:
                u, w = arcs[i][0], arcs[i][1]
                adj[u].append(w)
                adj[w].append(u)
            start = next(iter(adj))
            seen, stack = {start}, [start]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) == len(adj):
                lengths.append(math.fsum(arcs[i][2] for i in subset))
    return lengths


def brute_girth(nodes, arcs):
    lengths = simple_cycle_lengths(nodes, arcs)
    return min(lengths) if lengths else math.inf


def bfs_distances(vertices, edges, source):
    adj = {v: set() for v in vertices}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def all_face_closed_subsets(c):
    """Every face-closed subset of simplices, via the full power set."""
    simplices = [(v,) for v in c.vertices] + list(c.edges) + list(c.triangles)
    out = []
    for mask in range(1 << len(simplices)):
        chosen = {simplices[i] for i in range(len(simplices)) if mask >> i & 1}
        ok = True
        for s in chosen:
            for k in range(1, len(s)):
                for f in itertools.combinations(s, k):
                    if f not in chosen:
                        ok = False
        if ok:
            out.append(chosen)
    return out


def subgroup_elements(gens, max_factors):
    """Freely reduced products of at most ``max_factors`` generators or inverses."""
    letters = [tuple(g) for g in gens] + [tuple(-x for x in reversed(g)) for g in gens]
    found = {()}
    frontier = {()}
    for _ in range(max_factors):
        nxt = set()
        for w in frontier:
            for g in letters:
                nxt.add(reduce_word(w + g))
        found |= nxt
        frontier = nxt
    return found


def greedy_collapse(c):
    """Collapse free faces in any order until stuck; returns remaining counts."""
    vs, es, ts = set(c.vertices), set(c.edges), set(c.triangles)
    changed = True
    while changed:
        changed = False
        for e in sorted(es):
            cof = [t for t in ts if e[0] in t and e[1] in t]
            if len(cof) == 1:
                es.discard(e)
                ts.discard(cof[0])
                changed = True
        for v in sorted(vs):
            inc = [e for e in es if v in e]
            if len(inc) == 1 and not any(v in t for t in ts) and len(vs) > 1:
                vs.discard(v)
                es.discard(inc[0])
                changed = True
    return len(vs), len(es), len(ts)
