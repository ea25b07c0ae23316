"""Brute-force reference computations used to cross-check the pipeline on small graphs."""
from __future__ import annotations

from collections import deque
from itertools import combinations

import numpy as np

from .errors import SizeGuardError
from .graph import Graph

EXACT_PATHWIDTH_LIMIT = 20
SUBDIVISION_LIMIT = 64
MENGER_LIMIT = 20


def exact_pathwidth(g: Graph) -> int:
    """Pathwidth as vertex separation number, by dynamic programming over vertex subsets.

    ``f(S) = max(|boundary(S)|, min_{v in S} f(S - v))`` where ``boundary(S)`` are
    the vertices of ``S`` with a neighbor outside ``S``; the answer is ``f(V)``.
    """
    n = g.n
    if n > EXACT_PATHWIDTH_LIMIT:
        raise SizeGuardError(f"exact pathwidth needs n <= {EXACT_PATHWIDTH_LIMIT}, got {n}; use bounds only")
    if n <= 1:
        return 0
    full = (1 << n) - 1
    masks = np.arange(1 << n, dtype=np.uint32)
    boundary = np.zeros(1 << n, dtype=np.int8)
    for v in range(n):
        nb = 0
        for w in g.adj[v]:
            nb |= 1 << w
        inside = (masks >> v) & 1
        outside_nb = (nb & ~masks & full) != 0
        boundary += (inside.astype(bool) & outside_nb).astype(np.int8)
    popcount = np.zeros(1 << n, dtype=np.int8)
    for v in range(n):
        popcount += ((masks >> v) & 1).astype(np.int8)
    f = np.full(1 << n, 127, dtype=np.int8)
    f[0] = 0
    for k in range(1, n + 1):
        layer = masks[popcount == k]
        best = np.full(layer.shape, 127, dtype=np.int8)
        for v in range(n):
            bit = np.uint32(1 << v)
            has = (layer & bit) != 0
            sub = layer[has] ^ bit
            best[has] = np.minimum(best[has], f[sub])
        f[layer] = np.maximum(best, boundary[layer])
    return int(f[full])


def vertex_disjoint_paths(g: Graph, s: int, t: int, limit: int | None = None, skip_edge: bool = False,
                          allowed=None) -> list[list[int]]:
    """Internally vertex-disjoint s-t paths by unit-capacity augmenting paths on the split graph.

    ``skip_edge`` ignores the direct edge ``st``; ``allowed`` restricts the vertex set.
    Stops once ``limit`` paths are found.
    """
    # node 2v is v_in, 2v+1 is v_out; arcs carry unit capacity
    n = g.n
    ok = (lambda v: True) if allowed is None else (lambda v: v in allowed)
    cap: dict = {}
    adj: list[list[int]] = [[] for _ in range(2 * n)]

    def arc(a, b):
        if (a, b) not in cap:
            cap[(a, b)] = 0
            cap.setdefault((b, a), 0)
            adj[a].append(b)
            adj[b].append(a)
        cap[(a, b)] += 1

    for v in range(n):
        if ok(v):
            arc(2 * v, 2 * v + 1)
    for u, v in g.edges:
        if not (ok(u) and ok(v)):
            continue
        if skip_edge and {u, v} == {s, t}:
            continue
        arc(2 * u + 1, 2 * v)
        arc(2 * v + 1, 2 * u)
    src, dst = 2 * s + 1, 2 * t
    flow = 0
    while limit is None or flow < limit:
        prev = {src: None}
        queue = deque([src])
        while queue and dst not in prev:
            a = queue.popleft()
            for b in adj[a]:
                if b not in prev and cap[(a, b)] > 0:
                    prev[b] = a
                    queue.append(b)
        if dst not in prev:
            break
        b = dst
        while prev[b] is not None:
            a = prev[b]
            cap[(a, b)] -= 1
            cap[(b, a)] += 1
            b = a
        flow += 1
    # an arc u_out -> v_in carries flow when its capacity is used up
    out_arcs: dict[int, list[int]] = {}
    for u, v in g.edges:
        for a, b in ((u, v), (v, u)):
            key = (2 * a + 1, 2 * b)
            if key in cap and cap[key] == 0:
                out_arcs.setdefault(a, []).append(b)
    paths = []
    for first in list(out_arcs.get(s, [])):
        path = [s, first]
        while path[-1] != t:
            nxt = out_arcs[path[-1]].pop()
            path.append(nxt)
        paths.append(path)
    return paths


def _k4_subgraph(g: Graph):
    for a in range(g.n):
        na = [w for w in g.adj[a] if w > a]
        for b, c, d in combinations(na, 3):
            if g.has_edge(b, c) and g.has_edge(b, d) and g.has_edge(c, d):
                return (a, b, c, d)
    return None


def forbidden_subdivision_search(g: Graph):
    """Find a K4 or K2,3 subdivision, or return None when there is none.

    A K4 subdivision with a subdivided edge contains a K2,3 subdivision, so it is
    enough to look for K4 as a subgraph and otherwise for two branch vertices
    joined by three internally disjoint paths of length at least two.
    """
    if g.n > SUBDIVISION_LIMIT:
        raise SizeGuardError(f"subdivision search needs n <= {SUBDIVISION_LIMIT}, got {g.n}")
    k4 = _k4_subgraph(g)
    if k4 is not None:
        return {"kind": "K4", "branch": list(k4), "paths": [[a, b] for a, b in combinations(k4, 2)]}
    heavy = [v for v in range(g.n) if g.degree(v) >= 3]
    for a, b in combinations(heavy, 2):
        paths = vertex_disjoint_paths(g, a, b, limit=3, skip_edge=True)
        if len(paths) >= 3:
            mids = [p[1] for p in paths]
            return {"kind": "K2,3", "branch": [a, b], "middle": mids, "paths": paths}
    return None


def menger_consecutive(g: Graph, block_vertices, u: int, v: int) -> int:
    """Maximum number of internally disjoint u-v paths inside one block."""
    if len(block_vertices) > MENGER_LIMIT:
        raise SizeGuardError(f"menger check needs block size <= {MENGER_LIMIT}, got {len(block_vertices)}")
    allowed = set(block_vertices)
    direct = 1 if g.has_edge(u, v) else 0
    return direct + len(vertex_disjoint_paths(g, u, v, skip_edge=True, allowed=allowed))


def check_subdivision_witness(g: Graph, witness) -> bool:
    """Check that the witness paths are graph paths, internally disjoint, with the right shape."""
    paths = witness["paths"]
    if witness["kind"] == "K4":
        if len(paths) != 6:
            return False
    elif len(paths) != 3 or any(len(p) < 3 for p in paths):
        return False
    inner = []
    branch = set(witness["branch"])
    for p in paths:
        for a, b in zip(p, p[1:]):
            if not g.has_edge(a, b):
                return False
        if p[0] not in branch or p[-1] not in branch:
            return False
        inner.extend(p[1:-1])
    return len(inner) == len(set(inner)) and not (set(inner) & branch)
