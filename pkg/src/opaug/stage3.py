"""Bypass traversal that makes the serialized graph 2-vertex-connected."""
from __future__ import annotations

import dataclasses

from .decomposition import BagBuilder, PathDecomposition, Verdict, OK, gap_from_ranges, occurrence_ranges
from .errors import GraphValidationError
from .graph import Graph, RootedBlockTree


@dataclasses.dataclass(frozen=True)
class Stage3Result:
    g_double_prime: Graph
    pd_double_prime: PathDecomposition
    added_edges: tuple  # (u_i, v_i)
    bypass_seq: tuple  # per added edge, tuple of bypassed cut vertices
    encounter_order: tuple
    events: tuple  # (vertex, "bypass" | "complete") per encounter
    gaps: tuple  # GapResult per added edge
    start: int


def default_start(bt: RootedBlockTree) -> int:
    if bt.root < 0:
        return 0
    return min(v for v in bt.blocks[bt.root] if v not in bt.cut_vertices)


def _child_map(bt: RootedBlockTree) -> dict:
    """Cut vertex -> its unique child block; errors when a cut vertex has several."""
    child = {}
    for b in range(bt.block_count):
        x = bt.attach[b]
        if x >= 0:
            if x in child:
                raise GraphValidationError(f"cut vertex {x} has more than one child block")
            child[x] = b
    return child


def run_stage3(g: Graph, bt: RootedBlockTree, pd: PathDecomposition, start: int | None = None) -> Stage3Result:
    """Traverse blocks from a non-cut vertex of the root block, bypassing each cut vertex once.

    Each maximal run of freshly bypassed cut vertices yields one new edge between
    the vertices visited just before and just after the run.  Gaps are measured
    against the ranges of ``pd``.
    """
    n = g.n
    if n == 1:
        return Stage3Result(g, pd, (), (), (0,), ((0, "complete"),), (), 0)
    child = _child_map(bt)
    cut = bt.cut_vertices
    if start is None:
        start = default_start(bt)
    elif start in cut or start not in bt.blocks[bt.root]:
        raise GraphValidationError(f"start vertex {start} is not a non-cut vertex of the root block")
    succ = bt._succ
    parent = bt.parent
    first, last = occurrence_ranges(pd, n)
    builder = BagBuilder(pd)

    completed = bytearray(n)
    bypass = bytearray(n)
    events = [(start, "complete")]
    added = []
    seqs = []
    gaps = []
    B = bt.root
    completed[start] = 1
    count = 1
    v = start
    while count < n:
        vp = succ[B][v]
        taken = False
        seq = []
        while vp in cut and not bypass[vp]:
            events.append((vp, "bypass"))
            taken = True
            bypass[vp] = 1
            seq.append(vp)
            B = child[vp]
            vp = succ[B][vp]
        if taken:
            gp = gap_from_ranges(v, (first[v], last[v]), vp, (first[vp], last[vp]))
            builder.insert(gp)
            added.append((v, vp))
            seqs.append(tuple(seq))
            gaps.append(gp)
        if vp in cut and bypass[vp]:
            B = parent[B]
        if completed[vp]:
            raise GraphValidationError(f"vertex {vp} reached twice; input violates the two-component condition")
        events.append((vp, "complete"))
        completed[vp] = 1
        count += 1
        v = vp
    g2 = g.with_edges(added) if added else g
    return Stage3Result(
        g2, builder.freeze(), tuple(added), tuple(seqs), tuple(e[0] for e in events), tuple(events), tuple(gaps), start
    )


def order_oracle(g: Graph, bt: RootedBlockTree, v0: int) -> tuple:
    """Recursive encounter order: walk the block's cycle from ``v0``; at each cut
    vertex first emit the order of its child subgraph started at it, then the vertex."""
    if g.n == 1:
        return (0,)
    if v0 in bt.cut_vertices or v0 not in bt.blocks[bt.root]:
        raise GraphValidationError(f"{v0} is not a non-cut vertex of the root block")
    child = _child_map(bt)
    out = []

    def cycle_from(b, v):
        seq = []
        u = bt._succ[b][v]
        while u != v:
            seq.append(u)
            u = bt._succ[b][u]
        return seq

    out.append(v0)
    # frame: [cycle vertices after the block's start vertex, next index]
    stack = [[cycle_from(bt.root, v0), 0]]
    while stack:
        frame = stack[-1]
        seq, i = frame
        if i == len(seq):
            stack.pop()
            if stack:
                # the child order finished; emit the cut vertex it hangs from
                parent_frame = stack[-1]
                out.append(parent_frame[0][parent_frame[1] - 1])
            continue
        u = seq[i]
        frame[1] = i + 1
        if u in child:
            out.append(u)
            stack.append([cycle_from(child[u], u), 0])
        else:
            out.append(u)
    return tuple(out)


def encounter_audit(result: Stage3Result, oracle: tuple, bt: RootedBlockTree) -> Verdict:
    """Encounter order matches the oracle; cut vertices are met twice (bypass, then completion)."""
    if tuple(result.encounter_order) != tuple(oracle):
        return Verdict(False, "order", None, "encounter order differs from the recursive order")
    seen: dict = {}
    for v, kind in result.events:
        seen.setdefault(v, []).append(kind)
    for v in range(bt.n):
        kinds = seen.get(v, [])
        if v in bt.cut_vertices:
            if kinds != ["bypass", "complete"]:
                return Verdict(False, "cut-encounters", v, f"cut vertex {v} encountered as {kinds}")
        elif kinds != ["complete"]:
            return Verdict(False, "encounters", v, f"vertex {v} encountered as {kinds}")
    return OK


def bypass_partition(result: Stage3Result, cut_vertices) -> Verdict:
    """Bypass sequences are nonempty and partition the cut vertices."""
    seen = []
    for s in result.bypass_seq:
        if not s:
            return Verdict(False, "empty-sequence", None, "an added edge has no bypassed vertex")
        seen.extend(s)
    if len(seen) != len(set(seen)):
        return Verdict(False, "repeat", None, "a cut vertex is bypassed twice")
    if set(seen) != set(cut_vertices):
        return Verdict(False, "cover", sorted(set(cut_vertices) ^ set(seen)), "bypassed set differs from cut vertices")
    return OK


def bypass_paths_ok(g_prime: Graph, result: Stage3Result, bt: RootedBlockTree | None = None) -> Verdict:
    """Each added edge closes a path u, x1..xk, v of the input graph and was not present.

    With ``bt``, also checks that every vertex after ``x1`` on the path is the
    cycle successor of its predecessor in the child block at that predecessor.
    """
    child = _child_map(bt) if bt is not None else None
    us = set()
    for (u, v), seq in zip(result.added_edges, result.bypass_seq):
        if g_prime.has_edge(u, v):
            return Verdict(False, "existing-edge", (u, v), "added edge already present")
        if u in us:
            return Verdict(False, "repeated-source", u, "two added edges share their first endpoint")
        us.add(u)
        path = (u,) + tuple(seq) + (v,)
        for a, b in zip(path, path[1:]):
            if not g_prime.has_edge(a, b):
                return Verdict(False, "bypass-path", (a, b), f"bypass path of ({u}, {v}) uses non-edge")
        if child is not None:
            for a, b in zip(path[1:], path[2:]):
                if bt.next_in_block(child[a], a) != b:
                    return Verdict(False, "bypass-successor", (a, b), f"{b} does not follow {a} in its child block")
    return OK


def gap_growth_ok(pd_prime: PathDecomposition, pd2: PathDecomposition, result: Stage3Result) -> bool:
    """Bag t gains at most one vertex per bypass sequence meeting it, and at most doubles."""
    where = {}
    for i, s in enumerate(result.bypass_seq):
        for x in s:
            where[x] = i
    for before, after in zip(pd_prime.bags, pd2.bags):
        hits = {where[v] for v in before if v in where}
        if len(after) > len(before) + len(hits) or len(after) > 2 * len(before):
            return False
    return True

