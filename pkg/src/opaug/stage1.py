"""Width-3 nice tree decomposition and the nice path decomposition built from it.

The base tree decomposition uses the vertex-to-node bijection ``b(v) = v``: node
ids are vertex ids and every tree edge is an edge of the graph, so the
decomposition tree is a spanning tree of the input.
"""
from __future__ import annotations

import dataclasses
from bisect import bisect_left, bisect_right

from .decomposition import (
    PathDecomposition,
    TreeDecomposition,
    Verdict,
    OK,
    occurrence_ranges,
    validate_path_decomposition,
    validate_tree_decomposition,
)
from .errors import ConstructionError, DecompositionError, GraphValidationError
from .graph import Graph, RootedBlockTree


@dataclasses.dataclass(frozen=True)
class NiceTreeDecomposition:
    td: TreeDecomposition
    vertex_to_node: tuple
    propagated: dict  # non-root non-trivial block id -> propagated vertex

    @property
    def bags(self):
        return self.td.bags

    @property
    def width(self) -> int:
        return self.td.width

    def tree(self) -> Graph:
        return Graph.from_edges(len(self.td.bags), self.td.tree_edges)


@dataclasses.dataclass(frozen=True)
class NicePathDecomposition:
    pd: PathDecomposition
    sequence: dict  # non-root block id -> sequence number

    @property
    def bags(self):
        return self.pd.bags

    @property
    def width(self) -> int:
        return self.pd.width


def _block_fan_tree(cyc, nbrpos, bags, tree_edges, attach_node):
    """Width-2 decomposition of one 2-connected block, nodes keyed by vertex.

    ``cyc`` starts at the attaching vertex (or the block's start vertex for the
    root block).  Regions between a chord ``(a, b)`` and the cycle are split
    along the inner face of the chord and decomposed as fans; see the module
    tests for the validator that guards this construction.
    """
    m = len(cyc)
    c0, cl = cyc[0], cyc[m - 1]
    bags[cl] = [c0, cl]
    if attach_node is not None:
        tree_edges.append((attach_node, cl))
    # (pa, pb, side, parent vertex): side 'b' roots the region at the node next to b.
    stack = [(0, m - 1, "b", cl)] if m > 2 else []
    while stack:
        pa, pb, side, parent = stack.pop()
        if pb - pa < 2:
            continue
        a, b = cyc[pa], cyc[pb]
        face = [pa]
        nb = nbrpos[pa]
        g = nb[bisect_left(nb, pb) - 1]
        while g != pb:
            face.append(g)
            nb = nbrpos[g]
            g = nb[bisect_right(nb, pb) - 1]
        face.append(pb)
        r = len(face) - 1
        if side == "b":
            for i in range(1, r):
                bags[cyc[face[i]]] = [a, cyc[face[i]], cyc[face[i + 1]]]
                if i > 1:
                    tree_edges.append((cyc[face[i - 1]], cyc[face[i]]))
            tree_edges.append((parent, cyc[face[r - 1]]))
            stack.append((face[0], face[1], "b", cyc[face[1]]))
            for i in range(1, r):
                stack.append((face[i], face[i + 1], "a", cyc[face[i]]))
        else:
            for i in range(1, r):
                bags[cyc[face[i]]] = [b, cyc[face[i - 1]], cyc[face[i]]]
                if i > 1:
                    tree_edges.append((cyc[face[i - 1]], cyc[face[i]]))
            tree_edges.append((parent, cyc[face[1]]))
            for i in range(0, r - 1):
                stack.append((face[i], face[i + 1], "b", cyc[face[i + 1]]))
            stack.append((face[r - 1], face[r], "a", cyc[face[r - 1]]))


def base_tree_decomposition(g: Graph, bt: RootedBlockTree, check: bool = True) -> TreeDecomposition:
    """Width-2 tree decomposition with ``b(v) = v`` satisfying P1-P3."""
    n = g.n
    if n == 1:
        return TreeDecomposition(((0,),), (), (0,))
    bags: list = [None] * n
    tree_edges: list = []
    for blk, vs in enumerate(bt.blocks):
        x = bt.attach[blk]
        cyc = bt.ham_cycle[blk]
        if cyc is None:
            u, w = vs
            if x < 0:
                bags[u] = [u]
                bags[w] = [u, w]
                tree_edges.append((u, w))
            else:
                y = w if u == x else u
                bags[y] = [x, y]
                tree_edges.append((x, y))
            continue
        if x >= 0:
            i = cyc.index(x)
            cyc = cyc[i:] + cyc[:i]
        pos = {v: i for i, v in enumerate(cyc)}
        nbrpos = [[] for _ in cyc]
        for u, w in bt.block_edges[blk]:
            nbrpos[pos[u]].append(pos[w])
            nbrpos[pos[w]].append(pos[u])
        for lst in nbrpos:
            lst.sort()
        _block_fan_tree(cyc, nbrpos, bags, tree_edges, cyc[0] if x >= 0 else None)
        if x < 0:
            bags[cyc[0]] = [cyc[0]]
            tree_edges.append((cyc[0], cyc[-1]))
    td = TreeDecomposition(
        tuple(tuple(sorted(b)) for b in bags), tuple(tree_edges), tuple(range(n))
    )
    if check:
        verdict = validate_base(g, bt, td)
        if not verdict.ok:
            raise ConstructionError(f"base tree decomposition failed {verdict.condition}: {verdict.message}")
    return td


def make_nice(td: TreeDecomposition, bt: RootedBlockTree) -> NiceTreeDecomposition:
    """Insert each non-root non-trivial block's first vertex into the bags of that block's nodes."""
    b = td.vertex_to_node
    bags = list(td.bags)
    propagated = {}
    for blk, vs in enumerate(bt.blocks):
        x = bt.attach[blk]
        if x < 0 or bt.ham_cycle[blk] is None:
            continue
        y1 = bt.first[blk]
        propagated[blk] = y1
        for v in vs:
            if v != x:
                t = b[v]
                if y1 not in bags[t]:
                    bags[t] = tuple(sorted(bags[t] + (y1,)))
    new = TreeDecomposition(tuple(bags), td.tree_edges, b)
    return NiceTreeDecomposition(new, b, propagated)


# ---------------------------------------------------------------------------
# validators for the four nice-decomposition properties


def check_p1(td: TreeDecomposition, n: int) -> Verdict:
    b = td.vertex_to_node
    if b is None or len(b) != n or sorted(b) != list(range(len(td.bags))):
        return Verdict(False, "P1", None, "vertex-to-node map is not a bijection")
    for v in range(n):
        if v not in td.bags[b[v]]:
            return Verdict(False, "P1", v, f"vertex {v} missing from its own node's bag")
    return OK


def check_p3(g: Graph, td: TreeDecomposition) -> Verdict:
    b = td.vertex_to_node
    inv = [0] * len(b)
    for v, t in enumerate(b):
        inv[t] = v
    for s, t in td.tree_edges:
        if not g.has_edge(inv[s], inv[t]):
            return Verdict(False, "P3", (inv[s], inv[t]), "tree edge does not map to a graph edge")
    return OK


def check_p2(g: Graph, bt: RootedBlockTree, td: TreeDecomposition) -> Verdict:
    """Per non-root block: its nodes (minus the attach vertex) form a subtree decomposing the block."""
    b = td.vertex_to_node
    inv = [0] * len(b)
    for v, t in enumerate(b):
        inv[t] = v
    adj = td.tree_adjacency()
    bags = td.bags
    for blk, vs in enumerate(bt.blocks):
        x = bt.attach[blk]
        if x < 0:
            continue
        vset = set(vs)
        nodes = {b[v] for v in vs if v != x}
        # occurrences of each block vertex among the block's nodes, and tree edges sharing it
        holders: dict = {v: [] for v in vs}
        shared = dict.fromkeys(vs, 0)
        inner_edges = 0
        for s_ in nodes:
            for u in bags[s_]:
                if u in vset:
                    holders[u].append(s_)
            for t in adj[s_]:
                if t in nodes and t > s_:
                    inner_edges += 1
                    if not g.has_edge(inv[s_], inv[t]):
                        return Verdict(False, "P2", (inv[s_], inv[t]), f"block {blk}: tree edge is not a graph edge")
                    for u in bags[s_]:
                        if u in vset and u in bags[t]:
                            shared[u] += 1
        if inner_edges != len(nodes) - 1:
            return Verdict(False, "P2", blk, f"block {blk}: its nodes do not induce a subtree")
        for u in vs:
            if not holders[u] or shared[u] != len(holders[u]) - 1:
                return Verdict(False, "P2", blk, f"block {blk}: occurrences of {u} are missing or disconnected")
        for u, w in bt.block_edges[blk]:
            if len(holders[u]) > len(holders[w]):
                u, w = w, u
            if not any(w in bags[t] for t in holders[u]):
                return Verdict(False, "P2", (u, w), f"block {blk}: edge ({u}, {w}) not covered by the block's nodes")
    return OK


def check_p4(bt: RootedBlockTree, td: TreeDecomposition) -> Verdict:
    b = td.vertex_to_node
    for blk in range(bt.block_count):
        if bt.attach[blk] < 0 or bt.ham_cycle[blk] is None:
            continue
        y, y1 = bt.last[blk], bt.first[blk]
        bag = td.bags[b[y]]
        if y not in bag or y1 not in bag:
            return Verdict(False, "P4", blk, f"block {blk}: bag of last vertex {y} lacks first vertex {y1}")
    return OK


def validate_base(g: Graph, bt: RootedBlockTree, td: TreeDecomposition) -> Verdict:
    """Tree decomposition validity, width at most 2, and P1-P3."""
    for verdict in (validate_tree_decomposition(g, td), check_p1(td, g.n), check_p3(g, td), check_p2(g, bt, td)):
        if not verdict.ok:
            return verdict
    if td.width > 2:
        return Verdict(False, "width", td.width, f"width {td.width} exceeds 2")
    return OK


def validate_nice_tree(g: Graph, bt: RootedBlockTree, ntd: NiceTreeDecomposition) -> Verdict:
    """Tree decomposition validity, width at most 3, and P1-P4."""
    td = ntd.td
    for verdict in (
        validate_tree_decomposition(g, td),
        check_p1(td, g.n),
        check_p2(g, bt, td),
        check_p3(g, td),
        check_p4(bt, td),
    ):
        if not verdict.ok:
            return verdict
    if td.width > 3:
        return Verdict(False, "width", td.width, f"width {td.width} exceeds 3")
    return OK


# ---------------------------------------------------------------------------
# optimal path decomposition of a tree via vertex-separation labels
#
# A label is a strictly decreasing list of (value, critical) pairs.  The first
# pair gives the vertex separation number of the rooted subtree; ``critical`` is
# a vertex with two children of that value, in which case the rest of the label
# describes the subtree with the critical vertex's subtree removed.


def _combine(v, labels):
    labels = [lab for lab in labels if lab]
    if not labels:
        return [(0, None)]
    m = max(lab[0][0] for lab in labels)
    if m == 0:
        return [(1, None)]
    top = [lab for lab in labels if lab[0][0] == m]
    if len(top) >= 3:
        return [(m + 1, None)]
    if len(top) == 2:
        if top[0][0][1] is not None or top[1][0][1] is not None:
            return [(m + 1, None)]
        return [(m, v)]
    lab = top[0]
    w = lab[0][1]
    if w is None:
        return [(m, None)]
    rest = [other for other in labels if other is not lab]
    sub = _combine(v, [lab[1:]] + rest)
    if sub[0][0] >= m:
        return [(m + 1, None)]
    return [(m, w)] + sub


def _rooted(adj, root):
    """Preorder, parent and children lists of a tree rooted at ``root``."""
    n = len(adj)
    parent = [-1] * n
    children: list[list[int]] = [[] for _ in range(n)]
    order = [root]
    stack = [root]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w != parent[u]:
                parent[w] = u
                children[u].append(w)
                order.append(w)
                stack.append(w)
    return order, parent, children


def _chain(start, k, children, label, alive):
    path = [start]
    u = start
    while True:
        for c in children[u]:
            if alive[c] and label[c][0][0] == k:
                u = c
                path.append(c)
                break
        else:
            return path


def tree_vertex_separation(t: Graph) -> int:
    if t.n == 0:
        return 0
    order, _, children = _rooted(t.adj, 0)
    label: list = [None] * t.n
    for u in reversed(order):
        label[u] = _combine(u, [label[c] for c in children[u]])
    return label[0][0][0]


def tree_optimal_path_decomposition(t: Graph) -> PathDecomposition:
    """Path decomposition of a tree whose width equals the tree's pathwidth.

    A component with label value ``k`` has a path whose removal leaves only
    components of value below ``k``: the chain of value-``k`` children from the
    root, or two such chains joined at the critical vertex.  Each remaining
    component is laid out recursively with the path vertex it hangs from added
    to every bag.  Labels stay valid for subtrees that lose nothing; only the
    ancestors of a removed critical vertex are relabeled.
    """
    if t.n == 0 or t.m != t.n - 1:
        raise GraphValidationError("input is not a tree")
    return _tree_layout(t.adj)


def _tree_layout(adj) -> PathDecomposition:
    n = len(adj)
    order, parent, children = _rooted(adj, 0)
    if len(order) != n:
        raise GraphValidationError("input is not a tree")
    label: list = [None] * n
    for u in reversed(order):
        label[u] = _combine(u, [label[c] for c in children[u]])
    alive = bytearray([1]) * n
    out: list[tuple] = []
    # ("comp", root, extra) lays out the component hanging below root; ("bag", bag) emits a bag
    work: list = [("comp", 0, ())]
    while work:
        item = work.pop()
        if item[0] == "bag":
            out.append(item[1])
            continue
        _, root, extra = item
        k, w = label[root][0]
        if k == 0:
            out.append(extra + (root,))
            alive[root] = 0
            continue
        if w is None:
            path = _chain(root, k, children, label, alive)
        else:
            c1, c2 = [c for c in children[w] if alive[c] and label[c][0][0] == k][:2]
            path = _chain(c1, k, children, label, alive)[::-1] + [w] + _chain(c2, k, children, label, alive)
        for p in path:
            alive[p] = 0
        upper = None
        if w is not None and root != w:
            upper = root
            a = parent[w]
            while True:
                label[a] = _combine(a, [label[c] for c in children[a] if alive[c]])
                if a == root:
                    break
                a = parent[a]
        steps = []
        for i, p in enumerate(path):
            for c in children[p]:
                if alive[c]:
                    steps.append(("comp", c, extra + (p,)))
            if p == w and upper is not None:
                steps.append(("comp", upper, extra + (p,)))
            if i + 1 < len(path):
                steps.append(("bag", extra + (p, path[i + 1])))
            else:
                steps.append(("bag", extra + (p,)))
        work.extend(reversed(steps))
    return PathDecomposition(tuple(tuple(sorted(bag)) for bag in out))


# ---------------------------------------------------------------------------
# composition and niceness


def compose(ntd: NiceTreeDecomposition, ptd: PathDecomposition) -> PathDecomposition:
    """Replace every tree node in each bag of ``ptd`` by that node's bag."""
    ybags = ntd.td.bags
    out = []
    for bag in ptd.bags:
        s = set()
        for t in bag:
            s.update(ybags[t])
        out.append(tuple(sorted(s)))
    return PathDecomposition(tuple(out))


def sequence_number_table(pd: PathDecomposition, bt: RootedBlockTree, n: int | None = None) -> dict:
    """Minimum bag index holding a block's first and last vertex together, per non-root block."""
    first, last = occurrence_ranges(pd, bt.n if n is None else n)
    table = {}
    for blk in range(bt.block_count):
        if bt.attach[blk] < 0:
            continue
        f, l = bt.first[blk], bt.last[blk]
        lo = max(first[f], first[l])
        if lo > min(last[f], last[l]) or lo == 0:
            raise DecompositionError(f"no bag contains first vertex {f} and last vertex {l} of block {blk}")
        table[blk] = lo
    return table


def check_niceness(pd: PathDecomposition, bt: RootedBlockTree) -> Verdict:
    first, last = occurrence_ranges(pd, bt.n)
    for blk in range(bt.block_count):
        if bt.attach[blk] < 0 or bt.ham_cycle[blk] is None:
            continue
        f, l = bt.first[blk], bt.last[blk]
        if not first[f] or not first[l] or max(first[f], first[l]) > min(last[f], last[l]):
            return Verdict(False, "niceness", blk, f"no bag holds both {f} and {l} of block {blk}")
    return OK


@dataclasses.dataclass(frozen=True)
class Stage1Result:
    base: TreeDecomposition
    nice_tree: NiceTreeDecomposition
    tree_pd: PathDecomposition
    npd: NicePathDecomposition

    @property
    def pd(self) -> PathDecomposition:
        return self.npd.pd


def run_stage1(g: Graph, bt: RootedBlockTree, check: bool = True) -> Stage1Result:
    base = base_tree_decomposition(g, bt, check=check)
    ntd = make_nice(base, bt)
    tree_pd = _tree_layout(ntd.td.tree_adjacency())
    pd = compose(ntd, tree_pd)
    if check:
        verdict = validate_path_decomposition(g, pd)
        if not verdict.ok:
            raise ConstructionError(f"stage-1 path decomposition failed {verdict.condition}: {verdict.message}")
    try:
        table = sequence_number_table(pd, bt)
    except DecompositionError as exc:
        raise ConstructionError(f"stage-1 path decomposition is not nice: {exc}") from None
    return Stage1Result(base, ntd, tree_pd, NicePathDecomposition(pd, table))
