"""Undirected simple graphs, blocks, cut vertices and the rooted block tree."""
from __future__ import annotations

import dataclasses
from collections import deque
from typing import Iterable, Sequence

from .errors import DisconnectedGraphError, GraphParseError, GraphValidationError

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclasses.dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    ``edges`` holds normalized pairs ``(u, v)`` with ``u < v``; ``adj`` holds
    one ascending neighbor tuple per vertex.
    """

    n: int
    edges: frozenset
    adj: tuple

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        es = {(u, v) if u < v else (v, u) for u, v in edges}
        for u, v in es:
            if u == v:
                raise GraphValidationError(f"self-loop at vertex {u}")
            if u < 0 or v >= n:
                raise GraphValidationError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in es:
            nbrs[u].append(v)
            nbrs[v].append(u)
        for a in nbrs:
            a.sort()
        return cls(n, frozenset(es), tuple(map(tuple, nbrs)))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def with_edges(self, extra: Iterable[Sequence[int]]) -> "Graph":
        new = {_norm(u, v) for u, v in extra} - self.edges
        if not new:
            return self
        nbrs = list(self.adj)
        touched: dict[int, list[int]] = {}
        for u, v in new:
            if u == v or u < 0 or v >= self.n:
                raise GraphValidationError(f"invalid edge ({u}, {v})")
            for a, b in ((u, v), (v, u)):
                if a not in touched:
                    touched[a] = list(nbrs[a])
                touched[a].append(b)
        for a, lst in touched.items():
            lst.sort()
            nbrs[a] = tuple(lst)
        return Graph(self.n, self.edges | new, tuple(nbrs))

    def issubgraph(self, other: "Graph") -> bool:
        return self.n == other.n and self.edges <= other.edges

    def component_count(self, removed: Iterable[int] = ()) -> int:
        """Number of connected components after deleting ``removed``."""
        dead = bytearray(self.n)
        for r in removed:
            dead[r] = 1
        seen = bytearray(self.n)
        count = 0
        for s in range(self.n):
            if dead[s] or seen[s]:
                continue
            count += 1
            seen[s] = 1
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adj[u]:
                    if not seen[w] and not dead[w]:
                        seen[w] = 1
                        stack.append(w)
        return count

    def is_connected(self) -> bool:
        return self.n >= 1 and self.component_count() == 1


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: ``u v`` lines, ``#`` comments, optional ``n <count>`` header."""
    n_header = None
    edges = []
    max_id = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or n_header is not None or edges:
                raise GraphParseError("malformed header, expected 'n <count>' before any edge", lineno)
            try:
                n_header = int(parts[1])
            except ValueError:
                raise GraphParseError(f"bad vertex count {parts[1]!r}", lineno) from None
            if n_header < 0:
                raise GraphParseError("negative vertex count", lineno)
            continue
        if len(parts) != 2:
            raise GraphParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"non-integer vertex id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphParseError(f"negative vertex id in {line!r}", lineno)
        if u == v:
            raise GraphValidationError(f"line {lineno}: self-loop at vertex {u}")
        edges.append((u, v))
        max_id = max(max_id, u, v)
    n = max_id + 1 if n_header is None else n_header
    if max_id >= n:
        raise GraphParseError(f"vertex id {max_id} exceeds header count {n}")
    return Graph.from_edges(n, edges)


def format_graph(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edge_list())
    return "\n".join(lines) + "\n"


@dataclasses.dataclass(frozen=True, eq=False)
class RootedBlockTree:
    """Block-cut structure of a connected graph rooted at one block.

    Block ids index ``blocks``.  ``parent[b]``/``attach[b]`` are ``-1`` for the
    root.  ``ham_cycle``/``first``/``last`` stay empty until the Hamiltonian
    cycles are fixed by :func:`opaug.embed.fix_clockwise_order`.
    """

    n: int
    blocks: tuple
    block_edges: tuple
    cut_vertices: frozenset
    root: int
    parent: tuple
    attach: tuple
    children: tuple  # per block: tuple of (cut vertex, child block), sorted
    vertex_blocks: tuple
    ham_cycle: tuple = ()
    first: tuple = ()
    last: tuple = ()
    _succ: tuple = dataclasses.field(default=(), repr=False)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def is_trivial(self, b: int) -> bool:
        return len(self.blocks[b]) == 2

    def is_cut(self, v: int) -> bool:
        return v in self.cut_vertices

    @property
    def has_cycles(self) -> bool:
        return bool(self.ham_cycle) or not self.blocks

    def parent_block(self, b: int) -> int:
        if self.parent[b] < 0:
            raise ValueError(f"block {b} is the root and has no parent")
        return self.parent[b]

    def children_at(self, b: int, x: int) -> list[int]:
        return [c for y, c in self.children[b] if y == x]

    def child_at(self, b: int, x: int) -> int:
        """The unique child block of ``b`` at cut vertex ``x``."""
        if x not in self.cut_vertices or x not in self.blocks[b]:
            raise ValueError(f"vertex {x} is not a cut vertex of block {b}")
        kids = self.children_at(b, x)
        if len(kids) != 1:
            raise ValueError(f"block {b} has {len(kids)} child blocks at {x}, expected exactly one")
        return kids[0]

    def next_in_block(self, b: int, v: int) -> int:
        """Successor of ``v`` on the Hamiltonian cycle of block ``b``."""
        if not self._succ:
            raise ValueError("Hamiltonian cycles are not populated")
        try:
            return self._succ[b][v]
        except KeyError:
            raise ValueError(f"vertex {v} is not in block {b}") from None

    def prev_in_block(self, b: int, v: int) -> int:
        cyc = self.ham_cycle[b]
        if cyc is None:
            u, w = self.blocks[b]
            return w if v == u else u
        i = cyc.index(v)
        return cyc[i - 1]

    def non_root_blocks(self) -> list[int]:
        return [b for b in range(len(self.blocks)) if b != self.root]

    def child_blocks_of_cut(self, x: int) -> list[int]:
        """Blocks attached to their parent at ``x``, ordered by block id."""
        return sorted(b for b in self.vertex_blocks[x] if self.attach[b] == x)


def _tarjan_blocks(g: Graph):
    n = g.n
    adj = g.adj
    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    ptr = [0] * n
    is_cut = [False] * n
    found = []
    edge_stack: list[Edge] = []
    disc[0] = 0
    t = 1
    root_children = 0
    stack = [0]
    while stack:
        u = stack[-1]
        nb = adj[u]
        i = ptr[u]
        if i < len(nb):
            ptr[u] = i + 1
            w = nb[i]
            if disc[w] < 0:
                parent[w] = u
                disc[w] = low[w] = t
                t += 1
                edge_stack.append((u, w))
                stack.append(w)
            elif w != parent[u] and disc[w] < disc[u]:
                edge_stack.append((u, w))
                if disc[w] < low[u]:
                    low[u] = disc[w]
        else:
            stack.pop()
            p = parent[u]
            if p < 0:
                continue
            if low[u] < low[p]:
                low[p] = low[u]
            if low[u] >= disc[p]:
                if p == 0:
                    root_children += 1
                else:
                    is_cut[p] = True
                comp = []
                while True:
                    e = edge_stack.pop()
                    comp.append(e)
                    if e[0] == p and e[1] == u:
                        break
                found.append((disc[u], comp))
    if t != n:
        raise DisconnectedGraphError(f"graph is disconnected ({t} of {n} vertices reachable from 0)")
    if root_children >= 2:
        is_cut[0] = True
    found.sort(key=lambda item: item[0])
    return [comp for _, comp in found], is_cut


def blocks_and_cut_vertices(g: Graph, root: int | None = None) -> RootedBlockTree:
    """Block decomposition of a connected graph, rooted at a block with a non-cut vertex.

    Block ids follow the discovery order of a depth-first search from vertex 0
    (neighbors in ascending order).  By default the root is the smallest block id
    containing a non-cut vertex; ``root`` overrides that choice.
    """
    if g.n < 1:
        raise DisconnectedGraphError("empty graph")
    if g.n == 1:
        return RootedBlockTree(1, (), (), frozenset(), -1, (), (), (), ((),))
    comps, is_cut = _tarjan_blocks(g)
    blocks = []
    block_edges = []
    for comp in comps:
        es = sorted([(u, v) if u < v else (v, u) for u, v in comp])
        blocks.append(tuple(sorted({u for e in comp for u in e})))
        block_edges.append(tuple(es))
    vertex_blocks: list[list[int]] = [[] for _ in range(g.n)]
    for b, vs in enumerate(blocks):
        for v in vs:
            vertex_blocks[v].append(b)
    cut = frozenset(v for v in range(g.n) if is_cut[v])

    candidates = [b for b, vs in enumerate(blocks) if any(v not in cut for v in vs)]
    if root is None:
        root = candidates[0]
    elif root not in candidates:
        raise ValueError(f"block {root} has no non-cut vertex and cannot be the root")

    nb = len(blocks)
    parent = [-1] * nb
    attach = [-1] * nb
    children: list[list[tuple[int, int]]] = [[] for _ in range(nb)]
    seen = [False] * nb
    seen[root] = True
    queue = deque([root])
    while queue:
        b = queue.popleft()
        for x in blocks[b]:
            if x not in cut or x == attach[b]:
                continue
            for c in vertex_blocks[x]:
                if not seen[c]:
                    seen[c] = True
                    parent[c] = b
                    attach[c] = x
                    children[b].append((x, c))
                    queue.append(c)
    return RootedBlockTree(
        n=g.n,
        blocks=tuple(blocks),
        block_edges=tuple(block_edges),
        cut_vertices=cut,
        root=root,
        parent=tuple(parent),
        attach=tuple(attach),
        children=tuple(tuple(sorted(ch)) for ch in children),
        vertex_blocks=tuple(tuple(vb) for vb in vertex_blocks),
    )


def cut_vertices_bruteforce(g: Graph) -> set[int]:
    """Cut vertices by definition: deleting ``v`` increases the component count."""
    base = g.component_count()
    return {v for v in range(g.n) if g.component_count([v]) > base}
