"""Tree and path decompositions, the Range/Gap index algebra and validators.

Bag indices in this module's public API are 1-based: the first bag of a path
decomposition has index 1.
"""
from __future__ import annotations

import dataclasses
from functools import cached_property
from itertools import chain
from typing import Iterable, Sequence

import numpy as np

from .errors import DecompositionError, GraphParseError
from .graph import Graph


@dataclasses.dataclass(frozen=True)
class PathDecomposition:
    bags: tuple  # tuple of ascending vertex tuples

    @classmethod
    def from_bags(cls, bags: Iterable[Iterable[int]]) -> "PathDecomposition":
        return cls(tuple(tuple(sorted(set(b))) for b in bags))

    def __len__(self):
        return len(self.bags)

    def bag(self, i: int) -> tuple:
        """Bag at 1-based index ``i``."""
        return self.bags[i - 1]

    @cached_property
    def _index(self) -> dict:
        first: dict[int, int] = {}
        last: dict[int, int] = {}
        for i, bag in enumerate(self.bags, 1):
            for v in bag:
                if v not in first:
                    first[v] = i
                last[v] = i
        return {"first": first, "last": last}

    def first_index(self, v: int) -> int:
        try:
            return self._index["first"][v]
        except KeyError:
            raise DecompositionError(f"vertex {v} occurs in no bag") from None

    def last_index(self, v: int) -> int:
        try:
            return self._index["last"][v]
        except KeyError:
            raise DecompositionError(f"vertex {v} occurs in no bag") from None

    def range(self, v: int) -> tuple[int, int]:
        return self.first_index(v), self.last_index(v)

    def vertices(self) -> set[int]:
        return set(self._index["first"])

    @property
    def width(self) -> int:
        return width(self)

    def size(self) -> int:
        return sum(len(b) for b in self.bags)


@dataclasses.dataclass(frozen=True)
class TreeDecomposition:
    """Tree decomposition over node ids ``0..len(bags)-1``.

    ``vertex_to_node`` is the vertex-to-node bijection when one exists.
    """

    bags: tuple
    tree_edges: tuple
    vertex_to_node: tuple | None = None

    @property
    def width(self) -> int:
        return width(self)

    def tree_adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


@dataclasses.dataclass(frozen=True)
class GapResult:
    empty: bool
    lo: int = 0
    hi: int = 0
    insert: int | None = None

    def indices(self) -> range:
        return range(self.lo, self.hi + 1) if not self.empty else range(0)

    def __str__(self):
        if self.empty:
            return "gap empty"
        return f"gap {self.lo}..{self.hi} inserted {self.insert}"


EMPTY_GAP = GapResult(True)


def first_index(pd: PathDecomposition, v: int) -> int:
    return pd.first_index(v)


def last_index(pd: PathDecomposition, v: int) -> int:
    return pd.last_index(v)


def vertex_range(pd: PathDecomposition, v: int) -> tuple[int, int]:
    return pd.range(v)


def gap_from_ranges(v1: int, r1: tuple[int, int], v2: int, r2: tuple[int, int]) -> GapResult:
    (f1, l1), (f2, l2) = r1, r2
    if l1 < f2:
        return GapResult(False, l1 + 1, f2, v1)
    if l2 < f1:
        return GapResult(False, l2 + 1, f1, v2)
    return EMPTY_GAP


def gap(pd: PathDecomposition, v1: int, v2: int) -> GapResult:
    """Bags that must receive one endpoint so that ``v1`` and ``v2`` share a bag.

    Empty when the ranges intersect; otherwise ``[LastIndex(a)+1, FirstIndex(b)]``
    where ``a`` is the endpoint whose range ends first, and ``a`` is the vertex to insert.
    """
    if v1 == v2:
        raise ValueError("gap needs two distinct vertices")
    return gap_from_ranges(v1, pd.range(v1), v2, pd.range(v2))


def apply_gap(pd: PathDecomposition, g: GapResult) -> PathDecomposition:
    if g.empty:
        return pd
    bags = list(pd.bags)
    for t in g.indices():
        bag = bags[t - 1]
        if g.insert not in bag:
            bags[t - 1] = tuple(sorted(bag + (g.insert,)))
    return PathDecomposition(tuple(bags))


def add_edge_update(pd: PathDecomposition, v1: int, v2: int) -> PathDecomposition:
    """Decomposition of the graph with edge ``(v1, v2)`` added, via the gap rule."""
    return apply_gap(pd, gap(pd, v1, v2))


def width(dec) -> int:
    bags = dec.bags
    if not bags:
        raise DecompositionError("decomposition has no bags")
    return max(len(b) for b in bags) - 1


@dataclasses.dataclass(frozen=True)
class Verdict:
    ok: bool
    condition: str | None = None
    witness: object = None
    message: str = ""

    def __bool__(self):
        return self.ok


OK = Verdict(True)


def _flatten(bags):
    """Concatenated bag contents and the owning bag position (0-based) of each entry."""
    sizes = np.fromiter(map(len, bags), dtype=np.int64, count=len(bags))
    flat = np.fromiter(chain.from_iterable(bags), dtype=np.int64, count=int(sizes.sum()))
    owner = np.repeat(np.arange(len(bags), dtype=np.int64), sizes)
    return flat, owner


def _vertex_check(n: int, flat) -> Verdict | None:
    if flat.size:
        bad = (flat < 0) | (flat >= n)
        if bad.any():
            v = int(flat[np.argmax(bad)])
            return Verdict(False, "unknown-vertex", v, f"bag contains vertex {v} outside 0..{n - 1}")
    seen = np.zeros(n, dtype=bool)
    seen[flat] = True
    if not seen.all():
        v = int(np.argmin(seen))
        return Verdict(False, "vertex-coverage", v, f"vertex {v} occurs in no bag")
    return None


def _edge_arrays(g: Graph):
    if not g.edges:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    arr = np.array(g.edge_list(), dtype=np.int64)
    return arr[:, 0], arr[:, 1]


def validate_path_decomposition(g: Graph, pd: PathDecomposition) -> Verdict:
    """Check vertex coverage, contiguity of occurrences, then edge coverage."""
    flat, owner = _flatten(pd.bags)
    bad = _vertex_check(g.n, flat)
    if bad is not None:
        return bad
    first = np.full(g.n, len(pd.bags), dtype=np.int64)
    last = np.full(g.n, -1, dtype=np.int64)
    np.minimum.at(first, flat, owner)
    np.maximum.at(last, flat, owner)
    # bags are sets, so each vertex is counted once per bag
    count = np.bincount(flat, minlength=g.n)
    gaps = (last - first + 1) != count
    if gaps.any():
        v = int(np.argmax(gaps))
        return Verdict(False, "contiguity", v, f"occurrences of vertex {v} are not contiguous")
    eu, ev = _edge_arrays(g)
    missed = np.maximum(first[eu], first[ev]) > np.minimum(last[eu], last[ev])
    if missed.any():
        i = int(np.argmax(missed))
        u, v = int(eu[i]), int(ev[i])
        return Verdict(False, "edge-coverage", (u, v), f"edge ({u}, {v}) is in no bag")
    return OK


def validate_tree_decomposition(g: Graph, td: TreeDecomposition) -> Verdict:
    """Check the tree shape, vertex coverage, occurrence connectivity and edge coverage."""
    nn = len(td.bags)
    if nn == 0:
        return Verdict(False, "tree", None, "no nodes")
    if len(td.tree_edges) != nn - 1:
        return Verdict(False, "tree", None, f"{len(td.tree_edges)} edges on {nn} nodes")
    adj = td.tree_adjacency()
    seen = bytearray(nn)
    seen[0] = 1
    stack = [0]
    while stack:
        a = stack.pop()
        for b in adj[a]:
            if not seen[b]:
                seen[b] = 1
                stack.append(b)
    if not all(seen):
        return Verdict(False, "tree", None, "node graph is disconnected")
    n = g.n
    flat, owner = _flatten(td.bags)
    bad = _vertex_check(n, flat)
    if bad is not None:
        return bad
    # membership keys node * n + vertex; a vertex's nodes form a subtree iff
    # the tree edges whose both ends hold it number one less than those nodes
    keys = np.sort(owner * n + flat)
    nodes_with = np.bincount(flat, minlength=n)
    if td.tree_edges:
        te = np.array(td.tree_edges, dtype=np.int64)
        sizes = np.fromiter((len(td.bags[a]) for a in te[:, 0]), dtype=np.int64, count=len(te))
        ends = np.repeat(te[:, 1], sizes)
        verts = np.fromiter(chain.from_iterable(td.bags[a] for a in te[:, 0]), dtype=np.int64, count=int(sizes.sum()))
        probe = ends * n + verts
        pos = np.searchsorted(keys, probe)
        pos[pos == keys.size] = 0
        hit = keys[pos] == probe
        edges_with = np.bincount(verts[hit], minlength=n)
    else:
        edges_with = np.zeros(n, dtype=np.int64)
    broken = edges_with != nodes_with - 1
    if broken.any():
        v = int(np.argmax(broken))
        return Verdict(False, "connectivity", v, f"nodes containing vertex {v} do not form a subtree")
    # edge coverage: every vertex pair sharing a bag, keyed as u * n + v with u < v
    by_size: dict = {}
    for bag in td.bags:
        by_size.setdefault(len(bag), []).append(bag)
    pair_parts = [np.zeros(0, dtype=np.int64)]
    for k, group in by_size.items():
        if k < 2:
            continue
        arr = np.array(group, dtype=np.int64)
        for i in range(k):
            for j in range(i + 1, k):
                lo = np.minimum(arr[:, i], arr[:, j])
                hi = np.maximum(arr[:, i], arr[:, j])
                pair_parts.append(lo * n + hi)
    pair_keys = np.unique(np.concatenate(pair_parts))
    eu, ev = _edge_arrays(g)
    ekeys = eu * n + ev
    if ekeys.size:
        covered = np.isin(ekeys, pair_keys)
        if not covered.all():
            i = int(np.argmin(covered))
            u, v = int(eu[i]), int(ev[i])
            return Verdict(False, "edge-coverage", (u, v), f"edge ({u}, {v}) is in no bag")
    return OK


def format_path_decomposition(pd: PathDecomposition) -> str:
    # an empty line stands for an empty bag
    return "".join(" ".join(map(str, bag)) + "\n" for bag in pd.bags)


def parse_path_decomposition(text: str) -> PathDecomposition:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    bags = []
    for lineno, line in enumerate(lines, 1):
        try:
            bags.append([int(tok) for tok in line.split()])
        except ValueError:
            raise GraphParseError(f"non-integer vertex in bag {line!r}", lineno) from None
    return PathDecomposition.from_bags(bags)


def format_tree_decomposition(td: TreeDecomposition) -> str:
    out = [f"node {t}: " + " ".join(map(str, bag)) for t, bag in enumerate(td.bags)]
    out += [f"edge {a} {b}" for a, b in td.tree_edges]
    return "\n".join(out) + "\n"


def parse_tree_decomposition(text: str) -> TreeDecomposition:
    bags: dict[int, tuple] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            if line.startswith("node "):
                head, _, rest = line[5:].partition(":")
                bags[int(head)] = tuple(sorted(int(t) for t in rest.split()))
            elif line.startswith("edge "):
                a, b = line[5:].split()
                edges.append((int(a), int(b)))
            else:
                raise ValueError
        except ValueError:
            raise GraphParseError(f"malformed tree decomposition line {line!r}", lineno) from None
    if sorted(bags) != list(range(len(bags))):
        raise GraphParseError("node ids must be 0..N-1")
    return TreeDecomposition(tuple(bags[t] for t in range(len(bags))), tuple(edges))


class BagBuilder:
    """Mutable bag list for in-place gap insertions during the augmentation stages."""

    def __init__(self, pd: PathDecomposition):
        self.base = pd.bags
        self.bags = list(pd.bags)
        self.dirty: set[int] = set()

    def insert(self, g: GapResult) -> int:
        """Insert per ``g``; returns how many bags actually grew."""
        if g.empty:
            return 0
        grown = 0
        x = g.insert
        bags = self.bags
        dirty = self.dirty
        for t in range(g.lo - 1, g.hi):
            bag = bags[t]
            if x not in bag:
                if t not in dirty:
                    bag = bags[t] = list(bag)
                    dirty.add(t)
                bag.append(x)
                grown += 1
        return grown

    def freeze(self) -> PathDecomposition:
        bags = self.bags
        out = list(bags)
        for t in self.dirty:
            out[t] = tuple(sorted(bags[t]))
        return PathDecomposition(tuple(out))


def occurrence_ranges(pd: PathDecomposition, n: int) -> tuple[list[int], list[int]]:
    """1-based (first, last) lists over vertices ``0..n-1``; 0 where absent."""
    if not pd.bags:
        return [0] * n, [0] * n
    flat, owner = _flatten(pd.bags)
    first = np.full(n, len(pd.bags) + 1, dtype=np.int64)
    last = np.zeros(n, dtype=np.int64)
    np.minimum.at(first, flat, owner + 1)
    np.maximum.at(last, flat, owner + 1)
    first[last == 0] = 0
    return first.tolist(), last.tolist()


def ranges_intersect(r1: Sequence[int], r2: Sequence[int]) -> bool:
    return max(r1[0], r2[0]) <= min(r1[1], r2[1])
