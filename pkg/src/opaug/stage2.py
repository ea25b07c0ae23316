"""Serialize the child blocks at every cut vertex so each cut vertex leaves two components."""
from __future__ import annotations

import dataclasses
from typing import Callable

from .decomposition import BagBuilder, GapResult, PathDecomposition, gap_from_ranges, occurrence_ranges
from .graph import Graph, RootedBlockTree


@dataclasses.dataclass(frozen=True)
class GapRecord:
    u: int
    v: int
    cut: int
    gap: GapResult


@dataclasses.dataclass(frozen=True)
class Stage2Result:
    g_prime: Graph
    pd_prime: PathDecomposition
    added_edges: tuple  # (y'_i, y_{i+1}, x)
    child_order: dict  # cut vertex -> ordered child block ids
    records: tuple  # GapRecord per added edge
    violations: tuple = ()  # gap-shape or gap-overlap problems seen while running


def sequence_numbers(pd: PathDecomposition, bt: RootedBlockTree) -> dict:
    from .stage1 import sequence_number_table

    return sequence_number_table(pd, bt)


def order_children(table: dict, bt: RootedBlockTree, x: int, tie_break: Callable | None = None) -> list[int]:
    """Child blocks at ``x`` by ascending sequence number; ties by block id unless ``tie_break`` is given."""
    kids = bt.child_blocks_of_cut(x)
    if tie_break is None:
        return sorted(kids, key=lambda b: (table[b], b))
    return sorted(kids, key=lambda b: (table[b], tie_break(b)))


def run_stage2(
    g: Graph,
    bt: RootedBlockTree,
    pd: PathDecomposition,
    table: dict | None = None,
    tie_break: Callable | None = None,
) -> Stage2Result:
    """Add ``(y'_i, y_{i+1})`` along each cut vertex's ordered children.

    Gaps are measured against the ranges of the input decomposition ``pd``;
    insertions accumulate in a copy of it.
    """
    if table is None:
        table = sequence_numbers(pd, bt)
    first, last = occurrence_ranges(pd, g.n)
    builder = BagBuilder(pd)
    added = []
    records = []
    order = {}
    violations = []
    for x in sorted(bt.cut_vertices):
        kids = order_children(table, bt, x, tie_break)
        order[x] = tuple(kids)
        prev_hi = 0
        for i in range(len(kids) - 1):
            y1 = bt.first[kids[i]]
            y2 = bt.last[kids[i + 1]]
            gp = gap_from_ranges(y1, (first[y1], last[y1]), y2, (first[y2], last[y2]))
            if not gp.empty:
                if gp.insert != y1 or not (first[x] <= gp.lo and gp.hi <= last[x]):
                    violations.append(("gap-shape", x, y1, y2))
                if gp.lo <= prev_hi:
                    violations.append(("gap-overlap", x, y1, y2))
                prev_hi = gp.hi
                builder.insert(gp)
            added.append((y1, y2, x))
            records.append(GapRecord(y1, y2, x, gp))
    g_prime = g.with_edges((u, v) for u, v, _ in added) if added else g
    return Stage2Result(g_prime, builder.freeze(), tuple(added), order, tuple(records), tuple(violations))


def bag_growth_ok(pd: PathDecomposition, pd_prime: PathDecomposition, cut_vertices) -> bool:
    """Each bag gains at most as many vertices as it holds cut vertices."""
    for before, after in zip(pd.bags, pd_prime.bags):
        if len(after) > len(before) + sum(1 for v in before if v in cut_vertices):
            return False
    return True
