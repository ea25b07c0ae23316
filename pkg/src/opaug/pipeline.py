"""Three-stage augmentation: nice decomposition, child serialization, bypass biconnection."""
from __future__ import annotations

import dataclasses
import time

from .decomposition import PathDecomposition
from .embed import rooted_block_tree
from .graph import Graph, RootedBlockTree
from .stage1 import Stage1Result, run_stage1
from .stage2 import Stage2Result, run_stage2
from .stage3 import Stage3Result, run_stage3


@dataclasses.dataclass(frozen=True)
class AugmentResult:
    g: Graph
    bt: RootedBlockTree
    stage1: Stage1Result
    stage2: Stage2Result
    bt_prime: RootedBlockTree
    stage3: Stage3Result
    timings: dict

    @property
    def g_final(self) -> Graph:
        return self.stage3.g_double_prime

    @property
    def pd_final(self) -> PathDecomposition:
        return self.stage3.pd_double_prime

    @property
    def widths(self) -> tuple[int, int, int]:
        return (self.stage1.pd.width, self.stage2.pd_prime.width, self.stage3.pd_double_prime.width)


def augment(g: Graph, tie_break=None, start: int | None = None, check: bool = False) -> AugmentResult:
    """Run all three stages on a connected outerplanar graph.

    Raises :class:`~opaug.errors.DisconnectedGraphError` or
    :class:`~opaug.errors.NotOuterplanarError` on bad input.  ``check`` turns on
    the stage-1 self-validation; full checking is :func:`opaug.verify.verify_result`.
    """
    timings = {}
    t0 = time.perf_counter()
    bt = rooted_block_tree(g)
    t1 = time.perf_counter()
    s1 = run_stage1(g, bt, check=check)
    t2 = time.perf_counter()
    s2 = run_stage2(g, bt, s1.pd, s1.npd.sequence, tie_break=tie_break)
    t3 = time.perf_counter()
    bt2 = rooted_block_tree(s2.g_prime) if s2.added_edges else bt
    s3 = run_stage3(s2.g_prime, bt2, s2.pd_prime, start=start)
    t4 = time.perf_counter()
    timings.update(blocks=t1 - t0, stage1=t2 - t1, stage2=t3 - t2, stage3=t4 - t3, total=t4 - t0)
    return AugmentResult(g, bt, s1, s2, bt2, s3, timings)


def _gap_text(gp) -> str:
    return str(gp)


def trace_lines(res: AugmentResult) -> list[str]:
    """Line-oriented trace of every edge addition with its decomposition update."""
    s1, s2, s3 = res.stage1, res.stage2, res.stage3
    lines = [f"stage1 done width={s1.pd.width} bags={len(s1.pd.bags)}"]
    for rec in s2.records:
        lines.append(f"stage2 add {rec.u} {rec.v} at-cut {rec.cut} {_gap_text(rec.gap)}")
    lines.append(f"stage2 done edges={len(s2.added_edges)}")
    for (u, v), seq, gp in zip(s3.added_edges, s3.bypass_seq, s3.gaps):
        lines.append(f"stage3 add {u} {v} bypass {','.join(map(str, seq))} {_gap_text(gp)}")
    lines.append(f"stage3 done edges={len(s3.added_edges)} cutvertices={len(res.bt_prime.cut_vertices)}")
    return lines


def format_trace(res: AugmentResult) -> str:
    return "".join(line + "\n" for line in trace_lines(res))
