"""End-to-end verification: replay a trace against fresh stage results and run every check."""
from __future__ import annotations

import dataclasses
import re
import time

from .decomposition import (
    BagBuilder,
    EMPTY_GAP,
    GapResult,
    PathDecomposition,
    gap_from_ranges,
    occurrence_ranges,
    validate_path_decomposition,
)
from .embed import check_outerplanar
from .errors import DisconnectedGraphError, NotOuterplanarError, SizeGuardError
from .graph import Graph, blocks_and_cut_vertices
from .oracles import exact_pathwidth
from .pipeline import AugmentResult, augment, trace_lines
from .stage1 import validate_nice_tree
from .stage2 import bag_growth_ok
from .stage3 import bypass_partition, bypass_paths_ok, encounter_audit, gap_growth_ok, order_oracle

SMALL_N = 64  # full revalidation after every update and block-level merge and bypass-path checks up to this size
EXACT_N = 16  # exact pathwidth comparison up to this size

_GAP = r"(?:gap empty|gap (\d+)\.\.(\d+) inserted (\d+))"
_S2 = re.compile(rf"stage2 add (\d+) (\d+) at-cut (\d+) {_GAP}$")
_S3 = re.compile(rf"stage3 add (\d+) (\d+) bypass (\d+(?:,\d+)*) {_GAP}$")
_S1_DONE = re.compile(r"stage1 done width=(\d+) bags=(\d+)$")
_S2_DONE = re.compile(r"stage2 done edges=(\d+)$")
_S3_DONE = re.compile(r"stage3 done edges=(\d+) cutvertices=(\d+)$")


@dataclasses.dataclass
class PipelineReport:
    n: int = 0
    m: int = 0
    widths: tuple = ()
    exact_pathwidth: int | None = None
    added_stage2: int = 0
    added_stage3: int = 0
    verdicts: dict = dataclasses.field(default_factory=dict)
    timings: dict = dataclasses.field(default_factory=dict)
    notes: list = dataclasses.field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.verdicts.values())

    def set(self, key: str, value: bool | None, note: str | None = None):
        # once false, a verdict stays false
        if self.verdicts.get(key) is False:
            return
        self.verdicts[key] = value
        if value is False and note:
            self.notes.append(f"{key}: {note}")

    def to_text(self, timings: bool = False) -> str:
        lines = [f"n={self.n}", f"m={self.m}"]
        for name, w in zip(("stage1", "stage2", "stage3"), self.widths):
            lines.append(f"width_{name}={w}")
        lines.append(f"exact_pathwidth={'na' if self.exact_pathwidth is None else self.exact_pathwidth}")
        lines.append(f"added_edges_stage2={self.added_stage2}")
        lines.append(f"added_edges_stage3={self.added_stage3}")
        for key, value in self.verdicts.items():
            lines.append(f"{key}={'na' if value is None else ('yes' if value else 'no')}")
        for note in self.notes:
            lines.append(f"note={note}")
        if timings:
            for key, value in self.timings.items():
                lines.append(f"time_{key}={value:.3f}")
        lines.append(f"ok={'yes' if self.ok else 'no'}")
        return "\n".join(lines) + "\n"


def _parse_gap(groups) -> GapResult:
    lo, hi, w = groups
    if lo is None:
        return EMPTY_GAP
    return GapResult(False, int(lo), int(hi), int(w))


def _split_trace(lines):
    """Bucket trace lines by stage; returns None entries for malformed input."""
    s1 = None
    s2, s3 = [], []
    s2_done = s3_done = None
    bad = []
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        if m := _S1_DONE.match(line):
            s1 = (int(m[1]), int(m[2]))
        elif m := _S2.match(line):
            s2.append((int(m[1]), int(m[2]), int(m[3]), _parse_gap(m.groups()[3:])))
        elif m := _S2_DONE.match(line):
            s2_done = int(m[1])
        elif m := _S3.match(line):
            seq = tuple(int(t) for t in m[3].split(","))
            s3.append((int(m[1]), int(m[2]), seq, _parse_gap(m.groups()[3:])))
        elif m := _S3_DONE.match(line):
            s3_done = (int(m[1]), int(m[2]))
        else:
            bad.append(line)
    return s1, s2, s2_done, s3, s3_done, bad


class _Replayer:
    """Applies recorded edge additions, checking each decomposition update.

    Small graphs get a full validation after every update; larger ones get the
    local check that the new edge is covered and the inserted vertex's
    occurrences stay contiguous.
    """

    def __init__(self, g: Graph, pd: PathDecomposition, report: PipelineReport, key: str):
        self.edges = set(g.edges)
        self.n = g.n
        self.ref_first, self.ref_last = occurrence_ranges(pd, g.n)
        self.first = list(self.ref_first)
        self.last = list(self.ref_last)
        self.builder = BagBuilder(pd)
        self.report = report
        self.key = key
        self.full = g.n <= SMALL_N

    def apply(self, u: int, v: int, recorded: GapResult) -> bool:
        expected = gap_from_ranges(
            u, (self.ref_first[u], self.ref_last[u]), v, (self.ref_first[v], self.ref_last[v])
        )
        if expected != recorded:
            self.report.set("trace_replay", False, f"edge ({u}, {v}) recorded {recorded}, expected {expected}")
            return False
        self.edges.add((u, v) if u < v else (v, u))
        self.builder.insert(expected)
        if not expected.empty:
            w = expected.insert
            if expected.lo > self.last[w] + 1:
                self.report.set(self.key, False, f"insertion of {w} breaks contiguity")
                return False
            self.last[w] = max(self.last[w], expected.hi)
        if max(self.first[u], self.first[v]) > min(self.last[u], self.last[v]):
            self.report.set(self.key, False, f"edge ({u}, {v}) not covered after update")
            return False
        if self.full:
            verdict = validate_path_decomposition(Graph.from_edges(self.n, self.edges), self.builder.freeze())
            if not verdict.ok:
                self.report.set(self.key, False, verdict.message)
                return False
        return True

    def graph(self) -> Graph:
        return Graph.from_edges(self.n, self.edges)


def _two_components(g: Graph) -> bool:
    bt = blocks_and_cut_vertices(g)
    return all(len(bt.vertex_blocks[x]) == 2 for x in bt.cut_vertices)


def _children_merge_check(res: AugmentResult) -> bool:
    """After each cut vertex is processed its former children form one block."""
    g = res.g
    edges = set(g.edges)
    by_cut: dict = {}
    for u, v, x in res.stage2.added_edges:
        by_cut.setdefault(x, []).append((u, v))
    for x in sorted(res.bt.cut_vertices):
        for u, v in by_cut.get(x, []):
            edges.add((u, v) if u < v else (v, u))
        cur = Graph.from_edges(g.n, edges)
        if cur.component_count([x]) != 2:
            return False
    return True


def _bypass_path_check(res: AugmentResult) -> bool:
    """Each bypass path uses at most one edge of any block of the graph it is added to."""
    g = res.stage2.g_prime
    edges = set(g.edges)
    for (u, v), seq in zip(res.stage3.added_edges, res.stage3.bypass_seq):
        cur = Graph.from_edges(g.n, edges)
        bt = blocks_and_cut_vertices(cur)
        block_of = {}
        for b, es in enumerate(bt.block_edges):
            for e in es:
                block_of[e] = b
        path = (u,) + seq + (v,)
        used = [block_of[(a, b) if a < b else (b, a)] for a, b in zip(path, path[1:])]
        if len(used) != len(set(used)):
            return False
        edges.add((u, v) if u < v else (v, u))
    return True


def verify_pipeline(g: Graph, trace, final_graph: Graph | None = None,
                    final_pd: PathDecomposition | None = None, exact_limit: int = EXACT_N) -> PipelineReport:
    """Replay ``trace`` (text or lines) for input ``g`` and run all pipeline checks."""
    report = PipelineReport(n=g.n, m=g.m)
    lines = trace.splitlines() if isinstance(trace, str) else list(trace)
    t0 = time.perf_counter()
    try:
        res = augment(g)
    except DisconnectedGraphError as exc:
        report.set("connected", False, str(exc))
        return report
    except NotOuterplanarError as exc:
        report.set("outerplanar_input", False, str(exc))
        return report
    report.timings["augment"] = time.perf_counter() - t0
    report.set("connected", True)
    report.set("outerplanar_input", True)
    s1, s2, s3 = res.stage1, res.stage2, res.stage3
    report.widths = res.widths
    report.added_stage2 = len(s2.added_edges)
    report.added_stage3 = len(s3.added_edges)

    # stage 1 structure
    v = validate_nice_tree(g, res.bt, s1.nice_tree)
    report.set("nice_tree", v.ok, v.message)
    report.set("stage1_valid", validate_path_decomposition(g, s1.pd).ok)
    report.set("niceness", len(s1.npd.sequence) == sum(1 for b in range(res.bt.block_count) if res.bt.attach[b] >= 0))
    pw_tree = s1.tree_pd.width
    report.set("stage1_composition_bound", s1.pd.width <= 4 * (pw_tree + 1) - 1)

    # trace replay, stage by stage
    p1, p2, p2_done, p3, p3_done, bad = _split_trace(lines)
    report.set("trace_replay", True)
    if bad:
        report.set("trace_replay", False, f"unrecognized line {bad[0]!r}")
    if p1 != (s1.pd.width, len(s1.pd.bags)):
        report.set("trace_replay", False, "stage-1 summary differs from a fresh run")
    if p2_done != len(p2) or (p3_done is not None and p3_done[0] != len(p3)) or p3_done is None:
        report.set("trace_replay", False, "summary edge counts disagree with the recorded additions")
    if [(u, v, x) for u, v, x, _ in p2] != list(s2.added_edges):
        report.set("trace_replay", False, "stage-2 additions differ from a fresh run")
    if [((u, w), seq) for u, w, seq, _ in p3] != list(zip(s3.added_edges, s3.bypass_seq)):
        report.set("trace_replay", False, "stage-3 additions differ from a fresh run")
    if p3_done is not None and p3_done[1] != len(res.bt_prime.cut_vertices):
        report.set("trace_replay", False, "stage-3 cut vertex count differs")

    report.set("stage2_updates_valid", True)
    rep2 = _Replayer(g, s1.pd, report, "stage2_updates_valid")
    for u, w, x, gp in p2:
        if not rep2.apply(u, w, gp):
            break
    g_prime = rep2.graph()
    pd_prime = rep2.builder.freeze()
    if g_prime != s2.g_prime or pd_prime != s2.pd_prime:
        report.set("trace_replay", False, "replayed stage-2 result differs from a fresh run")
    report.set("stage2_valid", validate_path_decomposition(s2.g_prime, s2.pd_prime).ok)

    report.set("stage3_updates_valid", True)
    rep3 = _Replayer(s2.g_prime, s2.pd_prime, report, "stage3_updates_valid")
    for u, w, seq, gp in p3:
        if not rep3.apply(u, w, gp):
            break
    g2 = rep3.graph()
    pd2 = rep3.builder.freeze()
    if g2 != s3.g_double_prime or pd2 != s3.pd_double_prime:
        report.set("trace_replay", False, "replayed stage-3 result differs from a fresh run")
    report.set("stage3_valid", validate_path_decomposition(s3.g_double_prime, s3.pd_double_prime).ok)
    if final_graph is not None:
        report.set("final_graph_matches", final_graph == s3.g_double_prime)
    if final_pd is not None:
        report.set("final_decomposition_matches", final_pd == s3.pd_double_prime)

    # structure of the intermediate and final graphs
    report.set("supergraphs", g.issubgraph(s2.g_prime) and s2.g_prime.issubgraph(s3.g_double_prime))
    report.set("gap_properties", not s2.violations, "; ".join(map(str, s2.violations[:3])))
    report.set("stage2_bag_growth", bag_growth_ok(s1.pd, s2.pd_prime, res.bt.cut_vertices))
    report.set("outerplanar_prime", check_outerplanar(s2.g_prime).verdict)
    report.set("two_components", _two_components(s2.g_prime))
    report.set("outerplanar_final", check_outerplanar(s3.g_double_prime).verdict)
    if g.n >= 3:
        report.set("biconnected", not blocks_and_cut_vertices(s3.g_double_prime).cut_vertices)
    else:
        report.set("biconnected", None)
    bt2 = res.bt_prime
    report.set("bypass_partition", bypass_partition(s3, bt2.cut_vertices).ok)
    bp = bypass_paths_ok(s2.g_prime, s3, bt2)
    report.set("bypass_paths", bp.ok, bp.message)
    report.set("stage3_bag_growth", gap_growth_ok(s2.pd_prime, s3.pd_double_prime, s3))
    audit = encounter_audit(s3, order_oracle(s2.g_prime, bt2, s3.start), bt2)
    report.set("encounter_audit", audit.ok, audit.message)
    if g.n <= SMALL_N:
        report.set("block_merge", _children_merge_check(res))
        report.set("bypass_block_path", _bypass_path_check(res))

    # width bounds
    w1, w2, w3 = res.widths
    report.set("relative_bound_stage2", w2 <= 2 * w1 + 1)
    report.set("relative_bound_stage3", w3 <= 2 * w2 + 1)
    if g.n <= exact_limit:
        try:
            p = exact_pathwidth(g)
        except SizeGuardError:
            p = None
        report.exact_pathwidth = p
    p = report.exact_pathwidth
    report.set("bound_4p3", None if p is None else w1 <= 4 * p + 3)
    report.set("bound_8p7", None if p is None else w2 <= 8 * p + 7)
    report.set("bound_16p15", None if p is None else w3 <= 16 * p + 15)
    report.timings["verify"] = time.perf_counter() - t0
    return report


def verify_result(res: AugmentResult, exact_limit: int = EXACT_N) -> PipelineReport:
    """Verify a pipeline result through its own trace."""
    return verify_pipeline(res.g, trace_lines(res), exact_limit=exact_limit)

