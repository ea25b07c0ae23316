import dataclasses
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import BOWTIE, cycle, outerplanar_graphs, path
from opaug.decomposition import PathDecomposition, validate_path_decomposition
from opaug.embed import is_outerplanar, rooted_block_tree
from opaug.errors import GraphValidationError
from opaug.graph import Graph, cut_vertices_bruteforce
from opaug.pipeline import augment
from opaug.stage3 import (
    bypass_partition,
    bypass_paths_ok,
    encounter_audit,
    gap_growth_ok,
    order_oracle,
    run_stage3,
)


def recursive_order(bt, v0):
    """Order straight from its recursive definition, one call per block."""
    child = {bt.attach[b]: b for b in range(bt.block_count) if bt.attach[b] >= 0}

    def order(b, v):
        out = [v]
        u = bt.next_in_block(b, v)
        while u != v:
            if u in child:
                out += order(child[u], u)
            out.append(u)
            u = bt.next_in_block(b, u)
        return out

    return tuple(order(bt.root, v0))


def trivial_pd(g):
    return PathDecomposition.from_bags([range(g.n)])


def test_path_of_three():
    g = path(3)
    bt = rooted_block_tree(g)
    assert bt.blocks[bt.root] == (0, 1)
    res = run_stage3(g, bt, trivial_pd(g))
    assert res.start == 0
    assert res.added_edges == ((0, 2),)
    assert res.bypass_seq == ((1,),)
    assert res.g_double_prime == cycle(3)
    # 1 is met on the way down and again when its child block is done
    assert res.encounter_order == (0, 1, 2, 1)
    assert order_oracle(g, bt, 0) == (0, 1, 2, 1) == recursive_order(bt, 0)
    assert encounter_audit(res, order_oracle(g, bt, 0), bt).ok


def test_biconnected_input_untouched():
    g = cycle(4)
    bt = rooted_block_tree(g)
    pd = trivial_pd(g)
    res = run_stage3(g, bt, pd)
    assert res.added_edges == () and res.pd_double_prime == pd and res.g_double_prime == g
    assert order_oracle(g, bt, 0) == (0, 1, 2, 3)
    assert encounter_audit(res, order_oracle(g, bt, 0), bt).ok


def test_tiny_graphs_untouched():
    for g in (Graph.from_edges(1, []), path(2)):
        bt = rooted_block_tree(g)
        res = run_stage3(g, bt, trivial_pd(g))
        assert res.g_double_prime == g and res.added_edges == ()
    assert order_oracle(path(2), rooted_block_tree(path(2)), 0) == (0, 1)


def test_corrupted_events_fail_audit():
    g = path(3)
    bt = rooted_block_tree(g)
    res = run_stage3(g, bt, trivial_pd(g))
    bad = dataclasses.replace(res, events=tuple(e for e in res.events if e != (1, "complete")))
    assert not encounter_audit(bad, res.encounter_order, bt).ok
    assert not encounter_audit(res, (0, 2, 1), bt).ok


def test_unserialized_cut_vertex_rejected():
    # cut vertex 0 has two child blocks when rooted at (0, 4)
    g = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (0, 3), (0, 4)])
    bt = rooted_block_tree(g, root=rooted_block_tree(g).blocks.index((0, 4)))
    with pytest.raises(GraphValidationError):
        run_stage3(g, bt, trivial_pd(g))


def test_start_must_be_non_cut_root_vertex():
    g = path(3)
    with pytest.raises(GraphValidationError):
        run_stage3(g, rooted_block_tree(g), trivial_pd(g), start=1)


def test_bypass_partition_negative():
    res = augment(BOWTIE).stage3
    assert bypass_partition(res, {2}).ok
    assert not bypass_partition(res, {2, 3}).ok
    assert not bypass_partition(dataclasses.replace(res, bypass_seq=((),)), {2}).ok


def test_deep_chain_does_not_recurse():
    limit = sys.getrecursionlimit()
    g = path(limit + 500)
    res = augment(g)
    assert res.g_final == cycle(g.n)


@given(outerplanar_graphs(60))
def test_stage3_contract(g):
    res = augment(g)
    gp, bt2, s3 = res.stage2.g_prime, res.bt_prime, res.stage3
    g2 = s3.g_double_prime
    assert gp.issubgraph(g2)
    assert is_outerplanar(g2)
    if g.n >= 3:
        assert cut_vertices_bruteforce(g2) == set()
    assert validate_path_decomposition(g2, s3.pd_double_prime).ok
    assert s3.pd_double_prime.width <= 2 * res.stage2.pd_prime.width + 1
    assert gap_growth_ok(res.stage2.pd_prime, s3.pd_double_prime, s3)
    assert bypass_partition(s3, bt2.cut_vertices).ok
    assert bypass_paths_ok(gp, s3, bt2).ok
    oracle = order_oracle(gp, bt2, s3.start)
    if g.n > 1:
        assert oracle == recursive_order(bt2, s3.start)
    assert encounter_audit(s3, oracle, bt2).ok


@given(outerplanar_graphs(50, 2), st.data())
def test_any_valid_start_vertex(g, data):
    res = augment(g)
    gp, bt2 = res.stage2.g_prime, res.bt_prime
    starts = [v for v in bt2.blocks[bt2.root] if v not in bt2.cut_vertices]
    start = data.draw(st.sampled_from(starts))
    s3 = run_stage3(gp, bt2, res.stage2.pd_prime, start=start)
    if g.n >= 3:
        assert cut_vertices_bruteforce(s3.g_double_prime) == set()
    assert is_outerplanar(s3.g_double_prime)
    assert validate_path_decomposition(s3.g_double_prime, s3.pd_double_prime).ok
    assert bypass_partition(s3, bt2.cut_vertices).ok
    assert encounter_audit(s3, order_oracle(gp, bt2, start), bt2).ok
