from hypothesis import given

from conftest import BOWTIE, complete, cycle, outerplanar_graphs, path
from opaug.generate import SplitMix64, generate, random_spec
from opaug.decomposition import format_path_decomposition, parse_path_decomposition
from opaug.graph import Graph
from opaug.pipeline import augment, format_trace, trace_lines
from opaug.verify import verify_pipeline, verify_result


def report_map(report):
    return dict(line.split("=", 1) for line in report.to_text().splitlines())


def test_path_trace_text():
    res = augment(path(3))
    assert res.g_final == cycle(3)
    assert format_trace(res) == (
        "stage1 done width=2 bags=3\n"
        "stage2 done edges=0\n"
        "stage3 add 0 2 bypass 1 gap empty\n"
        "stage3 done edges=1 cutvertices=1\n"
    )


def test_bowtie_all_yes():
    report = verify_result(augment(BOWTIE))
    assert report.ok
    values = report_map(report)
    assert values["ok"] == "yes"
    assert all(v in ("yes", "na") for k, v in values.items() if k in report.verdicts)
    assert report.exact_pathwidth == 2


def test_biconnected_input_report():
    g = cycle(7)
    report = verify_result(augment(g))
    assert report.ok
    assert report.added_stage2 == report.added_stage3 == 0
    assert len(set(report.widths)) == 1


def test_tampered_edge_detected():
    g = path(3)
    lines = trace_lines(augment(g))
    tampered = [line.replace("stage3 add 0 2", "stage3 add 2 0") for line in lines]
    report = verify_pipeline(g, tampered)
    assert not report.ok
    assert report.verdicts["trace_replay"] is False


def test_tampered_gap_detected():
    g = Graph.from_edges(8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)])
    lines = trace_lines(augment(g))
    gap_line = next(i for i, line in enumerate(lines) if "inserted" in line)
    lines[gap_line] = lines[gap_line].rsplit(" inserted", 1)[0].rsplit(" ", 1)[0] + " 1..1 inserted 0"
    assert not verify_pipeline(g, lines).ok


def test_garbage_line_detected():
    g = path(4)
    lines = trace_lines(augment(g)) + ["stage4 add 1 2"]
    report = verify_pipeline(g, lines)
    assert report.verdicts["trace_replay"] is False


def test_bad_input_graphs():
    assert verify_pipeline(complete(4), []).verdicts == {"outerplanar_input": False}
    assert verify_pipeline(Graph.from_edges(3, [(0, 1)]), []).verdicts == {"connected": False}


def test_final_outputs_compared():
    g = BOWTIE
    res = augment(g)
    pd = parse_path_decomposition(format_path_decomposition(res.pd_final))
    good = verify_pipeline(g, trace_lines(res), final_graph=res.g_final, final_pd=pd)
    assert good.verdicts["final_graph_matches"] and good.verdicts["final_decomposition_matches"]
    bad = verify_pipeline(g, trace_lines(res), final_graph=g)
    assert bad.verdicts["final_graph_matches"] is False


def test_timings_only_on_request():
    report = verify_result(augment(path(5)))
    assert "time_" not in report.to_text()
    assert "time_verify=" in report.to_text(timings=True)


def test_sticky_false():
    report = verify_result(augment(path(3)))
    report.set("x", False)
    report.set("x", True)
    assert report.verdicts["x"] is False and not report.ok


@given(outerplanar_graphs(70))
def test_reports_ok_on_generated(g):
    assert verify_result(augment(g), exact_limit=10).ok


def test_full_verdicts_on_ten_thousand_instances():
    rng = SplitMix64(8080)
    failed = []
    for _ in range(10_000):
        spec = random_spec(rng, 200)
        report = verify_result(augment(generate(spec)))
        if not report.ok:
            failed.append((spec, report.notes[:2]))
    assert not failed, failed[:3]
