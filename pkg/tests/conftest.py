import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from opaug.generate import ATTACH_MODES, GenSpec, generate
from opaug.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# filled by test_acceptance.py, echoed once at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def gen_specs(n_max=40, n_min=1):
    return st.builds(
        GenSpec,
        seed=st.integers(0, 2**64 - 1),
        n=st.integers(n_min, n_max),
        block_count_bias=st.floats(0, 1),
        chord_density=st.floats(0, 1),
        max_block_size=st.integers(2, 12),
        attach_mode=st.sampled_from(ATTACH_MODES),
    )


def outerplanar_graphs(n_max=40, n_min=1):
    return gen_specs(n_max, n_min).map(generate)


@st.composite
def simple_graphs(draw, n_max=9, n_min=1):
    n = draw(st.integers(n_min, n_max))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


BOWTIE = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
K23 = Graph.from_edges(5, [(a, b) for a in (0, 1) for b in (2, 3, 4)])
