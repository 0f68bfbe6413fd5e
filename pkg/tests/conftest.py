from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gpa_lab.corpus import NAMES, corpus_graph
from gpa_lab.graph import BipartiteGraph, adjacency_matrix
from gpa_lab.grading import from_ratios, lopsided_pi, standard_pi, trivial_pi
from gpa_lab.spectral import perron_frobenius

settings.register_profile("default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []
PLUS_, MINUS_ = "+", "-"


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture(params=NAMES)
def graph(request) -> BipartiteGraph:
    return corpus_graph(request.param)


@pytest.fixture
def a3() -> BipartiteGraph:
    return corpus_graph("A3")


@pytest.fixture
def a4() -> BipartiteGraph:
    return corpus_graph("A4")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


def pf_of(g: BipartiteGraph):
    return perron_frobenius(adjacency_matrix(g))


def conventions(g: BipartiteGraph):
    pf = pf_of(g)
    return {"trivial": trivial_pi(g.r), "standard": standard_pi(pf), "lopsided": lopsided_pi(pf)}


@st.composite
def bipartite_graphs(draw, max_side: int = 3, max_extra: int = 3) -> BipartiteGraph:
    """Random connected bipartite multigraphs: a random spanning tree plus extra edges."""
    n_plus = draw(st.integers(1, max_side))
    n_minus = draw(st.integers(1, max_side))
    plus = [f"u{i}" for i in range(n_plus)]
    minus = [f"v{i}" for i in range(n_minus)]
    # grow a tree by attaching each new vertex to an existing one of the other class
    order = draw(st.permutations(plus[1:] + minus))
    placed = {PLUS_: [plus[0]], MINUS_: []}
    edges = []
    pending = list(order)
    while pending:
        for k, v in enumerate(pending):
            side = PLUS_ if v in plus else MINUS_
            other = placed[MINUS_ if side == PLUS_ else PLUS_]
            if other:
                w = draw(st.sampled_from(other))
                edges.append((v, w) if side == PLUS_ else (w, v))
                placed[side].append(v)
                pending.pop(k)
                break
    for _ in range(draw(st.integers(0, max_extra))):
        edges.append((draw(st.sampled_from(plus)), draw(st.sampled_from(minus))))
    return BipartiteGraph(tuple(plus), tuple(minus), tuple(edges))



def weights(r: int):
    """Strategy for a random positive groupoid weight on r classes."""
    return st.lists(st.floats(-2.0, 2.0), min_size=r - 1, max_size=r - 1).map(lambda xs: from_ratios(np.exp(xs)))
