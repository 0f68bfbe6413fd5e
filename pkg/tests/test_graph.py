from __future__ import annotations

import itertools
import json

import numpy as np
import pytest
from hypothesis import given

from gpa_lab.corpus import corpus_graph
from gpa_lab.errors import (
    Disconnected,
    DuplicateVertexName,
    EmptyGraph,
    InputError,
    MalformedInput,
    NotBipartite,
    UnknownVertex,
)
from gpa_lab.graph import (
    MINUS,
    PLUS,
    BipartiteGraph,
    adjacency_matrix,
    enumerate_loops,
    enumerate_paths,
    loop_word,
    parse_graph,
    path_from_edges,
    serialize_graph,
)

from conftest import bipartite_graphs


def brute_force_paths(g: BipartiteGraph, base: str, n: int) -> list[tuple[int, ...]]:
    """Every edge word of length n that walks from base without jumping."""
    out = []
    for word in itertools.product(range(len(g.edges)), repeat=n):
        here = base
        ok = True
        for e in word:
            s, t = g.edges[e]
            if here == s:
                here = t
            elif here == t:
                here = s
            else:
                ok = False
                break
        if ok:
            out.append(word)
    return out


def test_a3_adjacency():
    assert adjacency_matrix(corpus_graph("A3")).tolist() == [[1], [1]]


def test_multi_edge_adjacency_counts_parallel_edges():
    assert adjacency_matrix(corpus_graph("multi")).tolist() == [[2, 0], [1, 1]]


def test_parse_accepts_reversed_edges():
    g = parse_graph(json.dumps({"v_plus": ["a"], "v_minus": ["b"], "edges": [["b", "a"]]}))
    assert g.edges == (("a", "b"),)


def test_round_trip(graph):
    assert parse_graph(serialize_graph(graph)) == graph


@pytest.mark.parametrize(
    "doc, exc",
    [
        ("not json", MalformedInput),
        ("[]", MalformedInput),
        ({"v_plus": ["a"], "v_minus": ["b"]}, MalformedInput),
        ({"v_plus": [], "v_minus": [], "edges": []}, EmptyGraph),
        ({"v_plus": ["a"], "v_minus": [], "edges": []}, EmptyGraph),
        ({"v_plus": ["a", "a"], "v_minus": ["b"], "edges": [["a", "b"]]}, DuplicateVertexName),
        ({"v_plus": ["a"], "v_minus": ["a"], "edges": [["a", "a"]]}, DuplicateVertexName),
        ({"v_plus": ["a"], "v_minus": ["b"], "edges": [["a", "c"]]}, UnknownVertex),
        ({"v_plus": ["a", "c"], "v_minus": ["b"], "edges": [["a", "b"], ["a", "c"]]}, NotBipartite),
        ({"v_plus": ["a", "c"], "v_minus": ["b"], "edges": [["a", "b"]]}, Disconnected),
        ({"v_plus": ["a"], "v_minus": ["b"], "edges": []}, Disconnected),
        ({"v_plus": ["a"], "v_minus": ["b"], "edges": [["a"]]}, MalformedInput),
    ],
)
def test_invalid_graphs(doc, exc):
    text = doc if isinstance(doc, str) else json.dumps(doc)
    with pytest.raises(exc):
        parse_graph(text)
    with pytest.raises(InputError):
        parse_graph(text)


@pytest.mark.parametrize("n", range(5))
def test_paths_match_brute_force(graph, n):
    for base in graph.vertices:
        got = [p.edges for p in enumerate_paths(graph, base, n)]
        assert got == brute_force_paths(graph, base, n)


def test_a3_loops():
    g = corpus_graph("A3")
    assert len(enumerate_loops(g, PLUS, 2)) == 2
    assert len(enumerate_loops(g, PLUS, 4)) == 4
    assert len(enumerate_loops(g, MINUS, 2)) == 2
    assert len(enumerate_loops(g, PLUS, 0)) == 2


def test_odd_loop_length_rejected():
    with pytest.raises(MalformedInput):
        enumerate_loops(corpus_graph("A3"), PLUS, 3)


def test_loop_word_reads_p_then_reversed_q():
    g = corpus_graph("A4")
    p = path_from_edges(g, "u1", [0, 1, 1])
    q = path_from_edges(g, "u1", [0, 0, 0])
    assert p.end == q.end == "v1"
    assert loop_word((p, q)) == (0, 1, 1, 0, 0, 0)


def test_path_labels_alternate():
    g = corpus_graph("A4")
    p = path_from_edges(g, "u1", [0, 1, 2])
    assert p.label == ((0, 1), (1, -1), (2, 1))
    q = path_from_edges(g, "v1", [1, 2])
    assert q.label == ((1, -1), (2, 1))


def test_bad_path_rejected():
    g = corpus_graph("A4")
    with pytest.raises(MalformedInput):
        path_from_edges(g, "u1", [2])


@given(bipartite_graphs())
def test_random_graphs_loop_count_is_trace_of_walk_matrix(g):
    # loops of length 2n at + vertices = sum of squared path counts = trace of (A^n)(A^n)^T restricted
    D = adjacency_matrix(g).astype(float)
    A = np.block([[np.zeros((len(g.v_plus),) * 2), D], [D.T, np.zeros((len(g.v_minus),) * 2)]])
    for n in range(3):
        An = np.linalg.matrix_power(A, n)
        expected = sum(An[i] @ An[i] for i in range(len(g.v_plus)))
        assert len(enumerate_loops(g, PLUS, 2 * n)) == round(expected)


def test_unknown_vertex_lookup():
    with pytest.raises(UnknownVertex, match="zz"):
        corpus_graph("A3").index("zz")
