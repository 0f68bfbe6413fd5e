from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gpa_lab import gpa as G
from gpa_lab import matcat as M
from gpa_lab.corpus import corpus_graph
from gpa_lab.errors import MalformedInput, NonScalarLoops, ShapeMismatch
from gpa_lab.graph import MINUS, PLUS, enumerate_loops, enumerate_paths, path_from_edges
from gpa_lab.grading import from_ratios, lopsided_pi, standard_pi, trivial_pi
from gpa_lab.verify import fitting_tangles, tangle_oracle

from conftest import bipartite_graphs, conventions, pf_of

TOL = 1e-10


@pytest.mark.parametrize("n", range(5))
def test_box_dim_three_ways(graph, n):
    for s in (PLUS, MINUS):
        d = G.box_dim(graph, n, s)
        assert d == len(enumerate_loops(graph, s, 2 * n)) == M.alt_power(graph, n, s).hom_dim


def test_box_dim_examples(graph):
    a3 = corpus_graph("A3")
    assert G.box_dim(a3, 1, PLUS) == 2
    assert G.box_dim(a3, 2, PLUS) == 4
    assert G.box_dim(graph, 0, PLUS) == len(graph.v_plus)


@given(bipartite_graphs(), st.integers(0, 3))
def test_box_dim_random_graphs(g, n):
    assert G.box_dim(g, n, PLUS) == M.alt_power(g, n, PLUS).hom_dim


def test_matrix_round_trip(graph, rng):
    for n in range(4):
        for s in (PLUS, MINUS):
            x = G.random_box(graph, n, s, rng)
            f = G.to_matrix(x)
            assert G.from_matrix(f, graph, s).coeffs == x.coeffs
            assert G.to_matrix(G.adjoint(x)).dist(M.dagger(f)) == 0


def test_single_loop_is_matrix_unit():
    g = corpus_graph("A3")
    p = path_from_edges(g, "v", [0, 0])
    q = path_from_edges(g, "v", [1, 1])
    f = G.to_matrix(G.loop_element(g, p, q))
    (blk,) = f.nonzero_blocks().values()
    tgt, src = f.target.index(2, 2), f.source.index(2, 2)
    assert blk[tgt[p.label], src[q.label]] == 1 and np.count_nonzero(blk) == 1
    proj = G.to_matrix(G.loop_element(g, p, p))
    assert (proj @ proj).dist(proj) == 0


def test_a3_one_box_is_diagonal():
    g = corpus_graph("A3")
    loops = enumerate_loops(g, PLUS, 2)
    assert all(p == q for p, q in loops)
    f = G.to_matrix(G.identity_box(g, 1, PLUS))
    assert f.dist(M.identity(M.generator(g))) == 0


def test_multiply_matrix_units():
    g = corpus_graph("A4")
    p, q, r = (path_from_edges(g, "u2", e) for e in ([1, 0, 0], [1, 1, 1], [2, 2, 1]))
    assert p.end == q.end == r.end
    x, y = G.loop_element(g, p, q), G.loop_element(g, q, r)
    assert (x @ y).coeffs == {(p, r): 1}
    assert len(G.loop_element(g, p, q) @ G.loop_element(g, r, p)) == 0


def test_multiply_matches_composition(graph, rng):
    for n in range(4):
        x, y = G.random_box(graph, n, PLUS, rng), G.random_box(graph, n, PLUS, rng)
        assert G.to_matrix(x @ y).dist(G.to_matrix(x) @ G.to_matrix(y)) < TOL
        assert G.adjoint(G.adjoint(x)).coeffs == x.coeffs


def test_multiply_shape_mismatch(graph):
    with pytest.raises(ShapeMismatch):
        G.identity_box(graph, 1) @ G.identity_box(graph, 2)


def test_include_examples(rng):
    g = corpus_graph("A3")
    assert G.include(G.identity_box(g, 2)).coeffs == G.identity_box(g, 3).coeffs
    p = path_from_edges(g, "u1", [0])
    assert len(G.include(G.loop_element(g, p, p))) == 2
    x, y = G.random_box(g, 2, MINUS, rng), G.random_box(g, 2, MINUS, rng)
    assert G.include(x @ y).dist(G.include(x) @ G.include(y)) < TOL
    assert G.include(G.adjoint(x)).coeffs == G.adjoint(G.include(x)).coeffs


def test_include_matches_tensor_with_identity(graph, rng):
    X = M.generator(graph)
    for n in range(4):
        for s in (PLUS, MINUS):
            x = G.random_box(graph, n, s, rng)
            nxt = X if M.strand_types(n + 1, s)[-1] == "X" else M.dual_object(X)
            assert G.to_matrix(G.include(x)).dist(M.tensor_mor(G.to_matrix(x), M.identity(nxt))) == 0


@pytest.mark.parametrize("n", range(4))
def test_tangles_match_category(graph, n, rng):
    pis = list(conventions(graph).values()) + [from_ratios(np.exp(rng.uniform(-1, 1, graph.r - 1)))]
    for pi in pis:
        for s in (PLUS, MINUS):
            x = G.random_box(graph, n, s, rng)
            kinds = fitting_tangles(n, s)
            assert kinds
            for kind in kinds:
                lhs = G.to_matrix(G.apply_tangle(x, kind, pi))
                rhs = tangle_oracle(graph, pi, kind, n, s) @ G.to_matrix(x)
                assert lhs.dist(rhs) < TOL


def test_bottom_tangles_match_category(graph, rng):
    pi = lopsided_pi(pf_of(graph))
    x = G.random_box(graph, 2, PLUS, rng)
    # x has bottom strands X, X^dual; feeding coev from below removes them
    y = G.apply_tangle_bottom(x, G.CUP_ABOVE, pi)
    assert G.to_matrix(y).dist(G.to_matrix(x) @ tangle_oracle(graph, pi, G.CUP_ABOVE, 0, PLUS)) < TOL


def test_tangle_wrong_shading_rejected():
    g = corpus_graph("A3")
    pi = trivial_pi(3)
    with pytest.raises(ShapeMismatch):
        G.apply_tangle(G.unit_box(g, PLUS), G.CUP_BELOW, pi)
    with pytest.raises(ShapeMismatch):
        G.apply_tangle(G.identity_box(g, 1, PLUS), G.CAP_ABOVE, pi)
    with pytest.raises(MalformedInput):
        G.apply_tangle(G.unit_box(g, PLUS), "twist", pi)


def test_right_trace_matches_category(graph, rng):
    for pi in conventions(graph).values():
        F = M.BalancedDualFunctor(pi)
        for n in range(1, 4):
            for s in (PLUS, MINUS):
                x = G.random_box(graph, n, s, rng)
                v = G.zero_box_vector(G.right_trace(x, pi))
                t = F.trace_right(G.to_matrix(x))
                for u in graph.vertices:
                    assert abs(v.get(u, 0) - t[graph.index(u)]) < TOL


def test_caps_on_identity_give_right_trace_of_generator():
    g = corpus_graph("A3")
    pi = standard_pi(pf_of(g))
    v = G.zero_box_vector(G.close_right(G.identity_box(g, 1), pi))
    t = M.trace_right(M.identity(M.generator(g)), M.balanced_duality(M.generator(g), pi))
    assert abs(v["u1"] - t[0]) < TOL and abs(v["u2"] - t[1]) < TOL


def test_loop_values_standard_and_lopsided(graph):
    pf = pf_of(graph)
    sh, un = G.loop_values(graph, standard_pi(pf))
    assert np.max(np.abs(sh - pf.d)) < TOL and np.max(np.abs(un - pf.d)) < TOL
    sh, un = G.loop_values(graph, lopsided_pi(pf))
    assert np.max(np.abs(sh - 1)) < TOL and np.max(np.abs(un - pf.d**2)) < TOL


def test_loop_values_trivial_count_edges():
    g = corpus_graph("A3")
    sh, un = G.loop_values(g, trivial_pi(3))
    assert sh.tolist() == [1.0, 1.0] and un.tolist() == [2.0]


def test_loop_values_hand_sum_a3():
    g = corpus_graph("A3")
    pf = pf_of(g)
    lam = dict(zip(g.vertices, pf.lam))
    _, un = G.loop_values(g, standard_pi(pf))
    assert abs(un[0] - (lam["u1"] / lam["v"] + lam["u2"] / lam["v"])) < 1e-12
    assert abs(un[0] - 2**0.5) < 1e-12


def test_loop_values_match_circles(graph, rng):
    pi = from_ratios(np.exp(rng.uniform(-1, 1, graph.r - 1)))
    sh, un = G.loop_values(graph, pi)
    cs, cu = M.closed_circles(M.balanced_duality(M.generator(graph), pi))
    n = len(graph.v_plus)
    assert np.max(np.abs(sh - cs[:n])) < TOL and np.max(np.abs(un - cu[n:])) < TOL


def test_loop_values_gauge_independent(graph, rng):
    pi = standard_pi(pf_of(graph))
    X = M.generator(graph)
    phases = {b: np.exp(2j * np.pi * rng.uniform()) for b in X.blocks()}
    cs, cu = M.closed_circles(M.balanced_duality(X, pi, phases=phases.get))
    sh, un = G.loop_values(graph, pi)
    n = len(graph.v_plus)
    assert np.max(np.abs(sh - cs[:n])) < TOL and np.max(np.abs(un - cu[n:])) < TOL


@pytest.mark.parametrize("name", ["A3", "A4", "A5", "D4", "multi"])
@pytest.mark.parametrize("shading", [PLUS, MINUS])
def test_temperley_lieb(name, shading):
    g = corpus_graph(name)
    pf = pf_of(g)
    pi = standard_pi(pf)
    n = 4
    es = [G.jones_projection(g, pi, i, n, shading) for i in range(1, n)]
    for i, e in enumerate(es):
        assert (e @ e).dist(e) < TOL
        assert G.adjoint(e).dist(e) < TOL
        for j, f in enumerate(es):
            if abs(i - j) == 1:
                assert (e @ f @ e).dist(e * pf.d**-2) < TOL
            elif abs(i - j) > 1:
                assert (e @ f).dist(f @ e) < TOL


def test_jones_projection_matches_cup_cap():
    g = corpus_graph("A4")
    pi = standard_pi(pf_of(g))
    e = G.jones_projection(g, pi, 1, 2)
    # e_1 in degree 2 is coev coev^dag / d on X (x) X^dual
    p = M.balanced_duality(M.generator(g), pi)
    expect = (p.coev @ M.dagger(p.coev)) * (1 / pf_of(g).d)
    assert G.to_matrix(e).dist(expect) < TOL


def test_jones_under_lopsided_is_idempotent(graph):
    pi = lopsided_pi(pf_of(graph))
    for s in (PLUS, MINUS):
        for i in (1, 2):
            e = G.jones_projection(graph, pi, i, 3, s)
            assert (e @ e).dist(e) < TOL


def test_jones_non_scalar_loops():
    g = corpus_graph("A4")
    with pytest.raises(NonScalarLoops):
        G.jones_projection(g, from_ratios([3.0, 0.2, 5.0]), 1, 3)


def test_cstar_norm(graph, rng):
    for n in range(3):
        x = G.random_box(graph, n, PLUS, rng)
        lhs = G.to_matrix(G.adjoint(x) @ x).op_norm()
        rhs = G.to_matrix(x).op_norm() ** 2
        assert abs(lhs - rhs) <= 1e-8 * max(1.0, rhs)


def test_json_round_trip(graph, rng):
    for n in range(3):
        x = G.random_box(graph, n, MINUS, rng)
        y = G.from_json(G.to_json(x), graph)
        assert y.dist(x) == 0
    z = G.apply_tangle(G.unit_box(graph, PLUS), G.CUP_ABOVE, trivial_pi(graph.r))
    assert G.from_json(G.to_json(z), graph).dist(z) == 0


def test_json_rejects_garbage(graph):
    with pytest.raises(MalformedInput):
        G.from_json("{}", graph)
    doc = '{"shading": "+", "n_top": 1, "n_bottom": 1, "terms": [{"loop": [0], "base": "%s", "re": 1}]}'
    with pytest.raises(MalformedInput):
        G.from_json(doc % graph.v_plus[0], graph)


def test_box_element_validation():
    g = corpus_graph("A3")
    p = enumerate_paths(g, "u1", 1)[0]
    q = enumerate_paths(g, "u2", 1)[0]
    with pytest.raises(ShapeMismatch):
        G.loop_element(g, p, q)
    with pytest.raises(ShapeMismatch):
        G.BoxElement(g, PLUS, 1, 2)
