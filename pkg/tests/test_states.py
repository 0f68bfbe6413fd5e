from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gpa_lab import gpa as G
from gpa_lab import matcat as M
from gpa_lab.corpus import corpus_graph
from gpa_lab.errors import EmptyBlock, MalformedInput, WrongBoxDegree
from gpa_lab.graph import MINUS, PLUS
from gpa_lab.grading import from_ratios, lopsided_pi, standard_pi, trivial_pi
from gpa_lab.states import (
    Partition,
    PartitionState,
    check_evaluable,
    check_spherical,
    gram_matrix,
    nondegeneracy_gram,
    parse_partition,
    simple_witnesses,
    spherical_state,
    state_from_ratios,
    state_ratios,
)

from conftest import pf_of, weights


def solve_spherical_state(pi, r: int) -> np.ndarray:
    """Independent oracle: null space of psi(tr_L id_E) - psi(tr_R id_E) over all simples, normalized."""
    rows = []
    for u in range(r):
        for v in range(r):
            c = M.simple(r, u, v)
            p = M.balanced_duality(c, pi)
            rows.append((M.trace_left(M.identity(c), p) - M.trace_right(M.identity(c), p)).real)
    _, s, vt = np.linalg.svd(np.array(rows))
    # one-dimensional solution space: the state is unique
    assert s[-1] < 1e-12 * s[0] and s[-2] > 1e-8 * s[0]
    null = vt[-1]
    return null / null.sum()


@given(st.integers(2, 5).flatmap(weights))
def test_spherical_state_matches_linear_system(pi):
    psi = spherical_state(pi, Partition.trivial(pi.r))
    assert np.max(np.abs(psi.values - solve_spherical_state(pi, pi.r))) < 1e-9


def test_trivial_everything_uniform():
    psi = spherical_state(trivial_pi(4), Partition.trivial(4))
    assert np.all(psi.values == 0.25)


def test_a3_standard_pm_state_exact():
    g = corpus_graph("A3")
    psi = spherical_state(standard_pi(pf_of(g)), Partition.plus_minus(g))
    assert psi.values.tolist() == [0.5, 0.5, 1.0]


def test_a4_state_is_lambda_squared():
    g = corpus_graph("A4")
    pf = pf_of(g)
    psi = spherical_state(standard_pi(pf), Partition.plus_minus(g))
    assert np.max(np.abs(psi.values - pf.lam**2)) < 1e-12


def test_spherical_on_random_endomorphisms(graph, rng):
    pi = standard_pi(pf_of(graph))
    for part in (Partition.trivial(graph.r), Partition.plus_minus(graph)):
        psi = spherical_state(pi, part)
        samples = [M.random_morphism(c, c, rng) for c in (M.alt_power(graph, 2, PLUS), M.alt_power(graph, 2, MINUS))]
        assert check_spherical(psi, pi, samples + simple_witnesses(graph.r)).ok


def test_lopsided_needs_trivial_partition(graph):
    pf = pf_of(graph)
    pi = lopsided_pi(pf)
    assert check_spherical(spherical_state(pi, Partition.trivial(graph.r)), pi, simple_witnesses(graph.r)).ok
    res = check_spherical(spherical_state(pi, Partition.plus_minus(graph)), pi, simple_witnesses(graph.r))
    assert res.ok == (abs(pf.d - 1) < 1e-12)


def test_uniform_state_fails_for_nontrivial_pi():
    pi = from_ratios([2.0, 3.0])
    psi = PartitionState(Partition.trivial(3), np.full(3, 1 / 3))
    res = check_spherical(psi, pi, simple_witnesses(3))
    assert not res.ok and res.residual > 1e-3


def test_zero_morphism_is_balanced():
    pi = from_ratios([2.0])
    psi = PartitionState(Partition.trivial(2), np.array([0.5, 0.5]))
    c = M.simple(2, 0, 1)
    assert check_spherical(psi, pi, [M.zero_morphism(c, c)]).ok


def test_unique_among_perturbations(rng):
    g = corpus_graph("A5")
    pi = standard_pi(pf_of(g))
    part = Partition.trivial(g.r)
    psi = spherical_state(pi, part)
    for _ in range(20):
        vals = psi.values * np.exp(rng.uniform(-0.3, 0.3, g.r))
        other = PartitionState(part, vals / vals.sum())
        assert not check_spherical(other, pi, simple_witnesses(g.r)).ok


@given(st.lists(st.floats(0.01, 100.0), min_size=2, max_size=5))
def test_ratio_bijection(raw):
    part = Partition.trivial(len(raw))
    psi = state_from_ratios(part, [raw])
    back = state_from_ratios(part, state_ratios(psi))
    assert np.max(np.abs(back.values - psi.values)) <= 4 * np.finfo(float).eps


def test_partition_validation():
    with pytest.raises(EmptyBlock):
        Partition(2, ((0, 1), ()))
    with pytest.raises(MalformedInput):
        Partition(3, ((0, 1),))
    with pytest.raises(MalformedInput):
        parse_partition("thirds", corpus_graph("A3"))
    with pytest.raises(MalformedInput):
        PartitionState(Partition.trivial(2), np.array([0.5, 0.6]))


def test_evaluable():
    g = corpus_graph("A3")
    assert check_evaluable({PLUS: [G.unit_box(g, PLUS)]})
    full = [G.vertex_box(g, u) for u in g.v_plus]
    assert not check_evaluable({PLUS: full})
    with pytest.raises(WrongBoxDegree):
        check_evaluable({PLUS: [G.identity_box(g, 1)]})


def test_temperley_lieb_closures_are_scalars(graph):
    pi = standard_pi(pf_of(graph))
    spans = {}
    for s in (PLUS, MINUS):
        es = [G.jones_projection(graph, pi, i, 3, s) for i in (1, 2)]
        words = es + [es[0] @ es[1], es[1] @ es[0], G.identity_box(graph, 3, s)]
        spans[s] = [G.right_trace(w, pi) for w in words]
    assert check_evaluable(spans)


def test_gram_matches_brute_force(rng):
    g = corpus_graph("A4")
    pi = standard_pi(pf_of(g))
    psi = spherical_state(pi, Partition.plus_minus(g))
    c = M.alt_power(g, 2, MINUS)
    pair = M.balanced_duality(c, pi)
    units = []
    for a, b in c.blocks():
        n = c.dim(a, b)
        for i in range(n):
            for j in range(n):
                m = np.zeros((n, n))
                m[i, j] = 1
                units.append(M.MatMorphism(c, c, {(a, b): m}))
    brute = np.array([[psi(M.trace_left(M.dagger(h) @ f, pair)) for h in units] for f in units])
    assert np.max(np.abs(brute - gram_matrix(c, pair, psi))) < 1e-12


def test_nondegeneracy(graph):
    pi = standard_pi(pf_of(graph))
    psi = spherical_state(pi, Partition.plus_minus(graph))
    c = M.simple(graph.r, 0, graph.r - 1)
    assert nondegeneracy_gram(c, M.balanced_duality(c, pi), psi) > 0
    c = M.alt_power(graph, 2, PLUS)
    assert nondegeneracy_gram(c, M.balanced_duality(c, pi), psi) > 1e-6


def test_degenerate_state():
    g = corpus_graph("A3")
    pi = standard_pi(pf_of(g))
    psi = PartitionState(Partition.plus_minus(g), np.array([1.0, 0.0, 1.0]))
    c = M.alt_power(g, 2, PLUS)
    assert nondegeneracy_gram(c, M.balanced_duality(c, pi), psi) < 1e-12
