import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from growdestroy import GenerationParams, Graph, ParameterError, RngStream, build_seed_ring, grow
from growdestroy.generator import (BA, FITNESS, attachment_weights, grow_arrays, grow_reference,
                                   mode_weights, sample_targets)
from growdestroy.graph import connected_components


@pytest.mark.parametrize("m0", [3, 5, 100])
def test_seed_ring(m0):
    g = build_seed_ring(m0, RngStream(1))
    assert g.number_of_nodes() == m0 and g.number_of_edges() == m0
    assert {g.degree(v) for v in g.nodes()} == {2}
    assert len(connected_components(g)) == 1
    assert 2.0 * g.edge_count / g.number_of_nodes() == 2.0
    assert all(0.0 <= g.fitness(v) < 1.0 for v in g.nodes())


def test_seed_ring_too_small():
    with pytest.raises(ParameterError):
        build_seed_ring(2, RngStream(0))


@pytest.mark.parametrize("kwargs", [
    dict(n0=10, m=0), dict(n0=10, m=1.5), dict(n0=4, m=3), dict(n0=10, m=2, p=1.2),
    dict(n0=10, m=2, p=-0.1), dict(n0=10.5, m=2),
])
def test_params_rejected(kwargs):
    with pytest.raises(ParameterError):
        GenerationParams(**kwargs)


def test_no_growth_steps_gives_seed_ring():
    g = grow(GenerationParams(5, 3), RngStream(0))
    assert g.number_of_edges() == 5
    assert 2.0 * g.edge_count / g.number_of_nodes() == 2.0


def _graph(fitness, edges):
    return Graph.from_edges(fitness, np.array(edges))


def test_mode_weights():
    g = _graph([0.5, 0.25, 0.0], [[0, 1], [1, 2], [0, 2], ])
    assert mode_weights(g, BA).tolist() == [2.0, 2.0, 2.0]
    assert mode_weights(g, FITNESS).tolist() == [1.0, 0.5, 0.0]
    with pytest.raises(ParameterError):
        mode_weights(g, "random")


def test_fitness_mode_falls_back_when_all_fitness_zero():
    g = _graph([0.0, 0.0, 0.0], [[0, 1], [1, 2]])
    assert mode_weights(g, FITNESS).tolist() == [1.0, 2.0, 1.0]


def test_attachment_weights_mixture_marginal():
    # averaging the mode-conditional vectors over the mode draw gives the mixture
    g = _graph([0.9, 0.1, 0.5, 0.3], [[0, 1], [1, 2], [2, 3], [0, 3], [0, 2]])
    k = np.array([3, 2, 3, 2], float)
    f = np.array([0.9, 0.1, 0.5, 0.3])
    for p in (0.0, 0.3, 1.0):
        oracle = p * k / k.sum() + (1 - p) * f * k / (f * k).sum()
        ba = mode_weights(g, BA) / mode_weights(g, BA).sum()
        fw = mode_weights(g, FITNESS) / mode_weights(g, FITNESS).sum()
        assert np.allclose(p * ba + (1 - p) * fw, oracle, atol=1e-15)
        w = attachment_weights(g, p, RngStream(0))
        assert w.sum() == pytest.approx(1.0)
        assert any(np.allclose(w, x) for x in (ba, fw))


def test_attachment_weights_need_edges():
    g = Graph()
    g.add_node(0.5)
    with pytest.raises(ParameterError):
        attachment_weights(g, 0.5, RngStream(0))


def test_sample_targets_distinct_and_padded():
    r = RngStream(4)
    for _ in range(200):
        t = sample_targets([0.0, 1.0, 0.0, 0.0, 3.0], 4, r)
        assert len(set(t)) == 4
        assert set(t[:2]) == {1, 4}
    with pytest.raises(ParameterError):
        sample_targets([1.0, 1.0], 3, r)


def test_first_attachment_matches_probabilities():
    # m = 1: the fourth node links to one of the three ring nodes (degree 2 each);
    # per trial the oracle is p/3 + (1 - p) f_i / sum(f)
    for p in (0.0, 0.3, 1.0):
        trials, hits, expect, var = 6000, np.zeros(3), np.zeros(3), np.zeros(3)
        for s in range(trials):
            fit, edges = grow_arrays(GenerationParams(4, 1, p), RngStream(s))
            pr = p / 3 + (1 - p) * fit[:3] / fit[:3].sum()
            hits[edges[-1, 0]] += 1
            expect += pr
            var += pr * (1 - pr)
        z = (hits - expect) / np.sqrt(var)
        assert np.all(np.abs(z) < 4.0), (p, z)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**63), n0=st.integers(3, 300), m=st.integers(1, 5),
       p=st.floats(0, 1), per_link=st.booleans())
def test_grow_invariants(seed, n0, m, p, per_link):
    n0 = max(n0, m + 2)
    params = GenerationParams(n0, m, p, per_link)
    fit, edges = grow_arrays(params, RngStream(seed))
    g = Graph.from_edges(fit, edges)  # rejects self-loops and duplicate edges
    assert g.number_of_nodes() == n0
    assert g.number_of_edges() == params.expected_edges == m + 2 + (n0 - m - 2) * m
    assert len(connected_components(g)) == 1
    assert np.all((fit >= 0) & (fit < 1))
    grown = edges[m + 2:]
    # every new node links to m strictly older nodes
    assert np.all(grown[:, 0] < grown[:, 1])
    assert np.array_equal(np.bincount(grown[:, 1], minlength=n0)[m + 2:], np.full(n0 - m - 2, m))


@pytest.mark.parametrize("p", [0.0, 0.3, 1.0])
@pytest.mark.parametrize("per_link", [False, True])
def test_kernel_matches_reference_composition(p, per_link):
    params = GenerationParams(150, 3, p, per_link)
    a = grow(params, RngStream(21))
    b = grow_reference(params, RngStream(21))
    assert list(a.edges()) == list(b.edges())
    assert [a.fitness(v) for v in a.nodes()] == [b.fitness(v) for v in b.nodes()]


def test_grow_deterministic():
    params = GenerationParams(2000, 3, 0.5)
    a, b = grow_arrays(params, RngStream(5)), grow_arrays(params, RngStream(5))
    assert np.array_equal(a[1], b[1]) and np.array_equal(a[0], b[0])
    assert not np.array_equal(a[1], grow_arrays(params, RngStream(6))[1])


def test_average_degree_closed_form():
    params = GenerationParams(3000, 3, 0.5)
    g = grow(params, RngStream(0))
    oracle = 2 * (5 + (3000 - 5) * 3) / 3000
    assert math.isclose(2 * g.edge_count / g.number_of_nodes(), oracle, abs_tol=1e-12)
