import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from growdestroy import DomainError, Graph, PreconditionError, connected_components, local_clustering
from growdestroy.graph import clustering_array, read_graph, write_edge_list, write_node_table


def path(n):
    g = Graph()
    for _ in range(n):
        g.add_node(0.5)
    for i in range(n - 1):
        g.add_edge(i, i + 1)
    return g


@st.composite
def graphs(draw, max_nodes=25):
    n = draw(st.integers(1, max_nodes))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    edges = sorted({(min(u, v), max(u, v)) for u, v in pairs if u != v})
    fit = draw(st.lists(st.floats(0, 1), min_size=n, max_size=n))
    g = Graph.from_edges(fit, np.array(edges, dtype=np.int64).reshape(-1, 2))
    dead = draw(st.sets(st.integers(0, n - 1), max_size=n // 2))
    g.remove_nodes_from(sorted(dead))
    return g


def test_add_node_ids_are_dense():
    g = Graph()
    assert [g.add_node(0.1) for _ in range(4)] == [0, 1, 2, 3]
    assert g.number_of_nodes() == 4 and g.number_of_edges() == 0


@pytest.mark.parametrize("f", [-0.1, 1.5, math.nan])
def test_fitness_outside_unit_interval(f):
    with pytest.raises(DomainError):
        Graph().add_node(f)


def test_edge_preconditions():
    g = path(3)
    with pytest.raises(PreconditionError):
        g.add_edge(1, 1)
    with pytest.raises(PreconditionError):
        g.add_edge(0, 1)
    with pytest.raises(PreconditionError):
        g.add_edge(0, 7)
    g.remove_node(2)
    with pytest.raises(PreconditionError):
        g.add_edge(0, 2)
    with pytest.raises(PreconditionError):
        g.remove_node(2)


def test_from_edges_rejects_bad_input():
    with pytest.raises(PreconditionError):
        Graph.from_edges([0.1, 0.2], [[0, 1], [1, 0]])
    with pytest.raises(PreconditionError):
        Graph.from_edges([0.1, 0.2], [[0, 0]])


def test_remove_node_drops_incident_edges():
    g = path(4)
    g.remove_node(1)
    assert g.number_of_nodes() == 3
    assert list(g.edges()) == [(2, 3)]
    assert g.degree(0) == 0
    assert 1 not in g and not g.has_node(1)
    assert g.id_bound == 4


def test_edges_sorted_and_oriented():
    g = Graph.from_edges([0.5] * 4, [[3, 0], [2, 1], [1, 0]])
    assert list(g.edges()) == [(0, 1), (0, 3), (1, 2)]


def test_copy_is_independent():
    g = path(3)
    h = g.copy()
    h.remove_node(0)
    assert g.number_of_nodes() == 3 and h.number_of_nodes() == 2


def test_components_numbered_by_smallest_id():
    g = Graph.from_edges([0.5] * 6, [[4, 5], [1, 2], [2, 3]])
    cc = connected_components(g)
    assert cc.sizes == (1, 3, 2)
    assert [cc.component_of(v) for v in range(6)] == [0, 1, 1, 1, 2, 2]


def test_local_clustering_examples():
    tri = Graph.from_edges([0.5] * 3, [[0, 1], [1, 2], [0, 2]])
    assert [local_clustering(tri, v) for v in range(3)] == [1.0, 1.0, 1.0]
    star = Graph.from_edges([0.5] * 4, [[0, 1], [0, 2], [0, 3]])
    assert local_clustering(star, 0) == 0.0 and local_clustering(star, 1) == 0.0
    # 4-cycle plus one chord: chord ends see 2 of 3 neighbor pairs linked
    g = Graph.from_edges([0.5] * 4, [[0, 1], [1, 2], [2, 3], [0, 3], [0, 2]])
    assert local_clustering(g, 0) == pytest.approx(2 / 3)
    assert local_clustering(g, 1) == 1.0


def test_edge_list_roundtrip_after_removal(tmp_path):
    g = Graph.from_edges([0.1, 0.25, 0.3, 1 / 3, 0.9],
                         [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]])
    g.remove_node(2)
    write_edge_list(g, tmp_path / "e.txt")
    write_node_table(g, tmp_path / "n.txt")
    h = read_graph(tmp_path / "e.txt", tmp_path / "n.txt")
    assert h.nodes() == g.nodes()
    assert list(h.edges()) == list(g.edges())
    assert [h.fitness(v) for v in h.nodes()] == [g.fitness(v) for v in g.nodes()]


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_handshake_and_symmetry(g):
    degs = [g.degree(v) for v in g.nodes()]
    assert sum(degs) == 2 * g.number_of_edges()
    for u, v in g.edges():
        assert u < v
        assert g.has_edge(v, u) and v in g.neighbors(u) and u in g.neighbors(v)


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_removal_drops_exactly_degree_edges(g):
    for v in g.nodes()[:3]:
        before, k = g.number_of_edges(), g.degree(v)
        g.remove_node(v)
        assert g.number_of_edges() == before - k


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_csr_matches_adjacency(g):
    indptr, indices, alive = g.to_csr()
    for v in range(g.id_bound):
        row = indices[indptr[v]:indptr[v + 1]].tolist()
        if g.has_node(v):
            assert alive[v] == 1
            assert row == sorted(g.neighbors(v))
        else:
            assert alive[v] == 0 and row == []


def _bfs_components(g):
    seen, sizes = set(), []
    for s in g.nodes():
        if s in seen:
            continue
        seen.add(s)
        queue, size = [s], 0
        while queue:
            v = queue.pop()
            size += 1
            for u in g.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        sizes.append(size)
    return sizes


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_components_partition_live_nodes(g):
    cc = connected_components(g)
    assert sum(cc.sizes) == g.number_of_nodes()
    assert list(cc.sizes) == _bfs_components(g)
    for u, v in g.edges():
        assert cc.component_of(u) == cc.component_of(v)


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_clustering_kernel_matches_set_version(g):
    arr = clustering_array(g)
    for v in g.nodes():
        c = local_clustering(g, v)
        assert 0.0 <= c <= 1.0
        assert arr[v] == pytest.approx(c)
