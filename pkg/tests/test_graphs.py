import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vtergm.errors import DomainError
from vtergm.graphs import Graph, empty_graph


def test_empty_graph_sizes():
    assert empty_graph(1).edge_count == 0
    g = empty_graph(5)
    assert g.edge_count == 0
    assert not g.has_edge(0, 1)


def test_empty_graph_rejects_zero():
    with pytest.raises(DomainError):
        empty_graph(0)


def test_k3_construction(k3):
    assert k3.edge_count == 3
    assert all(k3.degree(v) == 2 for v in range(3))


def test_toggle_add_remove():
    g = empty_graph(3)
    assert g.toggle_edge(0, 1) == "added"
    assert g.has_edge(0, 1) and g.has_edge(1, 0)
    assert g.edge_count == 1
    assert g.toggle_edge(0, 1) == "removed"
    assert not g.has_edge(0, 1)
    assert g.edge_count == 0
    g.toggle_edge(0, 1)
    assert g.toggle_edge(1, 0) == "removed"
    assert not g.has_edge(0, 1)


def test_toggle_rejections():
    g = empty_graph(4)
    with pytest.raises(DomainError):
        g.toggle_edge(1, 1)
    with pytest.raises(DomainError):
        g.toggle_edge(0, 4)
    with pytest.raises(DomainError):
        g.has_edge(-1, 2)


def test_common_neighbors_small(k3, bowtie):
    assert k3.common_neighbors(0, 1) == [2]
    assert empty_graph(6).common_neighbors(2, 5) == []
    # the two pendant-triangle tips of the bowtie share only the hinge
    assert bowtie.common_neighbors(3, 4) == [2]
    assert bowtie.common_neighbors(4, 3) == [2]


def test_edges_iteration(bowtie):
    assert list(bowtie.edges()) == [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]


def test_from_edge_arrays_matches_incremental():
    rng = np.random.default_rng(7)
    n = 80
    us, vs = [], []
    seen = set()
    while len(us) < 150:
        u, v = rng.integers(0, n, size=2)
        if u == v or (min(u, v), max(u, v)) in seen:
            continue
        seen.add((min(u, v), max(u, v)))
        us.append(u)
        vs.append(v)
    bulk = Graph.from_edge_arrays(n, np.array(us), np.array(vs))
    inc = Graph.from_edges(n, zip(us, vs))
    assert bulk == inc
    bulk.validate()


def test_from_edge_arrays_rejects_duplicates():
    with pytest.raises(DomainError):
        Graph.from_edge_arrays(4, np.array([0, 1]), np.array([1, 0]))


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(2, 70),
    flips=st.lists(st.tuples(st.integers(0, 69), st.integers(0, 69)), max_size=60),
)
def test_flip_sequences_keep_cached_count(n, flips):
    g = empty_graph(n)
    trace = []
    for u, v in flips:
        u, v = u % n, v % n
        if u == v:
            continue
        g.toggle_edge(u, v)
        trace.append((u, v))
    assert g.edge_count == g.recount_edges()
    g.validate()
    # involution: replaying the trace in reverse restores the empty graph
    for u, v in reversed(trace):
        g.toggle_edge(u, v)
    assert g.edge_count == 0
    assert g == empty_graph(n)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 100), seed=st.integers(0, 2**32 - 1))
def test_common_neighbors_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    g = empty_graph(n)
    for _ in range(min(3 * n, 120)):
        u, v = rng.integers(0, n, size=2)
        if u != v:
            if not g.has_edge(u, v):
                g.toggle_edge(u, v)
    u, v = 0, n - 1
    assert g.common_neighbors(u, v) == g.common_neighbors(v, u)
