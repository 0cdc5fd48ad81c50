import numpy as np
import pytest

from bruteforce import (
    all_graphs,
    naive_in_triangle,
    naive_is_q_basic,
    naive_max_disjoint_triangles,
    naive_vt,
)
from conftest import complete_graph
from vtergm.errors import DomainError, ResourceCapExceeded, StaleStatsError
from vtergm.graphs import Graph, empty_graph
from vtergm.triangles import (
    TriangleStats,
    count_triangles,
    delta_vt_on_flip,
    is_q_basic,
    max_disjoint_triangles,
    vertices_in_triangles,
)


def test_vt_small_graphs(k3, bowtie):
    assert vertices_in_triangles(k3).v_t == 3
    path = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert vertices_in_triangles(path).v_t == 0
    # brute force over the six bowtie edges: every vertex sits on a triangle
    assert naive_vt(bowtie) == 5
    assert vertices_in_triangles(bowtie).v_t == 5


def test_vt_membership_flags(bowtie):
    stats = vertices_in_triangles(bowtie, with_counts=True)
    assert stats.in_triangle.tolist() == [1, 1, 1, 1, 1]
    assert stats.triangle_degree.tolist() == [1, 1, 2, 1, 1]
    assert count_triangles(bowtie) == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_vt_exhaustive_small(n):
    for g in all_graphs(n):
        assert vertices_in_triangles(g).in_triangle.tolist() == [
            int(b) for b in naive_in_triangle(g)
        ]


def test_vt_exhaustive_n6():
    for g in all_graphs(6):
        assert vertices_in_triangles(g).v_t == naive_vt(g)


def test_vt_strided_n7():
    # every 97th of the 2^21 graphs on 7 vertices
    from bruteforce import graph_from_mask

    for mask in range(0, 1 << 21, 97):
        g = graph_from_mask(7, mask)
        assert vertices_in_triangles(g).v_t == naive_vt(g)


def test_delta_vt_examples(k3, bowtie):
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    stats = vertices_in_triangles(path)
    assert delta_vt_on_flip(path, stats, 0, 2) == 3

    stats = vertices_in_triangles(k3)
    assert delta_vt_on_flip(k3, stats, 0, 1) == -3

    # removing a hinge edge of the bowtie: tips 3, 4 drop out, 2 stays covered
    stats = vertices_in_triangles(bowtie)
    assert delta_vt_on_flip(bowtie, stats, 2, 3) == -2
    assert bowtie.has_edge(2, 3)  # no mutation


def test_delta_vt_random_pairs():
    rng = np.random.default_rng(42)
    checks = 0
    while checks < 10_000:
        n = int(rng.integers(3, 11))
        g = empty_graph(n)
        for _ in range(int(rng.integers(0, 2 * n))):
            u, v = rng.integers(0, n, size=2)
            if u != v and not g.has_edge(u, v):
                g.toggle_edge(u, v)
        stats = vertices_in_triangles(g)
        u, v = rng.integers(0, n, size=2)
        if u == v:
            continue
        before = naive_vt(g)
        g.toggle_edge(u, v)
        after = naive_vt(g)
        g.toggle_edge(u, v)
        assert delta_vt_on_flip(g, stats, u, v) == after - before
        checks += 1


def test_delta_vt_stale_stats_detected(bowtie):
    stale = TriangleStats(in_triangle=np.zeros(5, dtype=np.uint8), v_t=0)
    with pytest.raises(StaleStatsError):
        delta_vt_on_flip(bowtie, stale, 0, 1, debug=True)


def test_packing_small(two_triangles, bowtie):
    assert max_disjoint_triangles(two_triangles, mode="exact") == 2
    assert max_disjoint_triangles(two_triangles, mode="greedy") == 2
    assert max_disjoint_triangles(bowtie, mode="exact") == 1
    assert max_disjoint_triangles(bowtie, mode="greedy") == 1


def test_packing_k6():
    k6 = complete_graph(6)
    assert naive_max_disjoint_triangles(k6) == 2
    assert max_disjoint_triangles(k6, mode="exact") == 2


def test_packing_matches_bruteforce_random():
    rng = np.random.default_rng(5)
    for _ in range(150):
        n = int(rng.integers(3, 9))
        g = empty_graph(n)
        for _ in range(int(rng.integers(0, 3 * n))):
            u, v = rng.integers(0, n, size=2)
            if u != v and not g.has_edge(u, v):
                g.toggle_edge(u, v)
        exact = max_disjoint_triangles(g, mode="exact")
        greedy = max_disjoint_triangles(g, mode="greedy")
        vt = vertices_in_triangles(g).v_t
        assert exact == naive_max_disjoint_triangles(g)
        assert greedy <= exact <= vt // 3 <= g.n // 3


def test_packing_cap_is_explicit():
    # greedy extracts the hub triangle (0,1,2) and blocks both wings, so the
    # search cannot be closed by the incumbent and must actually branch
    g = Graph.from_edges(
        7,
        [(0, 1), (0, 2), (1, 2), (1, 3), (1, 4), (3, 4), (2, 5), (2, 6), (5, 6)],
    )
    assert max_disjoint_triangles(g, mode="greedy") == 1
    assert max_disjoint_triangles(g, mode="exact") == 2
    with pytest.raises(ResourceCapExceeded):
        max_disjoint_triangles(g, mode="exact", node_cap=2)


def test_packing_rejects_unknown_mode(k3):
    with pytest.raises(DomainError):
        max_disjoint_triangles(k3, mode="fast")


def test_is_q_basic_examples(k3):
    assert is_q_basic(k3) == (True, 3)
    # K4 keeps all four vertices covered after deleting any single edge
    assert is_q_basic(complete_graph(4)) == (False, 4)
    tri_plus_edge = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (3, 4)])
    assert is_q_basic(tri_plus_edge) == (False, 3)
    assert is_q_basic(empty_graph(4)) == (True, 0)
    tri_plus_isolated = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2)])
    assert is_q_basic(tri_plus_isolated) == (True, 3)


def test_is_q_basic_exhaustive_n5():
    for g in all_graphs(5):
        assert is_q_basic(g) == naive_is_q_basic(g)
