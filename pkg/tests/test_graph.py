"""Co-author graph construction, BFS distances, decay, display pruning."""

import math
import random

import pytest

from citekin.graph import (BEYOND, CoauthorGraph, GraphConfig, bfs_distance,
                           build_graph, edge_strength, prune_for_display)

from helpers import TARGET, author, work


def brute_force_distances(edges: set[tuple[str, str]], root: str,
                          nodes: set[str]) -> dict[str, int]:
    """Floyd-Warshall style relaxation; independent of the BFS under test."""
    INF = 10 ** 6
    dist = {(a, b): (0 if a == b else INF) for a in nodes for b in nodes}
    for a, b in edges:
        dist[(a, b)] = 1
        dist[(b, a)] = 1
    for k in nodes:
        for i in nodes:
            for j in nodes:
                if dist[(i, k)] + dist[(k, j)] < dist[(i, j)]:
                    dist[(i, j)] = dist[(i, k)] + dist[(k, j)]
    return {n: dist[(root, n)] for n in nodes if dist[(root, n)] < INF}


def cfg(depth=2, reference_year=2024, decay_rate=0.1):
    return GraphConfig(depth=depth, decay_rate=decay_rate,
                       reference_year=reference_year)


class TestEdgeStrength:
    def test_recent_collaboration_keeps_full_shared_count(self):
        assert edge_strength(3, 0) == 3.0

    def test_half_life_is_ln2_over_rate(self):
        # 1 shared paper at delta-t = ln2/0.1 (about 6.93 years) halves
        assert edge_strength(1, math.log(2) / 0.1) == pytest.approx(0.5, abs=1e-9)

    def test_strictly_decreasing_and_halving(self):
        rate = 0.1
        half_life = math.log(2) / rate
        previous = edge_strength(4, 0, rate)
        for k in range(1, 6):
            current = edge_strength(4, k * half_life, rate)
            assert current < previous
            assert current == pytest.approx(previous / 2, abs=1e-9)
            previous = current

    def test_negative_years_clamped(self):
        assert edge_strength(2, -5) == 2.0


class TestBuildGraph:
    def test_single_work_makes_complete_triangle(self):
        works = [work("W1", 2024, author(TARGET), author("A2"), author("A3"))]
        graph = build_graph(works, TARGET, cfg())
        assert set(graph.names) == {TARGET, "A2", "A3"}
        assert len(graph.edges) == 3
        for edge in graph.edges.values():
            assert edge.shared_papers == 1

    def test_shared_papers_aggregate_and_strength(self):
        works = [work(f"W{i}", 2024, author(TARGET), author("A2")) for i in range(3)]
        graph = build_graph(works, TARGET, cfg(reference_year=2024))
        edge = graph.edges[(TARGET, "A2")]
        assert edge.shared_papers == 3
        assert edge.last_collaboration_year == 2024
        assert edge.strength == pytest.approx(3.0)

    def test_last_collaboration_year_is_latest(self):
        works = [work("W1", 2010, author(TARGET), author("A2")),
                 work("W2", 2020, author(TARGET), author("A2"))]
        graph = build_graph(works, TARGET, cfg(reference_year=2024))
        edge = graph.edges[(TARGET, "A2")]
        assert edge.last_collaboration_year == 2020
        assert edge.strength == pytest.approx(2 * math.exp(-0.1 * 4))

    def test_no_self_loops(self):
        works = [work("W1", 2024, author(TARGET), author("A2"))]
        graph = build_graph(works, TARGET, cfg())
        assert all(e.a != e.b for e in graph.edges.values())

    def test_target_absent_yields_lone_root(self):
        graph = build_graph([], TARGET, cfg())
        assert graph.node_ids == [TARGET]
        assert graph.distance(TARGET) == 0

    def test_depth_limits_membership(self):
        # chain T - A2 - A3 - A4 via expansion works
        own = [work("W1", 2024, author(TARGET), author("A2"))]
        expansion = [work("W2", 2024, author("A2"), author("A3")),
                     work("W3", 2024, author("A3"), author("A4"))]
        depth2 = build_graph(own, TARGET, cfg(depth=2), expansion)
        assert depth2.distance("A3") == 2
        assert depth2.distance("A4") == BEYOND
        depth3 = build_graph(own, TARGET, cfg(depth=3), expansion)
        assert depth3.distance("A4") == 3


class TestBfsDistance:
    def test_root_is_zero(self):
        graph = build_graph([work("W1", 2024, author(TARGET), author("A2"))],
                            TARGET, cfg())
        assert bfs_distance(graph, TARGET, 2) == 0

    def test_direct_coauthor_is_one(self):
        graph = build_graph([work("W1", 2024, author(TARGET), author("A2"))],
                            TARGET, cfg())
        assert bfs_distance(graph, "A2", 2) == 1

    def test_absent_author_is_beyond(self):
        graph = build_graph([work("W1", 2024, author(TARGET), author("A2"))],
                            TARGET, cfg())
        assert bfs_distance(graph, "A999", 2) == BEYOND

    def test_depth_monotonicity(self):
        own = [work("W1", 2024, author(TARGET), author("A2"))]
        expansion = [work("W2", 2024, author("A2"), author("A3")),
                     work("W3", 2024, author("A3"), author("A4"))]
        graph = build_graph(own, TARGET, cfg(depth=3), expansion)
        in_group = {}
        for d in (1, 2, 3):
            in_group[d] = {a for a in graph.names
                           if bfs_distance(graph, a, d) != BEYOND}
        assert in_group[1] <= in_group[2] <= in_group[3]

    def test_matches_brute_force_on_random_graphs(self):
        rng = random.Random(31)
        for _ in range(30):
            n = rng.randint(2, 12)
            ids = [TARGET] + [f"A{i}" for i in range(2, n + 1)]
            # random works of 2-4 authors; target guaranteed in the first
            works, expansion = [], []
            works.append(work("W0", 2024, *[author(a) for a in
                                            [TARGET] + rng.sample(ids[1:], min(2, len(ids) - 1))]))
            for w in range(1, rng.randint(2, 8)):
                members = rng.sample(ids, rng.randint(2, min(4, len(ids))))
                expansion.append(work(f"W{w}", 2024, *[author(a) for a in members]))
            graph = build_graph(works, TARGET, cfg(depth=3), expansion)
            edge_set = {(e.a, e.b) for e in graph.edges.values()}
            expected = brute_force_distances(edge_set, TARGET, set(graph.names))
            for node in graph.names:
                want = expected.get(node)
                if want is None or want > 3:
                    assert bfs_distance(graph, node, 3) == BEYOND
                else:
                    assert bfs_distance(graph, node, 3) == want

    def test_decay_rate_never_changes_distances(self):
        own = [work("W1", 2015, author(TARGET), author("A2"), author("A3"))]
        expansion = [work("W2", 2018, author("A2"), author("A4"))]
        base = build_graph(own, TARGET, cfg(decay_rate=0.1), expansion)
        other = build_graph(own, TARGET, cfg(decay_rate=0.9), expansion)
        for node in base.names:
            assert base.distance(node) == other.distance(node)


def star_graph(n_direct: int, n_transitive_per: int) -> CoauthorGraph:
    """Target with n_direct co-authors, each bringing transitive authors."""
    own = [work(f"WD{i}", 2020 + (i % 5), author(TARGET), author(f"D{i:03d}"))
           for i in range(n_direct)]
    expansion = []
    for i in range(n_direct):
        for j in range(n_transitive_per):
            expansion.append(work(f"WT{i}_{j}", 2015 + (j % 8),
                                  author(f"D{i:03d}"), author(f"T{i:03d}_{j:03d}")))
    return build_graph(own, TARGET, cfg(reference_year=2024), expansion)


class TestPruneForDisplay:
    def test_small_graph_unchanged(self):
        graph = star_graph(5, 3)
        assert prune_for_display(graph) is graph

    def test_cap_applied_with_root_and_ring1_kept(self):
        graph = star_graph(20, 9)  # 1 + 20 + 180 = 201 nodes
        assert len(graph.names) == 201
        pruned = prune_for_display(graph)
        assert len(pruned.names) == 150
        assert pruned.root == TARGET
        assert all(f"D{i:03d}" in pruned.names for i in range(20))
        # edges restricted to retained nodes
        for edge in pruned.edges.values():
            assert edge.a in pruned.names and edge.b in pruned.names

    def test_ring2_ranked_by_anchor_strength(self):
        own = [work("W1", 2024, author(TARGET), author("D1")),
               work("W2", 2024, author(TARGET), author("D2"))]
        # T1 anchored by a strong recent edge, T2 by a weak old one
        expansion = [work("WT1", 2024, author("D1"), author("T1")),
                     work("WT2", 2000, author("D2"), author("T2"))]
        graph = build_graph(own, TARGET, cfg(reference_year=2024), expansion)
        pruned = prune_for_display(graph, max_nodes=4)
        assert "T1" in pruned.names
        assert "T2" not in pruned.names

    def test_ring1_overflow_keeps_all_direct(self, caplog):
        graph = star_graph(160, 0)
        with caplog.at_level("WARNING"):
            pruned = prune_for_display(graph, max_nodes=150)
        assert len(pruned.names) == 161  # root + every direct co-author
        assert any("display cap" in r.message for r in caplog.records)
