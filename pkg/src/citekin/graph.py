"""Weighted co-authorship graph and hop-distance classification support.

Edge strength decays exponentially with years since the last collaboration
(rate 0.1, a half-life of about 7 years). The strength is audit metadata
only; classification depends purely on BFS hop counts, so changing the decay
rate can never change a label.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field

from .sources import Work

log = logging.getLogger(__name__)

DEFAULT_DECAY_RATE = 0.1
DISPLAY_NODE_CAP = 150

#: Sentinel distance for authors unreachable within the configured depth.
BEYOND = -1


@dataclass(frozen=True)
class CoauthorEdge:
    a: str
    b: str
    shared_papers: int
    last_collaboration_year: int | None
    strength: float


@dataclass
class GraphConfig:
    depth: int = 2
    decay_rate: float = DEFAULT_DECAY_RATE
    reference_year: int = 0

    def __post_init__(self):
        if self.depth not in (1, 2, 3):
            raise ValueError(f"depth must be 1, 2 or 3, got {self.depth}")


@dataclass
class CoauthorGraph:
    root: str
    names: dict[str, str] = field(default_factory=dict)
    edges: dict[tuple[str, str], CoauthorEdge] = field(default_factory=dict)
    _adjacency: dict[str, set[str]] = field(default_factory=dict)
    _distances: dict[str, int] = field(default_factory=dict)

    @property
    def node_ids(self) -> list[str]:
        return sorted(self.names)

    def distance(self, author_id: str) -> int:
        """Hops from the root, or BEYOND if not reached during the build."""
        return self._distances.get(author_id, BEYOND)


def edge_strength(shared_papers: int, years_since: float,
                  decay_rate: float = DEFAULT_DECAY_RATE) -> float:
    if years_since < 0:
        years_since = 0
    return shared_papers * math.exp(-decay_rate * years_since)


def build_graph(works: list[Work], target: str, cfg: GraphConfig,
                expansion_works: list[Work] | None = None) -> CoauthorGraph:
    """Aggregate co-authoring pairs into a weighted undirected graph.

    ``works`` are the target's validated works; ``expansion_works`` are works
    by collaborators discovered while expanding to the configured depth (the
    pipeline fetches them; pure callers may pass a prebuilt list). Works are
    deduplicated by id before pair expansion.
    """
    graph = CoauthorGraph(root=target)
    graph.names[target] = target
    graph._adjacency[target] = set()

    pool: dict[str, Work] = {w.work_id: w for w in works}
    for w in expansion_works or []:
        pool.setdefault(w.work_id, w)

    # (pair) -> [shared count, last year]
    tallies: dict[tuple[str, str], list] = {}
    for work in pool.values():
        authors = sorted({a.author_id: a for a in work.authors}.values(),
                         key=lambda a: a.author_id)
        for author in authors:
            graph.names.setdefault(author.author_id, author.display_name or author.author_id)
            if author.display_name:
                graph.names[author.author_id] = author.display_name
        for i in range(len(authors)):
            for j in range(i + 1, len(authors)):
                key = (authors[i].author_id, authors[j].author_id)
                tally = tallies.setdefault(key, [0, None])
                tally[0] += 1
                year = work.publication_year
                if year is not None and (tally[1] is None or year > tally[1]):
                    tally[1] = year

    for (a, b), (shared, last_year) in tallies.items():
        years_since = 0.0 if last_year is None else max(0, cfg.reference_year - last_year)
        graph.edges[(a, b)] = CoauthorEdge(a, b, shared, last_year,
                                           edge_strength(shared, years_since, cfg.decay_rate))
        graph._adjacency.setdefault(a, set()).add(b)
        graph._adjacency.setdefault(b, set()).add(a)

    graph._distances = _bfs_from_root(graph, cfg.depth)

    # authors beyond the depth are not part of the collaborative network
    reachable = set(graph._distances)
    for author_id in list(graph.names):
        if author_id not in reachable:
            del graph.names[author_id]
    graph.edges = {k: e for k, e in graph.edges.items()
                   if e.a in reachable and e.b in reachable}
    graph._adjacency = {a: {b for b in nbrs if b in reachable}
                        for a, nbrs in graph._adjacency.items() if a in reachable}
    return graph


def _bfs_from_root(graph: CoauthorGraph, depth: int) -> dict[str, int]:
    distances = {graph.root: 0}
    queue = deque([graph.root])
    while queue:
        current = queue.popleft()
        d = distances[current]
        if d >= depth:
            continue
        for neighbor in sorted(graph._adjacency.get(current, ())):
            if neighbor not in distances:
                distances[neighbor] = d + 1
                queue.append(neighbor)
    return distances


def bfs_distance(graph: CoauthorGraph, author_id: str, depth: int) -> int:
    """Hop count from the root within ``depth``, or BEYOND."""
    d = graph.distance(author_id)
    if d == BEYOND or d > depth:
        return BEYOND
    return d


def prune_for_display(graph: CoauthorGraph,
                      max_nodes: int = DISPLAY_NODE_CAP) -> CoauthorGraph:
    """Cap the graph for rendering; never used for classification.

    The root and every distance-1 node are always kept; remaining slots go to
    farther nodes ranked by the strength of their strongest edge to an
    already-retained node.
    """
    if len(graph.names) <= max_nodes:
        return graph

    retained = {graph.root}
    ring1 = [a for a in graph.node_ids if graph.distance(a) == 1]
    retained.update(ring1)
    if len(retained) > max_nodes:
        log.warning(
            "display cap %d exceeded by root + %d direct co-authors; keeping all of them",
            max_nodes, len(ring1))
    else:
        max_distance = max((d for d in graph._distances.values() if d != BEYOND), default=0)
        for ring in range(2, max_distance + 1):
            candidates = [a for a in graph.node_ids if graph.distance(a) == ring]

            def anchor_strength(author_id: str) -> float:
                best = 0.0
                for neighbor in graph._adjacency.get(author_id, ()):
                    if neighbor in retained:
                        edge = graph.edges.get((author_id, neighbor)) \
                            or graph.edges.get((neighbor, author_id))
                        if edge:
                            best = max(best, edge.strength)
                return best

            candidates.sort(key=lambda a: (-anchor_strength(a), a))
            for author_id in candidates:
                if len(retained) >= max_nodes:
                    break
                retained.add(author_id)

    pruned = CoauthorGraph(root=graph.root)
    pruned.names = {a: n for a, n in graph.names.items() if a in retained}
    pruned.edges = {k: e for k, e in graph.edges.items()
                    if e.a in retained and e.b in retained}
    pruned._adjacency = {a: {b for b in nbrs if b in retained}
                         for a, nbrs in graph._adjacency.items() if a in retained}
    pruned._distances = {a: d for a, d in graph._distances.items() if a in retained}
    return pruned
