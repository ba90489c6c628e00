"""Synthetic graph databases for experiments and calibration runs.

Two flavors: fully random databases whose labels carry no class signal (the
null case for error-rate studies), and planted databases where one motif is
embedded preferentially into class 1 graphs on top of random background
noise. Generation is deterministic in the seed.
"""

from __future__ import annotations

import random

from .graphs import GraphDatabase, LabeledGraph


def _random_edges(rng: random.Random, num_vertices, num_edge_labels, probability, taken):
    edges = []
    for u in range(num_vertices):
        for v in range(u + 1, num_vertices):
            if (u, v) not in taken and rng.random() < probability:
                edges.append((u, v, rng.randrange(num_edge_labels)))
    return edges


def _balanced_classes(rng: random.Random, num_graphs):
    classes = [1] * (num_graphs // 2) + [0] * (num_graphs - num_graphs // 2)
    rng.shuffle(classes)
    return tuple(classes)


def random_database(
    num_graphs: int,
    seed: int,
    *,
    max_vertices: int = 6,
    num_vertex_labels: int = 3,
    num_edge_labels: int = 2,
    edge_probability: float = 0.5,
) -> GraphDatabase:
    """Independent random graphs with an even, shuffled class split.

    Structure and class labels are drawn independently, so every pattern's
    association with the classes is null by construction.
    """
    if num_graphs < 2:
        raise ValueError("need at least two graphs, one per class")
    rng = random.Random(seed)
    graphs = []
    for gid in range(num_graphs):
        nv = rng.randint(1, max_vertices)
        labels = tuple(rng.randrange(num_vertex_labels) for _ in range(nv))
        edges = _random_edges(rng, nv, num_edge_labels, edge_probability, frozenset())
        graphs.append(LabeledGraph(gid, labels, tuple(edges)))
    return GraphDatabase.from_graphs(tuple(graphs), _balanced_classes(rng, num_graphs))


def motif_graph(motif_size: int, num_vertex_labels: int) -> LabeledGraph:
    """The planted pattern: a path with cycling vertex labels, edge label 0."""
    labels = tuple(i % num_vertex_labels for i in range(motif_size))
    edges = tuple((i, i + 1, 0) for i in range(motif_size - 1))
    return LabeledGraph(0, labels, edges)


def planted_database(
    num_graphs: int,
    seed: int,
    *,
    motif_size: int = 4,
    carrier_rate: float = 0.9,
    leak_rate: float = 0.1,
    background_vertices: int = 8,
    num_vertex_labels: int = 6,
    num_edge_labels: int = 2,
    edge_probability: float = 0.15,
) -> GraphDatabase:
    """Random background graphs with a motif planted mostly into class 1.

    Carriers receive the motif's vertices and edges verbatim, so it occurs in
    them as a subgraph regardless of the noise drawn around it.
    """
    if num_graphs < 2:
        raise ValueError("need at least two graphs, one per class")
    if not 1 <= motif_size <= background_vertices:
        raise ValueError("motif must fit inside the background vertex count")
    rng = random.Random(seed)
    classes = _balanced_classes(rng, num_graphs)
    motif = motif_graph(motif_size, num_vertex_labels)
    graphs = []
    for gid in range(num_graphs):
        rate = carrier_rate if classes[gid] == 1 else leak_rate
        carries = rng.random() < rate
        if carries:
            labels = list(motif.vertex_labels)
            edges = list(motif.edges)
        else:
            labels = [rng.randrange(num_vertex_labels) for _ in range(motif_size)]
            edges = []
        labels += [
            rng.randrange(num_vertex_labels)
            for _ in range(background_vertices - motif_size)
        ]
        taken = frozenset((u, v) for u, v, _ in edges)
        edges += _random_edges(rng, len(labels), num_edge_labels, edge_probability, taken)
        graphs.append(LabeledGraph(gid, tuple(labels), tuple(edges)))
    return GraphDatabase.from_graphs(tuple(graphs), classes)
