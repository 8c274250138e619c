"""Shared graph-building helpers for the test suite."""

from __future__ import annotations

import numpy as np

from gathersim import NetworkSnapshot, NodeState, build_graph, deploy, derive_seed
from gathersim.network import FieldConfig


def snapshot_from_adjacency(adj_lists, positions=None, energies=None) -> NetworkSnapshot:
    """Hand-built snapshot for algorithm tests that only need adjacency.

    Bypasses the geometric construction so arbitrary (not necessarily
    unit-disk) graphs can be fed to the tree algorithm and validator.
    """
    n = len(adj_lists)
    if positions is None:
        positions = [(float(i), 0.0) for i in range(n)]
    if energies is None:
        energies = [1.0] * n
    nodes = [NodeState(i, tuple(positions[i]), float(energies[i])) for i in range(n)]
    return NetworkSnapshot(nodes, 1.0, tuple(tuple(sorted(nbrs)) for nbrs in adj_lists))


def path_adjacency(n):
    return [sorted(v for v in (i - 1, i + 1) if 0 <= v < n) for i in range(n)]


def star_adjacency(spokes):
    return [list(range(1, spokes + 1))] + [[0] for _ in range(spokes)]


def random_connected_adjacency(rng: np.random.Generator, n: int, edge_p: float = 0.45):
    """Random connected labelled graph: a random spanning tree plus extras."""
    adj = [set() for _ in range(n)]
    order = rng.permutation(n)
    for i in range(1, n):
        a = int(order[i])
        b = int(order[int(rng.integers(i))])
        adj[a].add(b)
        adj[b].add(a)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < edge_p:
                adj[u].add(v)
                adj[v].add(u)
    return [sorted(s) for s in adj]


def random_geometric_snapshot(seed: int, n: int = 100, range_m: float = 25.0,
                              field: FieldConfig | None = None) -> NetworkSnapshot:
    field = field or FieldConfig(node_count=n)
    return build_graph(deploy(field, derive_seed(4242, seed)), range_m)
