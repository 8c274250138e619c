import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_geometric_snapshot, snapshot_from_adjacency
from helpers_oracles import recount_tree_ledger

from gathersim import (EnergyLedger, NodeState, RadioParams, build_graph,
                       construct_tree, fuse_energy, positions_of, rx_energy,
                       tree_round_energy, tx_energy)

P = RadioParams()


def test_radio_params_validation():
    with pytest.raises(ValueError):
        RadioParams(e_elec=-1e-9).validate()
    with pytest.raises(ValueError):
        RadioParams(packet_bits=0).validate()
    RadioParams().validate()


def test_tx_energy_values():
    assert tx_energy(P, 0, 123.0) == 0.0
    assert tx_energy(P, 2000, 25.0) == pytest.approx(2.25e-4, rel=1e-12)
    assert tx_energy(P, 2000, 250.0) == pytest.approx(1.26e-2, rel=1e-12)


def test_rx_energy_values():
    assert rx_energy(P, 0) == 0.0
    assert rx_energy(P, 2000) == pytest.approx(1.0e-4, rel=1e-12)


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=50)
def test_rx_equals_tx_at_zero_distance(bits):
    assert rx_energy(P, bits) == tx_energy(P, bits, 0.0)


def test_fuse_energy_values():
    assert fuse_energy(P, 2000, 0) == 0.0
    assert fuse_energy(P, 2000, 3) == pytest.approx(3.0e-5, rel=1e-12)


@given(st.integers(min_value=0, max_value=1000), st.integers(min_value=0, max_value=1000))
@settings(max_examples=50)
def test_fuse_energy_additive_in_signals(a, b):
    assert fuse_energy(P, 2000, a + b) == pytest.approx(
        fuse_energy(P, 2000, a) + fuse_energy(P, 2000, b), rel=1e-12)


def test_negative_inputs_rejected():
    with pytest.raises(ValueError):
        tx_energy(P, -1, 0.0)
    with pytest.raises(ValueError):
        tx_energy(P, 1, -0.1)
    with pytest.raises(ValueError):
        rx_energy(P, -1)
    with pytest.raises(ValueError):
        fuse_energy(P, 1, -1)


def _tree_over(nodes, range_m):
    graph = build_graph(nodes, range_m)
    tree = construct_tree(graph, [n.energy for n in nodes], tie_seed=1)
    assert tree is not None
    return graph, tree


def test_single_node_round_is_fuse_plus_sink_tx():
    nodes = [NodeState(0, (50.0, 50.0), 1.0)]
    _, tree = _tree_over(nodes, 10.0)
    ledger = tree_round_energy(tree, positions_of(nodes), (50.0, 300.0), P)
    expected = fuse_energy(P, 2000, 1) + tx_energy(P, 2000, 250.0)
    assert ledger.per_node[0] == pytest.approx(expected, rel=1e-12)
    assert ledger.total == pytest.approx(expected, rel=1e-12)


def test_star_round_matches_hand_computation():
    # two leaves 10 m from the root, sink 250 m away
    nodes = [NodeState(0, (0.0, 0.0), 1.0), NodeState(1, (10.0, 0.0), 1.0),
             NodeState(2, (-10.0, 0.0), 1.0)]
    _, tree = _tree_over(nodes, 10.0)
    assert tree.root == 0
    ledger = tree_round_energy(tree, positions_of(nodes), (0.0, 250.0), P)
    assert ledger.per_node[1] == pytest.approx(1.2e-4, rel=1e-12)
    assert ledger.per_node[2] == pytest.approx(1.2e-4, rel=1e-12)
    root_expected = 2 * 1.0e-4 + 3.0e-5 + 1.26e-2
    assert ledger.per_node[0] == pytest.approx(root_expected, rel=1e-12)


def test_doubling_packet_bits_doubles_every_debit():
    snap = random_geometric_snapshot(3)
    tree = construct_tree(snap, snap.energies, tie_seed=0)
    sink = (50.0, 300.0)
    base = tree_round_energy(tree, snap.positions, sink, P)
    doubled = tree_round_energy(tree, snap.positions, sink,
                                dataclasses.replace(P, packet_bits=4000))
    assert np.array_equal(doubled.per_node, 2.0 * base.per_node)


def test_leaves_pay_no_rx_or_fuse():
    snap = random_geometric_snapshot(4)
    tree = construct_tree(snap, snap.energies, tie_seed=0)
    ledger = tree_round_energy(tree, snap.positions, (50.0, 300.0), P)
    leaves = sorted(tree.leaf_set)
    assert np.all(ledger.rx[leaves] == 0.0)
    assert np.all(ledger.fuse[leaves] == 0.0)
    assert np.all(ledger.tx[leaves] > 0.0)


def test_ledger_matches_independent_recount():
    checked = 0
    for seed in range(12):
        snap = random_geometric_snapshot(seed)
        energies = np.linspace(0.2, 1.0, snap.node_count)
        tree = construct_tree(snap, energies, tie_seed=seed)
        if tree is None:
            continue
        checked += 1
        sink = (50.0, 300.0)
        ledger = tree_round_energy(tree, snap.positions, sink, P)
        tx, rx, fuse = recount_tree_ledger(tree, snap.positions, sink, P)
        assert np.allclose(ledger.tx, tx, rtol=1e-12, atol=0)
        assert np.allclose(ledger.rx, rx, rtol=1e-12, atol=0)
        assert np.allclose(ledger.fuse, fuse, rtol=1e-12, atol=0)
        assert ledger.total == pytest.approx((tx + rx + fuse).sum(), rel=1e-12)
    assert checked >= 5


def test_moving_node_farther_never_decreases_debit():
    base_nodes = [NodeState(0, (0.0, 0.0), 1.0), NodeState(1, (5.0, 0.0), 1.0),
                  NodeState(2, (-5.0, 0.0), 1.0)]
    _, tree = _tree_over(base_nodes, 12.0)
    sink = (0.0, 250.0)
    near = tree_round_energy(tree, positions_of(base_nodes), sink, P)
    for farther_x in (7.0, 9.0, 12.0):
        moved = [base_nodes[0], NodeState(1, (farther_x, 0.0), 1.0), base_nodes[2]]
        far = tree_round_energy(tree, positions_of(moved), sink, P)
        assert far.per_node[1] >= near.per_node[1]


def test_tree_node_mismatch_rejected():
    nodes = [NodeState(0, (0.0, 0.0), 1.0), NodeState(1, (1.0, 0.0), 1.0)]
    _, tree = _tree_over(nodes, 2.0)
    with pytest.raises(ValueError):
        tree_round_energy(tree, np.zeros((3, 2)), (0.0, 0.0), P)


def test_empty_ledger_total_is_zero():
    ledger = EnergyLedger.empty(5)
    assert ledger.total == 0.0
    assert np.all(ledger.per_node == 0.0)
