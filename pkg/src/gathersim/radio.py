"""First-order radio energy model and per-round tree energy accounting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .emln import GatherTree

E_ELEC_DEFAULT = 50e-9       # J/bit, transmitter/receiver electronics
EPS_AMP_DEFAULT = 100e-12    # J/bit/m^2, transmit amplifier (r^2 loss)
E_FUSE_DEFAULT = 5e-9        # J/bit per fused signal
PACKET_BITS_DEFAULT = 2000   # bits per data packet; aggregates keep this size


@dataclass(frozen=True)
class RadioParams:
    e_elec: float = E_ELEC_DEFAULT
    eps_amp: float = EPS_AMP_DEFAULT
    e_fuse: float = E_FUSE_DEFAULT
    packet_bits: int = PACKET_BITS_DEFAULT

    def validate(self) -> None:
        if self.e_elec < 0 or self.eps_amp < 0 or self.e_fuse < 0:
            raise ValueError("radio constants must be >= 0")
        if self.packet_bits < 1:
            raise ValueError("packet_bits must be >= 1")


def tx_energy(params: RadioParams, bits: int, distance: float) -> float:
    """Energy to transmit ``bits`` over ``distance`` meters."""
    if bits < 0 or distance < 0:
        raise ValueError("bits and distance must be >= 0")
    return params.e_elec * bits + params.eps_amp * bits * distance * distance


def rx_energy(params: RadioParams, bits: int) -> float:
    """Energy to receive ``bits``; equals tx_energy at distance 0."""
    if bits < 0:
        raise ValueError("bits must be >= 0")
    return params.e_elec * bits


def fuse_energy(params: RadioParams, bits: int, signal_count: int) -> float:
    """Energy to aggregate ``signal_count`` signals of ``bits`` each."""
    if bits < 0 or signal_count < 0:
        raise ValueError("bits and signal_count must be >= 0")
    return params.e_fuse * bits * signal_count


@dataclass
class EnergyLedger:
    """Per-node energy debits for one round, split by activity.

    The split keeps every accounting component separately inspectable, e.g.
    that leaves are never debited for reception or fusion.
    """

    tx: np.ndarray
    rx: np.ndarray
    fuse: np.ndarray

    @classmethod
    def empty(cls, node_count: int) -> "EnergyLedger":
        return cls(np.zeros(node_count), np.zeros(node_count), np.zeros(node_count))

    @property
    def per_node(self) -> np.ndarray:
        return self.tx + self.rx + self.fuse

    @property
    def total(self) -> float:
        return float(self.per_node.sum())


def tree_round_energy(tree: GatherTree, positions, sink, params: RadioParams) -> EnergyLedger:
    """Debit one gathering round over ``tree``.

    A leaf pays only the transmission to its parent. An intermediate node
    with c children pays c receptions, fusion of c + 1 signals (children's
    packets plus its own reading), and one transmission to its parent; for
    the root the upstream hop goes to the sink. All hop distances are the
    actual Euclidean separations.
    """
    positions = np.asarray(positions, dtype=float)
    n = len(positions)
    if tree.parent.shape != (n,):
        raise ValueError("tree does not match the node set")
    k = params.packet_bits
    ledger = EnergyLedger.empty(n)

    members = np.flatnonzero(tree.level >= 0)
    non_root = members[members != tree.root]
    parents = tree.parent[non_root]
    d = np.linalg.norm(positions[non_root] - positions[parents], axis=1)
    ledger.tx[non_root] = params.e_elec * k + params.eps_amp * k * d * d

    child_count = np.bincount(parents, minlength=n) if non_root.size else np.zeros(n, dtype=int)
    ledger.rx[:] = child_count * (params.e_elec * k)
    inter = np.array(sorted(tree.intermediate_set), dtype=int)
    ledger.fuse[inter] = params.e_fuse * k * (child_count[inter] + 1)

    d_sink = float(np.linalg.norm(positions[tree.root] - np.asarray(sink, dtype=float)))
    ledger.tx[tree.root] = tx_energy(params, k, d_sink)
    return ledger
