#!/usr/bin/env python3
"""Head-to-head comparison of the five gathering protocols.

All protocols see identical deployments (same master seed): the
energy-aware tree at its best range, LEACH's rotating cluster heads,
both PEGASIS chain variants, and raw direct-to-sink transmission.
Watch three things: energy per round, delay per round, and how long the
network lasts before the first battery dies.
"""

import sys

from gathersim import SimConfig, compare_protocols

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 12
config = SimConfig(trials=trials, master_seed=7)

print(f"{trials} trials per protocol, identical deployments, range 25 m for the tree\n")
print(f"{'protocol':>14} {'mJ/round':>9} {'delay':>7} {'e*d':>8} {'lifetime':>9}")
rows = compare_protocols(config, workers=2)
for agg in rows:
    print(f"{agg.protocol:>14} {agg.mean_energy_per_round * 1e3:>9.2f} "
          f"{agg.mean_delay_per_round:>7.1f} {agg.mean_energy_delay:>8.3f} "
          f"{agg.mean_lifetime:>9.0f}")

by = {r.protocol: r for r in rows}
emln = by["emln"]
print(f"\nthe tree protocol lives {emln.mean_lifetime / by['leach'].mean_lifetime:.1f}x "
      f"longer than LEACH and {emln.mean_lifetime / by['pegasis-tdma'].mean_lifetime:.1f}x "
      "longer than the TDMA chain: refreshing the tree every round steers the")
print("relay burden toward whoever has energy to spare, while the static chain")
print("and the long cluster-head hops keep draining the same unlucky nodes.")
print(f"direct transmission burns {by['direct'].mean_energy_per_round / emln.mean_energy_per_round:.0f}x "
      "the energy per round and dies almost immediately.")
