# coding: utf-8

# # The Edge Ratio
#
# Each period, every model is compared with the best of the others. Wins are
# the margins by which a model beats that frontier; regrets are the margins by
# which it trails it.

import numpy as np

from forecast_risk import LossPanel, edge_ratios, edge_series, frontier, win_frequencies

panel = LossPanel(("A", "B", "C"), [[1, 2, 3], [3, 2, 4], [2, 4, 1]])
es = edge_series(panel, "A")
print("frontier:", frontier(panel, "A"), "edges:", es.edges)
print(edge_ratios(panel))

# ## A specialist versus a steady runner-up
#
# "steady" is never worst and never best, so its Edge Ratio is exactly zero.
# "spiky" is usually poor but occasionally ahead of everyone.

rng = np.random.default_rng(0)
base = rng.exponential(size=400)
steady = base + 0.1
spiky = base + rng.exponential(2.0, size=400)
spiky[::25] = 0.0
panel = LossPanel(("base", "steady", "spiky"), np.column_stack([base, steady, spiky]))
for m, v in edge_ratios(panel).items():
    print(f"{m:>7} {v:.3f}")
print("frontier-win shares:", win_frequencies(panel))

# ## Pool dependence
#
# The frontier depends on who else is in the pool, so every report carries a
# hash of the pool membership. Adding a near-copy of "spiky" changes both.

bigger = LossPanel(panel.model_ids + ("spiky2",), np.column_stack([panel.losses, spiky + 0.01]))
print(panel.pool_hash(), edge_ratios(panel)["spiky"])
print(bigger.pool_hash(), edge_ratios(bigger)["spiky"])
