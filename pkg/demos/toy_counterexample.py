"""
When the T-hat ranks do not add up
==================================

A two-species network whose blocks each have positive steady states, while
the whole network has them only for special rate constants. Here the
compatibility condition is k2/k1 = (k4/k3)**6.
"""

import numpy as np

from plcrn import finest_independent_decomposition, verify_t_hat_independence
from plcrn.fixtures import toy_system
from plcrn.steady_state import SolverConfig, binomial_parametrization, solve_reactions

generic = toy_system(k=(1.0, 2.0, 1.0, 3.0))
d = finest_independent_decomposition(generic.network)
rep = verify_t_hat_independence(generic, d)
print(f"T-hat rank {rep.t_hat_rank_whole} vs blocks {rep.t_hat_rank_blocks}")

# %%
# Each block is binomial: its steady states are a ray x = c * y.
for i in range(d.alpha):
    fam = binomial_parametrization(generic, d, i)
    x, y = fam(1.0)
    print(f"block {i}: x/y = {x / y:.6g}")

# Two different rays meet only at the origin, so the search fails.
cfg = SolverConfig(starts=32)
print("generic rates   ->", "found" if solve_reactions(generic, cfg=cfg).found else "no witness")

# %%
# Choosing k2/k1 = (k4/k3)**6 makes the rays coincide.
tuned = toy_system(k=(1.0, 64.0, 1.0, 2.0))
sol = solve_reactions(tuned, cfg=cfg)
print("k = (1, 64, 1, 2) ->", "found" if sol.found else "no witness", np.round(sol.x, 6))
