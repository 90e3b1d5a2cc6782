"""
Closed-form steady states of a reversible chain
===============================================

X0 <=> X1 <=> ... <=> Xn with power-law orders f_i. Setting x_n = tau
pins down every other concentration, so the steady states form a curve.
"""

from fractions import Fraction

import numpy as np

from plcrn.chain import ChainSpec, chain_parametrization, chain_parametrization_exact, chain_t_hat_check, make_chain
from plcrn.steady_state import relative_residual

spec = ChainSpec(3, f=(1, Fraction(1, 2), -2, 3), k=(0.3, 1.7, 2.0), kp=(4.0, 0.5, 0.9))
system = make_chain(spec)
for tau in (0.1, 1.0, 10.0):
    x = chain_parametrization(spec, tau)
    print(f"tau={tau:<5} x={np.array2string(x, precision=5)}  residual={relative_residual(system, x):.1e}")

rep = chain_t_hat_check(spec)
print(f"T-hat rank {rep.t_hat_rank_whole} = sum of {rep.t_hat_rank_blocks}")

# %%
# Mass action with integer rates stays exact.
ma = ChainSpec.mass_action(k=[1, 1], kp=[2, 3])
print("exact mass-action point:", [str(v) for v in chain_parametrization_exact(ma, 1)])
