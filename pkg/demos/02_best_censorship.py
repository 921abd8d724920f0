"""
The sender's best threshold
===========================

Cutoffs follow a triangular density peaked at 1/2. The sender picks how much
of the bottom of the state space to reveal; everything above the threshold is
pooled. Raising the attention cost shifts the best threshold up.
"""

import numpy as np

from costly_attention.dist import CutoffDensity, Prior, TypePopulation
from costly_attention.policy import upper_censorship
from costly_attention.sender import (
    Scenario,
    censorship_payoff_derivative,
    comparative_statics_cost,
    optimize_upper_censorship,
    reduced_payoff,
)

prior = Prior("uniform")
density = CutoffDensity("triangular", peak=0.5)
scn = Scenario(prior, TypePopulation.degenerate(0.02, density))

####
# Payoff against the threshold, with its slope. The slope is computed from a
# one-dimensional integral, not by differencing.

for t in np.linspace(0, 0.6, 13):
    pol = upper_censorship(prior, t)
    print(f"theta={t:4.2f}  W={reduced_payoff(scn, pol):.6f}  dW={censorship_payoff_derivative(scn, t):+.6f}")

####
# Grid scan, golden-section refinement, then a root of the slope.

sol = optimize_upper_censorship(scn)
print(f"best threshold {sol.theta_star:.10f}, payoff {sol.payoff:.10f}")
for lam, m in sol.margins:
    print(f"attentive cutoffs at lam={lam}: [{m.c_lo:.4f}, {m.c_hi:.4f}]")

####
# Costlier attention pushes the threshold up: more is revealed.

res = comparative_statics_cost(scn, [0.001, 0.01, 0.02])
print(f"zero-cost threshold {res.eta:.6f}")
for eps, th in res.thetas.items():
    print(f"  cost {eps:5.3f}: {th:.6f} (shift {th - res.eta:+.6f})")
