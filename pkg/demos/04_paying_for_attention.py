"""
When the sender values attention itself
=======================================

A media outlet gains gamma per unit of attention on top of the action. The
improvement routine turns any policy into a three-region one (pool at the
bottom, reveal in the middle, pool at the top) that pays at least as much.
"""

from costly_attention.dist import CutoffDensity, Prior, TypePopulation
from costly_attention.oracle import GridPrior, random_feasible_policy
from costly_attention.sender import Scenario, improve_bi_censorship, search_bi_censorship

prior = Prior("uniform")
density = CutoffDensity("triangular", peak=0.7)
grid = GridPrior.from_prior(prior, 21)

####
# A few random feasible policies (three local poolings each), improved at three
# attention weights.

for gamma in (0.0, 0.5, 2.0):
    scn = Scenario(prior, TypePopulation.degenerate(0.03, density), gamma=gamma)
    for seed in range(3):
        res = improve_bi_censorship(scn, random_feasible_policy(grid, seed, steps=3))
        print(f"gamma={gamma:3.1f} seed={seed}: {res.payoff_in:.5f} -> {res.payoff_out:.5f} "
              f"(theta1={res.theta1:.3f}, x1={res.x1:.3f}, x2={res.x2:.3f})")

####
# Coarse exhaustive search over the same three-parameter family, for scale.

scn = Scenario(prior, TypePopulation.degenerate(0.03, density), gamma=0.5)
value, _, params = search_bi_censorship(scn, n=11)
print(f"grid search best {value:.5f} at (theta1, x1, x2) = {params}")
