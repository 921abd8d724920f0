"""
Menus, envelopes and brute-force checks
=======================================

A screening menu lets each type pick a policy. When every type takes the one
with the largest net value at its own cutoff, the menu can be replaced by its
pointwise maximum without changing anybody's choices. The checker below
confirms that on a grid of types and catches a deliberately broken envelope.
Then a brute-force search and a simulation cross-check the analytic payoffs.
"""

import numpy as np

from costly_attention.dist import CutoffDensity, Prior, TypePopulation
from costly_attention.mechanism import TypeGrid, assign_greedy, check_equivalence, corrupt_envelope
from costly_attention.oracle import brute_force_sender_opt, simulate_game
from costly_attention.policy import full_info_policy, lower_censorship, mix, upper_censorship
from costly_attention.sender import Scenario, direct_payoff, optimize_upper_censorship

prior = Prior("uniform")

####
# A three-item menu over 101 cutoffs and three cost levels.

menu = [upper_censorship(prior, 0.3), mix(full_info_policy(prior), 0.6), lower_censorship(prior, 0.5)]
types = TypeGrid.regular(101, [0.0, 0.02, 0.05])
mech = assign_greedy(menu, types)
print("items chosen:", np.bincount(mech.assignment.ravel(), minlength=len(menu)))
rep = check_equivalence(mech)
print("equivalent to one signal:", rep.ok)

####
# Dent the envelope by 1e-3 near 0.5 and check again.

bad, where = corrupt_envelope(rep.envelope, depth=1e-3)
hit = check_equivalence(mech, envelope=bad)
print(f"dent at {where:.3f}: {len(hit.action_violations)} action and {len(hit.effort_violations)} effort violations")
print("flagged cutoffs:", sorted({round(v.c, 2) for v in hit.action_violations + hit.effort_violations}))

####
# Exhaustive desk-scale search over pooled 21-point priors never beats the
# best threshold policy.

scn = Scenario(prior, TypePopulation.degenerate(0.02, CutoffDensity("triangular", peak=0.5)))
sol = optimize_upper_censorship(scn)
bf = brute_force_sender_opt(scn, K=21, samples=200, seed=0)
print(f"threshold optimum {sol.reduced:.6f}; brute force best {bf.best_value:.6f} ({bf.descriptor})")

####
# Monte Carlo play of the game against the analytic payoff.

pol = upper_censorship(prior, sol.theta_star)
sim = simulate_game(scn, pol, 400_000, seed=1)
print(f"simulated {sim.estimate:.5f} +/- {sim.std_error:.5f}; analytic {direct_payoff(scn, pol):.5f}")
