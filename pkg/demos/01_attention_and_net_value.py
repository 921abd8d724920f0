"""
Who pays attention, and to what
===============================

A receiver with cutoff c takes the action when the posterior mean reaches c.
Looking at the signal costs lam per unit of effort, so effort is worth it only
where the signal changes the decision by enough.
"""

import numpy as np

from costly_attention.dist import Prior
from costly_attention.policy import full_info_policy, null_info_policy, upper_censorship
from costly_attention.receiver import EffortCost, extensive_margin, optimal_effort, receiver_value

prior = Prior("uniform")
full = full_info_policy(prior)
null = null_info_policy(prior)

####
# Net value of information at each cutoff. For full revelation it is c^2/2 up
# to the prior mean and (1-c)^2/2 after it, so it peaks at 1/2.

cs = np.linspace(0, 1, 11)
print("c      full    censor(2/3)")
cens = upper_censorship(prior, 2 / 3)
for c, a, b in zip(cs, full.net(cs), cens.net(cs)):
    print(f"{c:4.1f}  {a:7.4f}  {b:7.4f}")

# the censorship pools everything above 2/3 into one message at 5/6,
# so cutoffs from 5/6 up learn nothing useful from it
print("pooled message at", cens.params["kink"])

####
# Linear attention cost: all-or-nothing effort.

for a in (0.02, 0.05, 0.125):
    sel = optimal_effort(a, 0.05)
    print(f"net value {a:5.3f}: effort set {sel.effort_set}, value {receiver_value(a, 0.05):.4f}")

####
# The extensive margin is the band of cutoffs that still pay attention.

for lam in (0.0, 0.02, 0.08, 0.13):
    m = extensive_margin(full, lam)
    print(f"lam={lam:4.2f}: " + ("nobody looks" if m.empty else f"cutoffs in [{m.c_lo:.4f}, {m.c_hi:.4f}]"))

####
# With a convex power cost effort becomes interior: any positive net value
# buys some attention, but not all of it.

quad = EffortCost("power", beta=2.0)
for a in (0.01, 0.05, 0.1, 0.3):
    print(f"net value {a:4.2f}: effort {quad.effort(a, 0.1):.3f}")
