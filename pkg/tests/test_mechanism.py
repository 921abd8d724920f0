import numpy as np
import pytest

from costly_attention.errors import ValidationError
from costly_attention.mechanism import (
    PersuasionMechanism,
    TypeGrid,
    assign_greedy,
    check_equivalence,
    check_ic,
    corrupt_envelope,
    upper_envelope,
)
from costly_attention.oracle import GridPrior, random_feasible_policy
from costly_attention.policy import (
    full_info_policy,
    lower_censorship,
    mix,
    null_info_policy,
    upper_censorship,
)
from costly_attention.receiver import LINEAR, EffortCost
from strategies import UNIFORM

GRID = TypeGrid.regular(101, [0.0, 0.02, 0.05])
XS = np.linspace(0.0, 1.0, 401)
POWER2 = EffortCost("power", beta=2.0)


def two_censorships():
    return [upper_censorship(UNIFORM, 0.4), lower_censorship(UNIFORM, 0.4)]


def random_menu(seed):
    rng = np.random.default_rng(seed)
    grid = GridPrior.from_prior(UNIFORM, int(rng.integers(5, 26)))
    size = int(rng.integers(1, 6))
    menu = []
    for k in range(size):
        kind = rng.integers(0, 4)
        if kind == 0:
            menu.append(upper_censorship(UNIFORM, float(rng.uniform())))
        elif kind == 1:
            menu.append(lower_censorship(UNIFORM, float(rng.uniform())))
        elif kind == 2:
            menu.append(mix(upper_censorship(UNIFORM, float(rng.uniform())), float(rng.uniform())))
        else:
            menu.append(random_feasible_policy(grid, [seed, k]))
    return menu


def test_greedy_full_beats_null():
    mech = assign_greedy([full_info_policy(UNIFORM), null_info_policy(UNIFORM)], GRID)
    assert np.all(mech.assignment == 0)


def test_greedy_two_censorships_cross_at_threshold():
    mech = assign_greedy(two_censorships(), GRID)
    col = mech.assignment[:, 0]
    cs = GRID.cutoffs
    assert np.all(col[cs <= 0.4 + 1e-12] == 0)
    assert np.all(col[(cs > 0.4 + 1e-12) & (cs < 0.7 - 1e-12)] == 1)
    # above the pooling region both items reveal everything; either pick is a tie
    nets = mech.nets()
    assert np.all(nets[col, np.arange(cs.size)] >= nets.max(axis=0) - 1e-15)
    assert np.all(mech.assignment == col[:, None])


def test_singleton_menu():
    pol = upper_censorship(UNIFORM, 0.3)
    mech = assign_greedy([pol], GRID)
    assert np.all(mech.assignment == 0)
    assert check_ic(mech) == []
    rep = check_equivalence(mech)
    assert rep.ok
    assert np.max(np.abs(rep.envelope(XS) - pol(XS))) <= 1e-12


def test_mechanism_validation():
    with pytest.raises(ValidationError):
        PersuasionMechanism([], GRID, np.zeros(GRID.shape))
    with pytest.raises(ValidationError):
        PersuasionMechanism(two_censorships(), GRID, np.full(GRID.shape, 2))
    with pytest.raises(ValidationError):
        PersuasionMechanism(two_censorships(), GRID, np.zeros((3, 3)))


def test_swapped_assignment_is_not_ic():
    mech = assign_greedy(two_censorships(), GRID)
    a = mech.assignment.copy()
    lo, hi = 20, 70  # cutoffs 0.2 and 0.7
    a[lo], a[hi] = a[hi].copy(), a[lo].copy()
    bad = check_ic(PersuasionMechanism(mech.menu, GRID, a))
    cells = {(round(v.c, 12), v.lam) for v in bad}
    # at 0.7 the upper censorship leaves no net value, the lower one leaves 0.045
    assert {(0.7, 0.0), (0.7, 0.02)} <= cells
    # at 0.2 the swap costs 0.02 in net value, which matters only while lambda < 0.02
    assert (0.2, 0.0) in cells and (0.2, 0.02) not in cells
    assert all(round(v.c, 12) in (0.2, 0.7) for v in bad)
    with pytest.raises(ValidationError):
        check_equivalence(PersuasionMechanism(mech.menu, GRID, a))


def test_envelope_examples():
    pol = upper_censorship(UNIFORM, 0.4)
    assert np.max(np.abs(upper_envelope([pol, pol])(XS) - pol(XS))) <= 1e-12
    full = full_info_policy(UNIFORM)
    assert np.max(np.abs(upper_envelope([full, null_info_policy(UNIFORM)])(XS) - full(XS))) <= 1e-12
    env = upper_envelope(two_censorships())
    assert env.is_feasible
    # revealing below 0.4 and revealing above 0.4 together reveal everything
    assert np.max(np.abs(env(XS) - full(XS))) <= 1e-12


def test_envelope_of_kinked_pair_keeps_kinks():
    env = upper_envelope([upper_censorship(UNIFORM, 0.3), mix(full_info_policy(UNIFORM), 0.6)])
    assert env.is_feasible
    second = env(XS[:-2]) + env(XS[2:]) - 2 * env(XS[1:-1])
    assert np.all(second >= -1e-12)
    assert len([k for k in env.kinks if 0 < k < 1]) >= 2


def test_greedy_two_censorship_mechanism_is_equivalent():
    rep = check_equivalence(assign_greedy(two_censorships(), GRID))
    assert rep.ok and rep.max_envelope_gap <= 1e-10


@pytest.mark.parametrize("cost", [LINEAR, POWER2], ids=["linear", "power2"])
@pytest.mark.parametrize("seed", range(50))
def test_random_greedy_menus_are_equivalent(seed, cost):
    menu = random_menu(seed)
    mech = assign_greedy(menu, GRID, cost)
    assert check_ic(mech, cost) == []
    rep = check_equivalence(mech, cost)
    assert rep.ok, (rep.effort_violations[:3], rep.action_violations[:3])
    assert rep.max_envelope_gap <= 1e-10
    for pol in menu:
        assert np.all(rep.envelope(XS) >= pol(XS) - 1e-12)


def test_corrupted_envelope_is_detected_locally():
    mech = assign_greedy(two_censorships(), GRID)
    J = upper_envelope(mech.menu)
    bad, b = corrupt_envelope(J, depth=1e-3, width=0.03)
    rep = check_equivalence(mech, envelope=bad)
    assert rep.action_violations
    assert all(abs(v.c - b) <= 0.03 + 1e-12 for v in rep.action_violations)
    assert check_equivalence(mech, envelope=J).ok


@pytest.mark.parametrize("where", [0.25, 0.5, 0.8])
def test_corruption_anywhere_is_detected(where):
    menu = [upper_censorship(UNIFORM, 0.3), mix(full_info_policy(UNIFORM), 0.6), lower_censorship(UNIFORM, 0.5)]
    mech = assign_greedy(menu, GRID)
    bad, b = corrupt_envelope(upper_envelope(menu), where=where)
    rep = check_equivalence(mech, envelope=bad)
    flagged = rep.action_violations + rep.effort_violations
    assert flagged and all(abs(v.c - b) <= 0.03 + 1e-12 for v in flagged)
