import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from costly_attention.dist import Prior
from costly_attention.errors import DomainError, ValidationError
from costly_attention.oracle import brute_force_effort
from costly_attention.policy import (
    blackwell_compare,
    full_info_policy,
    lower_censorship,
    mix,
    null_info_policy,
    upper_censorship,
)
from costly_attention.receiver import (
    LINEAR,
    EffortCost,
    ReceiverType,
    best_response,
    extensive_margin,
    level_crossings,
    optimal_action,
    optimal_effort,
    receiver_expected_utility,
    receiver_value,
    value_of_effort,
)

POWER2 = EffortCost("power", beta=2.0)
POWER3 = EffortCost("power", beta=3.0)
CONVEX_TABLE = EffortCost("table", table=[[0, 0], [0.25, 0.05], [0.5, 0.15], [0.75, 0.4], [1.0, 1.0]])
BUMPY_TABLE = EffortCost("table", table=[[0, 0], [0.3, 0.4], [0.6, 0.45], [1.0, 1.0]])
COSTS = [LINEAR, POWER2, POWER3, CONVEX_TABLE, BUMPY_TABLE]
COST_IDS = ["linear", "power2", "power3", "table", "nonconvex-table"]
UNIFORM = Prior("uniform")


@pytest.mark.parametrize("x, c, a", [(0.7, 0.5, 1), (0.3, 0.5, 0), (0.5, 0.5, 1)])
def test_optimal_action(x, c, a):
    assert optimal_action(x, c) == a


@pytest.mark.parametrize("e, a, lam, cost, expected", [
    (1.0, 0.125, 0.05, LINEAR, 0.075),
    (0.0, 0.3, 0.4, POWER2, 0.0),
    (0.5, 0.1, 0.1, POWER2, 0.025),
])
def test_value_of_effort(e, a, lam, cost, expected):
    assert value_of_effort(e, a, lam, cost) == pytest.approx(expected, abs=1e-15)


def test_value_of_effort_domain():
    with pytest.raises(DomainError):
        value_of_effort(1.2, 0.1, 0.1)


def test_optimal_effort_examples():
    assert optimal_effort(0.125, 0.05).effort_set == (1.0, 1.0)
    assert optimal_effort(0.02, 0.05).effort_set == (0.0, 0.0)
    tie = optimal_effort(0.05, 0.05)
    assert tie.effort_set == (0.0, 1.0) and tie.canonical == 1.0
    assert optimal_effort(0.1, 0.1, POWER2).canonical == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(DomainError):
        optimal_effort(-0.1, 0.05)


def test_receiver_value_examples():
    for cost in COSTS:
        assert receiver_value(0.07, 0.0, cost) == pytest.approx(0.07, abs=1e-12)
    assert receiver_value(0.125, 0.05) == pytest.approx(0.075)
    assert receiver_value(0.03, 0.05) == 0.0


def test_cost_validation():
    with pytest.raises(ValidationError):
        EffortCost("power", beta=1.0)
    with pytest.raises(ValidationError):
        EffortCost("table", table=[[0.1, 0], [1, 1]])
    with pytest.raises(ValidationError):
        EffortCost("quadratic")
    assert CONVEX_TABLE.convex and not BUMPY_TABLE.convex
    # k(0) is normalized away
    shifted = EffortCost("table", table=[[0, 0.2], [1, 1.2]])
    assert shifted.k(0.0) == 0.0 and shifted.k(1.0) == pytest.approx(1.0)


def test_extensive_margin_examples():
    full = full_info_policy(UNIFORM)
    m = extensive_margin(full, 0.02)
    assert (m.c_lo, m.c_hi) == pytest.approx((0.2, 0.8), abs=1e-9)
    assert extensive_margin(null_info_policy(UNIFORM), 0.02).empty
    m0 = extensive_margin(full, 0.0)
    assert (m0.c_lo, m0.c_hi) == (0.0, 1.0)


def test_extensive_margin_power_cost_is_support_of_positive_net():
    # with a power cost any positive net informativeness buys some effort
    pol = upper_censorship(UNIFORM, 0.3)
    m = extensive_margin(pol, 0.05, POWER2)
    assert m.c_lo == pytest.approx(0.0, abs=1e-12) and m.c_hi == pytest.approx(0.65, abs=1e-12)


def test_level_crossings_match_closed_form():
    pol = upper_censorship(UNIFORM, 0.3)
    # below 0.3: c^2/2 = 0.02; above the prior mean: 0.045 + 0.3 (c - 0.3) - (c - 0.5) = 0.02
    lo, hi = level_crossings(pol, 0.02)
    assert lo == pytest.approx(0.2, abs=1e-14)
    assert hi == pytest.approx(0.435 / 0.7, abs=1e-14)
    assert float(pol.net(hi)) == pytest.approx(0.02, abs=1e-14)
    assert level_crossings(pol, 0.5) == []


@pytest.mark.parametrize("c, lam, pol, expected", [
    (0.5, 0.3, "null", 0.0),
    (0.5, 0.0, "full", 0.125),
    (0.9, 0.0, "full", 0.005),
])
def test_receiver_expected_utility(c, lam, pol, expected):
    policy = full_info_policy(UNIFORM) if pol == "full" else null_info_policy(UNIFORM)
    assert receiver_expected_utility(policy, ReceiverType(c, lam)) == pytest.approx(expected, abs=1e-14)


def test_receiver_type_domain():
    with pytest.raises(DomainError):
        ReceiverType(1.2, 0.1)


def test_best_response_bundle():
    br = best_response(full_info_policy(UNIFORM), ReceiverType(0.5, 0.05))
    assert br.canonical_effort == 1.0
    assert br.action(0.6) == 1 and br.action(0.4) == 0


# ---- properties -------------------------------------------------------------------------

tuples = st.tuples(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))


@pytest.mark.parametrize("cost", COSTS, ids=COST_IDS)
@given(t=tuples)
def test_supermodularity(cost, t):
    a1, a2, e1, e2, lam = t
    a, a_ = sorted((a1, a2))
    e, e_ = sorted((e1, e2))
    lhs = value_of_effort(e_, a_, lam, cost) - value_of_effort(e, a_, lam, cost)
    rhs = value_of_effort(e_, a, lam, cost) - value_of_effort(e, a, lam, cost)
    assert lhs >= rhs - 1e-12
    if (a_ - a) * (e_ - e) > 1e-12:
        assert lhs > rhs


@pytest.mark.parametrize("cost", COSTS, ids=COST_IDS)
@given(a1=st.floats(0, 1), a2=st.floats(0, 1), lam=st.floats(0, 1))
def test_monotone_selection(cost, a1, a2, lam):
    a, a_ = sorted((a1, a2))
    assert cost.effort(a, lam) <= cost.effort(a_, lam) + 1e-9


@pytest.mark.parametrize("cost", COSTS, ids=COST_IDS)
@pytest.mark.parametrize("lam", [0.0, 0.05, 0.3])
def test_value_is_convex_with_envelope_slope(cost, lam):
    a = np.linspace(0, 1, 401)
    V = cost.value(a, lam)
    assert np.all(V[:-2] + V[2:] - 2 * V[1:-1] >= -1e-12)
    assert np.all(np.diff(V) >= -1e-15)
    h = 1e-7
    for ai in np.linspace(0.013, 0.987, 37):
        slope = (cost.value(ai + h, lam) - cost.value(ai - h, lam)) / (2 * h)
        lo, hi = cost.argmax_interval(ai, lam, slack=1e-6)
        assert lo - 1e-6 <= slope <= hi + 1e-6


@pytest.mark.parametrize("cost", COSTS, ids=COST_IDS)
def test_effort_agrees_with_grid_search(cost):
    rng = np.random.default_rng(3)
    for a, lam in rng.uniform(0, 1, size=(200, 2)) * [0.3, 0.5]:
        e_grid, v_grid = brute_force_effort(a, lam, cost, 10001)
        e = cost.effort(a, lam)
        assert value_of_effort(e, a, lam, cost) >= v_grid - 1e-6
        assert receiver_value(a, lam, cost) == pytest.approx(v_grid, abs=1e-6)


@pytest.mark.parametrize("cost", COSTS, ids=COST_IDS)
def test_blackwell_more_means_more_value(cost):
    pols = [full_info_policy(UNIFORM), upper_censorship(UNIFORM, 0.6), upper_censorship(UNIFORM, 0.3),
            lower_censorship(UNIFORM, 0.4), mix(full_info_policy(UNIFORM), 0.4), null_info_policy(UNIFORM)]
    cs = np.linspace(0, 1, 101)
    for I in pols:
        for J in pols:
            if blackwell_compare(I, J) in ("more", "equal"):
                for lam in (0.0, 0.02, 0.1):
                    assert np.all(cost.value(I.net(cs), lam) >= cost.value(J.net(cs), lam) - 1e-12)
