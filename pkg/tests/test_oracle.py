import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import scenario
from costly_attention.dist import CutoffDensity, Prior, TypePopulation
from costly_attention.errors import PreconditionError, ValidationError
from costly_attention.oracle import (
    GridPrior,
    brute_force_effort,
    brute_force_sender_opt,
    grid_censorship_distribution,
    random_feasible_distribution,
    random_feasible_policy,
    sample_posterior_means,
    simulate_game,
)
from costly_attention.policy import (
    from_distribution,
    full_info_policy,
    null_info_policy,
    upper_censorship,
)
from costly_attention.receiver import LINEAR, EffortCost
from costly_attention.sender import Scenario, direct_payoff, reduced_payoff
from strategies import UNIFORM

BETA = Prior("beta", alpha=2.0, beta=3.0)
TRI = CutoffDensity("triangular", peak=0.5)
XS = np.linspace(0.0, 1.0, 201)


# ---- grid priors ------------------------------------------------------------------------


@pytest.mark.parametrize("prior", [UNIFORM, BETA, Prior("beta", alpha=0.7, beta=1.4)], ids=["uniform", "beta23", "beta-u"])
@pytest.mark.parametrize("K", [1, 5, 21, 31])
def test_grid_prior_preserves_mean(prior, K):
    g = GridPrior.from_prior(prior, K)
    assert np.all(g.masses >= 0) and g.masses.sum() == pytest.approx(1.0, abs=1e-14)
    assert g.mean == pytest.approx(prior.mean, abs=1e-10)
    assert np.all(np.diff(g.points) > 0)


def test_uniform_grid_is_equally_spaced():
    g = GridPrior.from_prior(UNIFORM, 10)
    assert np.allclose(g.points, np.arange(10) / 10 + 0.05, atol=1e-15)
    assert np.allclose(g.masses, 0.1, atol=1e-15)


def test_grid_prior_rejects_empty():
    with pytest.raises(ValidationError):
        GridPrior.from_prior(UNIFORM, 0)


# ---- random feasible policies -----------------------------------------------------------


def test_zero_steps_is_grid_full_information():
    g = GridPrior.from_prior(UNIFORM, 21)
    pol = random_feasible_policy(g, 7, steps=0)
    assert np.max(np.abs(pol(XS) - g.policy()(XS))) <= 1e-15


def test_pooling_everything_is_null():
    g = GridPrior.from_prior(UNIFORM, 21)
    pol = from_distribution(UNIFORM, grid_censorship_distribution(g, 0))
    assert np.max(np.abs(pol(XS) - null_info_policy(UNIFORM)(XS))) <= 1e-15
    many = random_feasible_distribution(g, 3, steps=200)
    pts, ms = many.atoms
    assert pts.size == 1 and pts[0] == pytest.approx(0.5, abs=1e-15)


def test_seed_42_five_steps():
    pol = random_feasible_policy(GridPrior.from_prior(UNIFORM, 21), 42, steps=5)
    pol.validate()
    assert pol.is_feasible
    full, null = full_info_policy(UNIFORM), null_info_policy(UNIFORM)
    assert np.all(pol(XS) <= full(XS) + 1e-12) and np.all(pol(XS) >= null(XS) - 1e-12)
    second = pol(XS[:-2]) + pol(XS[2:]) - 2 * pol(XS[1:-1])
    assert np.all(second >= -1e-12)


@pytest.mark.parametrize("prior", [UNIFORM, BETA], ids=["uniform", "beta"])
def test_random_policies_validate(prior):
    g = GridPrior.from_prior(prior, 21)
    for seed in range(500):
        random_feasible_policy(g, seed).validate()


def test_random_policies_are_reproducible():
    g = GridPrior.from_prior(UNIFORM, 21)
    a, b = random_feasible_policy(g, 11), random_feasible_policy(g, 11)
    assert np.array_equal(a(XS), b(XS))


@given(st.integers(0, 2**32 - 1), st.integers(2, 31))
def test_pooling_preserves_mean(seed, K):
    g = GridPrior.from_prior(BETA, K)
    pts, ms = random_feasible_distribution(g, seed).atoms
    assert float(pts @ ms) == pytest.approx(BETA.mean, abs=1e-12)


# ---- brute-force sender search ----------------------------------------------------------


def test_brute_force_increasing_density_finds_full_information():
    scn = scenario(0.0, CutoffDensity("linear"))
    res = brute_force_sender_opt(scn, 21, 30, seed=0)
    g = GridPrior.from_prior(UNIFORM, 21)
    assert res.best_value == pytest.approx(reduced_payoff(scn, g.policy()), abs=1e-12)
    assert res.descriptor in ("censor:21", "censor:20")


def test_brute_force_uniform_density_is_flat():
    res = brute_force_sender_opt(scenario(0.02, CutoffDensity("uniform")), 11, 20, seed=0)
    vals = list(res.values.values())
    assert max(vals) - min(vals) <= 1e-6


def test_brute_force_never_beats_best_censorship():
    scn = scenario(0.02, TRI)
    res = brute_force_sender_opt(scn, 21, 60, seed=1)
    best = max(reduced_payoff(scn, upper_censorship(UNIFORM, t)) for t in np.linspace(0, 1, 501))
    assert res.best_value <= best + 1e-6
    assert len(res.values) == 22 + 60


def test_brute_force_seeded_and_limited():
    scn = scenario(0.02, TRI)
    a = brute_force_sender_opt(scn, 11, 10, seed=5)
    b = brute_force_sender_opt(scn, 11, 10, seed=5)
    assert a.values == b.values
    with pytest.raises(PreconditionError):
        brute_force_sender_opt(scn, 32, 1)


def test_brute_force_uses_direct_payoff_with_media_term():
    scn = scenario(0.02, TRI, gamma=0.5)
    res = brute_force_sender_opt(scn, 7, 3, seed=0)
    g = GridPrior.from_prior(UNIFORM, 7)
    assert res.values["censor:7"] == pytest.approx(direct_payoff(scn, g.policy()), abs=1e-15)


# ---- simulation -------------------------------------------------------------------------


def test_posterior_mean_sampler_inverts_policy_slope():
    u = np.linspace(0.001, 0.999, 37)
    assert np.allclose(sample_posterior_means(full_info_policy(UNIFORM), u), u, atol=1e-15)
    assert np.allclose(sample_posterior_means(null_info_policy(UNIFORM), u), 0.5, atol=1e-15)
    x = sample_posterior_means(upper_censorship(UNIFORM, 0.3), u)
    assert np.allclose(x, np.where(u <= 0.3, u, 0.65), atol=1e-15)


def test_simulation_null_policy():
    res = simulate_game(scenario(0.02, TRI), null_info_policy(UNIFORM), 200_000, seed=3)
    assert abs(res.estimate - 0.5) <= 4 * res.std_error


def test_simulation_uniform_uniform_full_information():
    res = simulate_game(scenario(0.0, CutoffDensity("uniform")), full_info_policy(UNIFORM), 200_000, seed=4)
    assert abs(res.estimate - 0.5) <= 4 * res.std_error


@pytest.mark.parametrize("gamma", [0.0, 0.5])
def test_simulation_matches_direct_payoff(gamma):
    scn = scenario(0.02, TRI, gamma=gamma)
    pol = upper_censorship(UNIFORM, 0.3)
    res = simulate_game(scn, pol, 200_000, seed=5)
    assert abs(res.estimate - direct_payoff(scn, pol)) <= 4 * res.std_error


def test_simulation_mixed_population_and_atomic_policy():
    pop = TypePopulation([0.0, 0.02], [0.4, 0.6], [TRI, CutoffDensity("truncated_normal", mu=0.5, sigma=0.2)])
    scn = Scenario(BETA, pop, cost=EffortCost("power", beta=2.0))
    pol = random_feasible_policy(GridPrior.from_prior(BETA, 15), 9)
    res = simulate_game(scn, pol, 200_000, seed=6)
    assert abs(res.estimate - direct_payoff(scn, pol)) <= 4 * res.std_error


def test_simulation_point_cutoff():
    scn = scenario(0.02, CutoffDensity("point", zeta=0.6))
    pol = upper_censorship(UNIFORM, 0.6 - np.sqrt(0.12))
    res = simulate_game(scn, pol, 50_000, seed=1)
    assert abs(res.estimate - direct_payoff(scn, pol)) <= 4 * res.std_error + 1e-12


def test_simulation_is_deterministic():
    scn = scenario(0.02, TRI)
    pol = upper_censorship(UNIFORM, 0.3)
    a = simulate_game(scn, pol, 100_000, seed=8)
    b = simulate_game(scn, pol, 100_000, seed=8)
    c = simulate_game(scn, pol, 100_000, seed=9)
    assert a == b
    assert a.estimate != c.estimate
    assert a.std_error > 0 and a.n == 100_000


def test_simulation_rejects_empty_run():
    with pytest.raises(ValidationError):
        simulate_game(scenario(0.02, TRI), null_info_policy(UNIFORM), 0, seed=0)


# ---- grid effort search -----------------------------------------------------------------


def test_brute_force_effort_examples():
    e, v = brute_force_effort(0.125, 0.05, LINEAR, 10001)
    assert e == 1.0 and v == pytest.approx(0.075, abs=1e-15)
    for cost in (LINEAR, EffortCost("power", beta=2.0)):
        e, v = brute_force_effort(0.0, 0.1, cost, 101)
        assert e == 0.0 and v == 0.0
    e, v = brute_force_effort(0.1, 0.1, EffortCost("power", beta=2.0), 10001)
    assert e == pytest.approx(0.5, abs=1e-4) and v == pytest.approx(0.025, abs=1e-8)
    with pytest.raises(ValidationError):
        brute_force_effort(0.1, 0.1, LINEAR, 1)
