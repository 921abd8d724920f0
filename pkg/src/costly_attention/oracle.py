"""Brute-force and Monte Carlo cross-checks: discretized priors, random feasible policies,
exhaustive desk-scale sender search, game simulation and grid effort search."""
from dataclasses import dataclass

import numpy as np

from .dist import PosteriorMeanDistribution
from .errors import PreconditionError, ValidationError
from .policy import from_distribution
from .receiver import LINEAR
from .sender import direct_payoff, reduced_payoff

MAX_GRID = 31
SIM_BATCH = 1 << 16


@dataclass(frozen=True)
class GridPrior:
    """K atoms approximating a continuous prior, one per equal-width cell of [0, 1].

    Each atom sits at its cell's conditional mean and carries the cell's mass,
    so the atomic distribution is obtained from the prior by pooling and is a
    feasible posterior-mean distribution. For the uniform prior the atoms are
    the equally spaced cell midpoints.
    """

    prior: object
    points: np.ndarray
    masses: np.ndarray

    @classmethod
    def from_prior(cls, prior, K):
        K = int(K)
        if K < 1:
            raise ValidationError("grid size must be at least 1")
        edges = np.linspace(0.0, 1.0, K + 1)
        F = prior.cdf(edges)
        IF = prior.cdf_integral(edges)
        mass = np.diff(F)
        # int_a^b x dF = bF(b) - aF(a) - (IF(b) - IF(a))
        first_moment = np.diff(edges * F) - np.diff(IF)
        keep = mass > 0
        pts = np.where(keep, first_moment / np.where(keep, mass, 1.0), 0.5 * (edges[:-1] + edges[1:]))
        pts = np.clip(pts, edges[:-1], edges[1:])
        return cls(prior, pts[keep], mass[keep] / mass[keep].sum())

    @property
    def K(self):
        return self.points.size

    @property
    def mean(self):
        return float(self.points @ self.masses)

    @property
    def distribution(self):
        return PosteriorMeanDistribution.from_atoms(self.points, self.masses)

    def policy(self):
        return from_distribution(self.prior, self.distribution)


def _pool(points, masses, i, j):
    """Merge atoms i..j (inclusive) into one atom at their mean."""
    m = masses[i:j + 1].sum()
    x = (points[i:j + 1] @ masses[i:j + 1]) / m if m > 0 else points[i:j + 1].mean()
    return (np.concatenate([points[:i], [x], points[j + 1:]]),
            np.concatenate([masses[:i], [m], masses[j + 1:]]))


def random_feasible_distribution(grid, seed, steps=None):
    """Posterior-mean distribution from ``steps`` random contiguous poolings of the grid atoms."""
    rng = np.random.default_rng(seed)
    pts, ms = grid.points.copy(), grid.masses.copy()
    if steps is None:
        steps = int(rng.integers(0, grid.K))
    for _ in range(int(steps)):
        n = pts.size
        if n < 2:
            break
        length = int(rng.integers(2, n + 1)) if rng.random() < 0.2 else int(rng.integers(2, min(n, 4) + 1))
        i = int(rng.integers(0, n - length + 1))
        pts, ms = _pool(pts, ms, i, i + length - 1)
    return PosteriorMeanDistribution.from_atoms(pts, ms)


def random_feasible_policy(grid, seed, steps=None):
    """Feasible policy made by random local pooling of ``grid`` (a GridPrior), then integration."""
    pol = from_distribution(grid.prior, random_feasible_distribution(grid, seed, steps))
    pol.form = "random"
    pol.params = {"seed": seed, "steps": steps}
    return pol


def grid_censorship_distribution(grid, t):
    """Reveal the first ``t`` grid atoms and pool the rest into one atom."""
    pts, ms = grid.points.copy(), grid.masses.copy()
    if t < pts.size - 1:
        pts, ms = _pool(pts, ms, int(t), pts.size - 1)
    return PosteriorMeanDistribution.from_atoms(pts, ms)


@dataclass
class BruteForceResult:
    best_value: float
    descriptor: str
    values: dict


def brute_force_sender_opt(scn, K, samples, seed=None):
    """Best sender objective over all grid censorships and ``samples`` random grid policies.

    The objective is the reduced payoff, or the direct payoff when gamma > 0 or
    a cutoff is a point mass.
    """
    if int(K) > MAX_GRID:
        raise PreconditionError(f"grid size {K} exceeds the desk-scale limit {MAX_GRID}")
    grid = GridPrior.from_prior(scn.prior, K)
    use_direct = scn.gamma > 0 or scn.population.has_point_cutoff
    objective = direct_payoff if use_direct else reduced_payoff
    seed = scn.solver.seed if seed is None else seed
    values = {}
    for t in range(grid.K + 1):
        pol = from_distribution(scn.prior, grid_censorship_distribution(grid, t))
        values[f"censor:{t}"] = objective(scn, pol)
    children = np.random.SeedSequence(seed).spawn(int(samples))
    for s, child in enumerate(children):
        values[f"random:{s}"] = objective(scn, random_feasible_policy(grid, child))
    best = max(values, key=values.get)
    return BruteForceResult(values[best], best, values)


@dataclass(frozen=True)
class SimulationResult:
    estimate: float
    std_error: float
    n: int
    seed: int


def sample_posterior_means(policy, u, iters=60):
    """Inverse CDF of the policy's right derivative, by vectorized bisection on [0, 1]."""
    u = np.asarray(u, dtype=float)
    lo = np.zeros_like(u)
    hi = np.ones_like(u)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        up = policy.right_slope(mid) >= u
        hi = np.where(up, mid, hi)
        lo = np.where(up, lo, mid)
    return hi


def simulate_game(scn, policy, n, seed, batch=SIM_BATCH):
    """Monte Carlo estimate of the sender's expected utility a + gamma*e.

    Draws are split into batches with independent child seeds; batch sums are
    combined in batch order so the estimate depends only on (n, seed, batch).
    """
    n = int(n)
    if n < 1:
        raise ValidationError("need at least one draw")
    pop, cost, gamma = scn.population, scn.cost, scn.gamma
    x0 = scn.prior.mean
    sizes = [batch] * (n // batch) + ([n % batch] if n % batch else [])
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    total = total_sq = 0.0
    for size, child in zip(sizes, children):
        rng = np.random.default_rng(child)
        which = rng.choice(pop.lambdas.size, size=size, p=pop.weights)
        u_c, u_x, u_obs = rng.random(size), rng.random(size), rng.random(size)
        c = np.empty(size)
        e = np.empty(size)
        for j, (lam, _, g) in enumerate(pop):
            sel = which == j
            if not sel.any():
                continue
            c[sel] = g.quantile(u_c[sel])
            e[sel] = cost.effort(policy.net(c[sel]), lam)
        x = sample_posterior_means(policy, u_x)
        act = np.where(u_obs < e, x >= c, x0 >= c).astype(float)
        util = act + gamma * e
        total += float(util.sum())
        total_sq += float((util * util).sum())
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0) * (n / (n - 1) if n > 1 else 0.0)
    return SimulationResult(mean, float(np.sqrt(var / n)), n, int(seed))


def brute_force_effort(a, lam, cost=LINEAR, grid_n=10001):
    """Grid argmax of e*a - lam*k(e); the largest maximizer is returned with its value."""
    if int(grid_n) < 2:
        raise ValidationError("grid_n must be at least 2")
    grid = np.linspace(0.0, 1.0, int(grid_n))
    vals = grid * a - lam * np.asarray(cost.k(grid))
    i = grid.size - 1 - int(np.argmax(vals[::-1]))
    return float(grid[i]), float(vals[i])
