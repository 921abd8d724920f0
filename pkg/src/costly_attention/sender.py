"""Sender payoffs, upper-censorship optimization, comparative statics, media capture and the
known-cutoff benchmark."""
import hashlib
import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import _quad
from ._search import first_true, golden_max
from .dist import TypePopulation
from .errors import PreconditionError, ValidationError
from .policy import (
    _curved_then_lines,
    _lines_max,
    _null_lines,
    bi_upper_censorship,
    censor_at,
    null_info_policy,
    subdifferential,
    tangent_line,
    two_sided_improvement,
    upper_censorship,
)
from .receiver import LINEAR, EffortCost, Margin, extensive_margin, level_crossings

SCAN_POINTS = 2001


@dataclass(frozen=True)
class SolverSettings:
    grid_n: int = 201
    quad_tol: float = 1e-10
    search_tol: float = 1e-8
    max_iter: int = 200
    seed: int = 0


@dataclass
class Scenario:
    """Everything needed to evaluate the sender's problem."""

    prior: object
    population: TypePopulation
    cost: EffortCost = LINEAR
    gamma: float = 0.0
    solver: SolverSettings = field(default_factory=SolverSettings)

    def __post_init__(self):
        if self.gamma < 0:
            raise ValidationError("media-capture weight gamma must be nonnegative")
        if self.solver.grid_n < 51:
            raise ValidationError("solver.grid_n must be at least 51")

    def with_lambda(self, lam):
        """Same scenario with every type sharing attention-cost scale ``lam``."""
        dens = self.population.densities[0]
        pop = TypePopulation.degenerate(lam, dens, peak=self.population.peak)
        return replace(self, population=pop)

    def with_gamma(self, gamma):
        return replace(self, gamma=float(gamma))

    def describe(self):
        pop = self.population
        return {
            "prior": self.prior.describe(),
            "population": {
                "lambda": {"support": [float(v) for v in pop.lambdas], "weights": [float(v) for v in pop.weights]},
                "cutoff": [g.describe() for g in pop.densities],
                "peak": float(pop.peak),
            },
            "cost": self.cost.describe(),
            "gamma": float(self.gamma),
            "solver": self.solver.__dict__,
        }

    @property
    def digest(self):
        blob = json.dumps(self.describe(), sort_keys=True, default=float).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


# ------------------------------------------------------------------- payoffs


def _panel_breaks(scn, policy, lam, density):
    pts = [policy.kinks, density.kinks, [scn.prior.mean]]
    for level in scn.cost.thresholds(lam):
        pts.append(level_crossings(policy, level))
    return np.concatenate([np.asarray(p, dtype=float) for p in pts])


def _reduced_lambda(scn, policy, lam, density):
    if density.is_point:
        raise PreconditionError("the reduced payoff needs a cutoff density; use direct_payoff")
    if density.family == "uniform":
        return 0.0
    cost = scn.cost

    def integrand(c):
        return cost.value(policy.net(c), lam) * density.derivative(c)

    return _quad.integrate(integrand, 0.0, 1.0, _panel_breaks(scn, policy, lam, density), scn.solver.quad_tol)


def _direct_lambda(scn, policy, lam, density):
    x0 = scn.prior.mean
    cost, gamma = scn.cost, scn.gamma
    if density.is_point:
        z = density.zeta
        e = float(cost.effort(policy.net(z), lam))
        on_prior = 1.0 if z <= x0 else 0.0
        seen = 1.0 - subdifferential(policy, z).left_slope
        return e * seen + (1 - e) * on_prior + gamma * e

    def integrand(c):
        e = cost.effort(policy.net(c), lam)
        on_prior = (c <= x0).astype(float)
        seen = 1.0 - policy.left_slope(c)
        return (e * (seen - on_prior) + on_prior + gamma * e) * density.pdf(c)

    return _quad.integrate(integrand, 0.0, 1.0, _panel_breaks(scn, policy, lam, density), scn.solver.quad_tol)


def reduced_payoff(scn, policy):
    """Sum over cost scales of the integral of V(net(c)) against dg/dc."""
    return float(sum(w * _reduced_lambda(scn, policy, lam, g) for lam, w, g in scn.population))


def direct_payoff(scn, policy):
    """Expected sender utility a + gamma*e under canonical receiver selections."""
    return float(sum(w * _direct_lambda(scn, policy, lam, g) for lam, w, g in scn.population))


def payoff_constant(scn):
    """Policy-independent difference between direct and reduced payoffs (gamma = 0)."""
    x0 = scn.prior.mean
    return float(sum(w * g.cdf(x0) for _, w, g in scn.population))


@dataclass
class PayoffReport:
    reduced_W: float
    direct_W: float
    gap: float
    per_lambda: list

    def as_dict(self):
        return {"reduced": self.reduced_W, "direct": self.direct_W, "gap": self.gap}


def payoff_report(scn, policy):
    rows = []
    for lam, w, g in scn.population:
        red = float("nan") if g.is_point else _reduced_lambda(scn, policy, lam, g)
        rows.append({
            "lambda": float(lam),
            "weight": float(w),
            "reduced": red,
            "direct": _direct_lambda(scn, policy, lam, g),
            "margin": extensive_margin(policy, lam, scn.cost),
        })
    red = float(sum(r["weight"] * r["reduced"] for r in rows))
    direct = float(sum(r["weight"] * r["direct"] for r in rows))
    return PayoffReport(red, direct, direct - red, rows)


@dataclass
class GapReport:
    constant: float
    spread: float
    gaps: list
    expected: float
    ok: bool


def payoff_gap_check(scn, policies, tol=1e-6):
    """Direct minus reduced payoff across policies; it should not depend on the policy."""
    policies = list(policies)
    if len(policies) < 2:
        raise ValidationError("need at least two policies")
    if scn.gamma != 0:
        raise PreconditionError("gap constancy holds for gamma = 0 only")
    gaps = [direct_payoff(scn, p) - reduced_payoff(scn, p) for p in policies]
    spread = float(max(gaps) - min(gaps))
    return GapReport(float(np.mean(gaps)), spread, gaps, payoff_constant(scn), spread <= tol)


# ------------------------------------------------------------------- derivative


def censorship_payoff_derivative(scn, theta_bar):
    """d/d(theta_bar) of the reduced payoff of the upper censorship at theta_bar.

    Moving the threshold tilts the pooling line by f0(theta_bar)(x - theta_bar) on
    (theta_bar, pooled mean); only attentive cutoffs there respond.
    """
    t = float(theta_bar)
    prior = scn.prior
    dens = float(prior.pdf(t))
    if t >= 1.0 or dens == 0.0:
        return 0.0
    pol = upper_censorship(prior, t)
    top = pol.params["kink"]
    total = 0.0
    for lam, w, g in scn.population:
        if g.is_point:
            raise PreconditionError("the derivative needs a cutoff density")
        if g.family == "uniform":
            continue
        pts = np.concatenate([g.kinks] + [np.asarray(level_crossings(pol, lv)) for lv in scn.cost.thresholds(lam)])

        def integrand(x, lam=lam, g=g):
            return scn.cost.effort(pol.net(x), lam) * (x - t) * g.derivative(x)

        total += w * _quad.integrate(integrand, t, top, pts, scn.solver.quad_tol)
    return float(dens * total)


# ------------------------------------------------------------------- optimization


@dataclass
class CensorshipSolution:
    theta_star: float
    payoff: float
    reduced: float
    margins: list
    derivative_trace: list = field(default_factory=list)
    scan: tuple = ()
    method: str = "scan+golden"


def _objective(scn):
    uses_direct = scn.gamma > 0 or scn.population.has_point_cutoff
    fn = direct_payoff if uses_direct else reduced_payoff
    return (lambda t: fn(scn, upper_censorship(scn.prior, t))), uses_direct


def _margins(scn, pol):
    return [(float(lam), extensive_margin(pol, lam, scn.cost)) for lam in scn.population.lambdas]


def optimize_upper_censorship(scn, scan_points=SCAN_POINTS, trace_points=None):
    """Best upper censorship: grid scan, golden-section refinement, derivative bisection."""
    pop = scn.population
    if pop.has_point_cutoff and pop.is_degenerate and scn.cost.family == "linear":
        bench = symmetric_benchmark(scn.prior, pop.densities[0].zeta, float(pop.lambdas[0]))
        pol = upper_censorship(scn.prior, bench.theta)
        value = direct_payoff(scn, pol)
        return CensorshipSolution(bench.theta, value, float("nan"), _margins(scn, pol), method="benchmark")
    f, uses_direct = _objective(scn)
    grid = np.linspace(0.0, 1.0, scan_points)
    vals = np.array([f(t) for t in grid])
    i = int(np.argmax(vals))
    best_t, best_v = float(grid[i]), float(vals[i])
    lo, hi = float(grid[max(i - 1, 0)]), float(grid[min(i + 1, grid.size - 1)])
    tol = scn.solver.search_tol
    gt, gv = golden_max(f, lo, hi, tol=tol, max_iter=scn.solver.max_iter)
    if gv > best_v:
        best_t, best_v = gt, gv
    if not uses_direct and lo < hi:
        d = lambda t: censorship_payoff_derivative(scn, t)
        dlo, dhi = d(lo), d(hi)
        if dlo > 0 > dhi:
            root = first_true(lambda ts: np.array([d(t) <= 0 for t in ts]), lo, hi, tol=1e-13, fanout=4)
            rv = f(root)
            if rv >= best_v - 1e-15:
                best_t, best_v = root, rv
    pol = upper_censorship(scn.prior, best_t)
    trace = []
    if trace_points and not uses_direct:
        trace = [(float(t), censorship_payoff_derivative(scn, t)) for t in np.linspace(0, 1, trace_points)]
    return CensorshipSolution(
        theta_star=best_t,
        payoff=direct_payoff(scn, pol),
        reduced=float("nan") if uses_direct else best_v,
        margins=_margins(scn, pol),
        derivative_trace=trace,
        scan=(grid, vals),
    )


@dataclass
class StaticsResult:
    eta: float
    thetas: dict
    verdicts: dict
    margins: dict


def comparative_statics_cost(scn, eps_list):
    """Optimal censorship threshold at zero attention cost versus small positive costs."""
    if scn.cost.family != "linear":
        raise PreconditionError("comparative statics need a linear effort cost")
    if scn.population.has_point_cutoff:
        raise PreconditionError("comparative statics need a cutoff density")
    tol = scn.solver.search_tol
    eta = optimize_upper_censorship(scn.with_lambda(0.0)).theta_star
    if not tol < eta < 1.0 - tol:
        raise PreconditionError(f"zero-cost optimum {eta:.6g} is not interior")
    thetas, verdicts, margins = {}, {}, {}
    for eps in eps_list:
        th = eta if eps == 0 else optimize_upper_censorship(scn.with_lambda(float(eps))).theta_star
        thetas[float(eps)] = th
        margins[float(eps)] = th - eta
        verdicts[float(eps)] = bool(th > eta - tol)
    return StaticsResult(eta, thetas, verdicts, margins)


# ------------------------------------------------------------------- media capture


@dataclass
class BiCensorshipResult:
    policy: object
    theta1: float
    x1: float
    x2: float
    payoff_in: float
    payoff_out: float
    margin_in: Margin
    margin_out: Margin
    pivot: float
    branch: str

    @property
    def improvement(self):
        return self.payoff_out - self.payoff_in


def _check_media_preconditions(scn):
    if scn.cost.family != "linear":
        raise PreconditionError("bi-censorship improvement needs a linear effort cost")
    if not scn.population.is_degenerate:
        raise PreconditionError("bi-censorship improvement needs a single attention-cost scale")
    if scn.population.has_point_cutoff:
        raise PreconditionError("bi-censorship improvement needs a cutoff density")
    if scn.population.peak < scn.prior.mean:
        raise PreconditionError(
            f"cutoff peak {scn.population.peak:.6g} lies below the prior mean {scn.prior.mean:.6g}"
        )


def improve_bi_censorship(scn, policy):
    """Bi-upper censorship paying the sender weakly more than ``policy``.

    The pivot is the density peak, or the top of the extensive margin when that
    comes first. Above the pivot the policy is lowered to an upper censorship
    through the pivot point (flattest pooling slope); the tangent of the input at
    the top of the margin is kept as a floor so attentive types stay attentive;
    below the pivot everything is revealed.
    """
    _check_media_preconditions(scn)
    policy.validate()
    prior = scn.prior
    lam = float(scn.population.lambdas[0])
    p = float(scn.population.peak)
    margin = extensive_margin(policy, lam, scn.cost)
    lines = []
    branch = "empty-margin"
    if margin.empty:
        pivot = p
    else:
        pivot = min(p, margin.c_hi)
        branch = two_sided_improvement(policy, margin.c_lo, pivot).branch
        s = subdifferential(policy, margin.c_hi).left_slope
        lines.append((float(policy(margin.c_hi)) - s * margin.c_hi, s))
    theta1 = censor_at(policy, pivot).theta
    tangent = tangent_line(prior, theta1)
    # a floor that coincides with the pooling line adds nothing
    lines = [ln for ln in lines if abs(ln[0] - tangent[0]) + abs(ln[1] - tangent[1]) > 1e-12]
    pieces = _lines_max(theta1, np.inf, [tangent] + lines + _null_lines(prior))
    raw = _curved_then_lines(prior, theta1, [tangent] + lines, "generic", {})
    uses = [(a, b) for _, _, a, b in pieces]
    k = uses.index(lines[0]) if lines and lines[0] in uses else -1
    if k >= 0 and pieces[k][1] - pieces[k][0] > 1e-12 and lines[0][1] < 1.0:
        x1, x2 = pieces[k][0], pieces[k][1]
    else:
        x1 = x2 = prior.pooled_mean(theta1)
    K = bi_upper_censorship(prior, theta1, x1, x2)
    xs = np.linspace(0, 1, 401)
    if np.max(np.abs(K(xs) - raw(xs))) > 1e-9:
        K = raw
    return BiCensorshipResult(
        policy=K,
        theta1=theta1,
        x1=float(x1),
        x2=float(x2),
        payoff_in=direct_payoff(scn, policy),
        payoff_out=direct_payoff(scn, K),
        margin_in=margin,
        margin_out=extensive_margin(K, lam, scn.cost),
        pivot=pivot,
        branch=branch,
    )


def search_bi_censorship(scn, n=21):
    """Exhaustive search over feasible bi-upper censorships on an n-point grid per parameter."""
    _check_media_preconditions(scn)
    grid = np.linspace(0.0, 1.0, n)
    best = (-np.inf, None, None)
    for i, t1 in enumerate(grid):
        for j in range(i, n):
            for k in range(j, n):
                try:
                    pol = bi_upper_censorship(scn.prior, t1, grid[j], grid[k])
                except ValidationError:
                    continue
                if not pol.is_feasible:
                    continue
                v = direct_payoff(scn, pol)
                if v > best[0]:
                    best = (v, pol, (float(t1), float(grid[j]), float(grid[k])))
    return best


# ------------------------------------------------------------------- benchmark


@dataclass
class BenchmarkResult:
    theta: float
    payoff: float
    policy: object
    binding: float
    attainable: bool


def symmetric_benchmark(prior, zeta, kappa):
    """Best upper censorship when every type has cutoff ``zeta`` and attends iff
    net informativeness reaches ``kappa``."""
    zeta, kappa = float(zeta), float(kappa)
    if not 0.0 <= zeta <= 1.0 or kappa < 0:
        raise ValidationError("need zeta in [0, 1] and kappa >= 0")
    x0 = prior.mean
    if zeta < x0:
        return BenchmarkResult(0.0, 1.0, null_info_policy(prior), 0.0, True)

    def slack(t):
        t = np.asarray(t, dtype=float)
        return prior.cdf_integral(t) + prior.cdf(t) * (zeta - t) - (zeta - x0)

    pool = first_true(lambda ts: np.array([prior.pooled_mean(t) >= zeta for t in ts]), 0.0, 1.0, tol=1e-15)
    pool = min(pool, zeta)
    if float(slack(zeta)) < kappa:
        null = null_info_policy(prior)
        on_prior = 1.0 if zeta <= x0 else 0.0
        return BenchmarkResult(0.0, on_prior, null, float(null.net(zeta)) - kappa, False)
    theta = first_true(lambda ts: slack(ts) >= kappa, pool, zeta, tol=1e-15)
    pol = upper_censorship(prior, theta)
    return BenchmarkResult(theta, 1.0 - float(prior.cdf(theta)), pol, float(slack(theta)) - kappa, True)
