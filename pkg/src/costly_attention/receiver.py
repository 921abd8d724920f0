"""Receiver best responses: action at a posterior mean, attention effort, value and extensive margin."""
from dataclasses import dataclass

import numpy as np

from ._search import INV_PHI, first_true
from .errors import DomainError, ValidationError


@dataclass(frozen=True)
class ReceiverType:
    c: float
    lam: float

    def __post_init__(self):
        if not (0.0 <= self.c <= 1.0 and 0.0 <= self.lam <= 1.0):
            raise DomainError("receiver type coordinates must lie in [0, 1]")


class EffortCost:
    """Effort cost k on [0, 1], normalized so that k(0) = 0.

    ``linear``: k(e) = e.  ``power``: k(e) = e**beta with beta > 1.
    ``table``: piecewise-linear through (e, k) pairs spanning [0, 1]; a
    nonconvex table is accepted and solved by grid search.
    """

    GOLDEN_TOL = 1e-10
    FALLBACK_GRID = 1001

    def __init__(self, family="linear", beta=None, table=None):
        self.family = family
        if family == "linear":
            pass
        elif family == "power":
            if beta is None or float(beta) <= 1.0:
                raise ValidationError("power cost needs beta > 1")
            self.beta = float(beta)
        elif family == "table":
            tab = np.asarray(table, dtype=float)
            if tab.ndim != 2 or tab.shape[1] != 2 or tab.shape[0] < 2:
                raise ValidationError("cost table needs (e, k) pairs")
            es, ks = tab[:, 0], tab[:, 1]
            if es[0] != 0.0 or es[-1] != 1.0 or np.any(np.diff(es) <= 0):
                raise ValidationError("cost table abscissae must ascend from 0 to 1")
            self._es, self._ks = es, ks - ks[0]
            self._slopes = np.diff(self._ks) / np.diff(es)
            self.convex = bool(np.all(np.diff(self._slopes) >= -1e-12))
        else:
            raise ValidationError(f"unknown cost family {family!r}")

    def describe(self):
        if self.family == "power":
            return {"family": "power", "beta": self.beta}
        if self.family == "table":
            return {"family": "table", "table": np.column_stack([self._es, self._ks]).tolist()}
        return {"family": "linear"}

    def k(self, e):
        e = np.asarray(e, dtype=float)
        if self.family == "linear":
            out = e
        elif self.family == "power":
            out = e**self.beta
        else:
            out = np.interp(e, self._es, self._ks)
        return float(out) if out.ndim == 0 else out

    # -- optimal effort --------------------------------------------------------

    def effort(self, a, lam):
        """Canonical maximizer of e*a - lam*k(e); the largest one under indifference."""
        a = np.asarray(a, dtype=float)
        lam = float(lam)
        if self.family == "linear":
            out = np.where(a >= lam, 1.0, 0.0)
        elif lam == 0.0:
            out = np.ones_like(a)
        elif self.family == "power":
            b = self.beta
            # cap the ratio before the power; the interior solution is above 1 anyway
            with np.errstate(over="ignore"):
                ratio = np.minimum(np.maximum(a, 0.0) / (lam * b), 1.0)
            out = ratio ** (1.0 / (b - 1.0))
        else:
            out = self._table_effort(a, lam)
        return float(out) if out.ndim == 0 else out

    def _table_effort(self, a, lam):
        flat = a.reshape(-1)
        if self.convex:
            lo = np.zeros_like(flat)
            hi = np.ones_like(flat)
            c = hi - INV_PHI * (hi - lo)
            d = lo + INV_PHI * (hi - lo)
            for _ in range(80):
                if np.all(hi - lo <= self.GOLDEN_TOL):
                    break
                left = c * flat - lam * self.k(c) >= d * flat - lam * self.k(d)
                hi = np.where(left, d, hi)
                lo = np.where(left, lo, c)
                c = hi - INV_PHI * (hi - lo)
                d = lo + INV_PHI * (hi - lo)
            found = 0.5 * (lo + hi)
        else:
            grid = np.linspace(0.0, 1.0, self.FALLBACK_GRID)
            vals = flat[:, None] * grid[None, :] - lam * self.k(grid)[None, :]
            found = grid[vals.shape[1] - 1 - np.argmax(vals[:, ::-1], axis=1)]
        # the objective is piecewise linear in e, so the table vertices are exact candidates
        cand = np.concatenate([self._es[None, :].repeat(flat.size, 0), found[:, None]], axis=1)
        vals = flat[:, None] * cand - lam * self.k(cand)
        best = vals.max(axis=1, keepdims=True)
        pick = np.where(vals >= best - 1e-15, cand, -np.inf).max(axis=1)
        return pick.reshape(a.shape)

    def value(self, a, lam):
        """V(a) = max_e e*a - lam*k(e)."""
        a = np.asarray(a, dtype=float)
        lam = float(lam)
        if self.family == "linear":
            out = np.maximum(0.0, a - lam)
        else:
            e = self.effort(a, lam)
            out = e * a - lam * self.k(e)
        return float(out) if np.ndim(out) == 0 else out

    def argmax_interval(self, a, lam, slack=0.0):
        """Closed interval of efforts within ``slack`` of the optimum."""
        a, lam = float(a), float(lam)
        if self.family == "linear":
            if a > lam + slack:
                return (1.0, 1.0)
            if a < lam - slack:
                return (0.0, 0.0)
            return (0.0, 1.0)
        if lam == 0.0:
            return (1.0, 1.0) if a > slack else (0.0, 1.0)
        if self.family == "power":
            e = self.effort(a, lam)
            if slack <= 0:
                return (e, e)
            return self._power_slack_interval(a, lam, e, slack)
        else:
            grid = np.unique(np.concatenate([np.linspace(0, 1, self.FALLBACK_GRID), self._es]))
        vals = grid * a - lam * self.k(grid)
        good = grid[vals >= vals.max() - max(slack, 1e-15)]
        return (float(good.min()), float(good.max()))

    def _power_slack_interval(self, a, lam, e_star, slack, iters=100):
        # strictly concave objective: the near-optimal set is an interval around e_star
        f = lambda e: e * a - lam * e ** self.beta
        floor = f(e_star) - slack
        ends = []
        for lo, hi in ((e_star, 0.0), (e_star, 1.0)):
            if f(hi) >= floor:
                ends.append(hi)
                continue
            for _ in range(iters):
                mid = 0.5 * (lo + hi)
                if f(mid) >= floor:
                    lo = mid
                else:
                    hi = mid
            ends.append(lo)
        return (float(ends[0]), float(ends[1]))

    def thresholds(self, lam):
        """Values of net informativeness where the effort rule changes regime."""
        lam = float(lam)
        if self.family == "linear":
            return [lam]
        if lam == 0.0:
            return [0.0]
        if self.family == "power":
            return [0.0, lam * self.beta]
        return sorted(set([0.0] + list(lam * self._slopes)))

    def __repr__(self):
        return f"EffortCost({self.describe()})"


LINEAR = EffortCost("linear")


# ------------------------------------------------------------------- operations


def optimal_action(x, c):
    """1 when the posterior mean is at least the cutoff, else 0."""
    x = np.asarray(x, dtype=float)
    out = np.where(x >= c, 1, 0)
    return int(out) if out.ndim == 0 else out


def value_of_effort(e, a, lam, cost=LINEAR):
    e = np.asarray(e, dtype=float)
    if np.any((e < 0) | (e > 1)):
        raise DomainError("effort must lie in [0, 1]")
    out = e * a - lam * np.asarray(cost.k(e))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class EffortChoice:
    effort_set: tuple
    canonical: float

    def __contains__(self, e):
        return self.effort_set[0] - 1e-12 <= e <= self.effort_set[1] + 1e-12


def optimal_effort(a, lam, cost=LINEAR):
    if a < 0:
        raise DomainError("net informativeness must be nonnegative")
    return EffortChoice(cost.argmax_interval(a, lam), float(cost.effort(a, lam)))


def receiver_value(a, lam, cost=LINEAR):
    if np.any(np.asarray(a) < 0):
        raise DomainError("net informativeness must be nonnegative")
    return cost.value(a, lam)


@dataclass(frozen=True)
class Margin:
    """Cutoff interval of types exerting positive effort; ``empty`` when nobody attends."""

    c_lo: float
    c_hi: float
    empty: bool = False

    @classmethod
    def none(cls):
        return cls(float("nan"), float("nan"), True)

    def __iter__(self):
        return iter((self.c_lo, self.c_hi))

    def mass(self, density):
        if self.empty:
            return 0.0
        return float(density.cdf(self.c_hi) - density.cdf(self.c_lo))


def _first_switch(policy, pred, lo, hi, tol):
    """Smallest c in [lo, hi] with pred(c) true, for a predicate that switches once.

    The switch is bracketed between breakpoints of the policy first; on an
    affine stretch the crossing of net informativeness is then solved directly
    when ``pred`` has a ``level`` attribute, else bisected.
    """
    knots = np.concatenate([[lo], policy.edges[(policy.edges > lo) & (policy.edges < hi)], [hi]])
    x0 = policy.prior.mean
    if lo < x0 < hi:
        knots = np.unique(np.concatenate([knots, [x0]]))
    hits = np.asarray(pred(knots), dtype=bool)
    if hits[0]:
        return float(lo)
    if not hits.any():
        return float(hi)
    k = int(np.argmax(hits))
    u, v = float(knots[k - 1]), float(knots[k])
    level = getattr(pred, "level", None)
    j = int(policy._piece(0.5 * (u + v)))
    if level is not None and policy.w[j] == 0.0:
        fu, fv = float(policy.net(u)) - level, float(policy.net(v)) - level
        if fu != fv:
            root = min(max(u + (v - u) * fu / (fu - fv), u), v)
            # snap to the first point where the predicate holds, within a few ulps
            cand = root
            for _ in range(4):
                if _holds(pred, cand) and (cand == u or not _holds(pred, np.nextafter(cand, u))):
                    return float(cand)
                cand = np.nextafter(cand, v)
    return first_true(pred, u, v, tol=tol)


def _holds(pred, x):
    return bool(np.asarray(pred(np.array([x])))[0])


class _LevelPredicate:
    def __init__(self, fn, level):
        self.fn, self.level = fn, level

    def __call__(self, c):
        return self.fn(c)


def extensive_margin(policy, lam, cost=LINEAR, tol=1e-14):
    """(c_lo, c_hi): the sup of zero-effort cutoffs below the prior mean and the inf above it."""
    x0 = policy.prior.mean
    if cost.effort(policy.net(x0), lam) == 0.0:
        return Margin.none()

    def idle(c):
        return np.asarray(cost.effort(policy.net(np.asarray(c)), lam)) == 0.0

    level = float(lam) if cost.family == "linear" else None
    attend = _LevelPredicate(lambda c: ~idle(c), level)
    quit_ = _LevelPredicate(idle, level)
    c_lo = _first_switch(policy, attend, 0.0, x0, tol)
    c_hi = _first_switch(policy, quit_, x0, 1.0, tol)
    return Margin(c_lo, c_hi)


def level_crossings(policy, level, tol=1e-14):
    """Cutoffs on each side of the prior mean where net informativeness crosses ``level``."""
    x0 = policy.prior.mean
    if policy.net(x0) <= level:
        return []
    left = _first_switch(policy, _LevelPredicate(lambda c: policy.net(c) >= level, level), 0.0, x0, tol)
    right = _first_switch(policy, _LevelPredicate(lambda c: policy.net(c) < level, level), x0, 1.0, tol)
    return [left, right]


def receiver_expected_utility(policy, rtype, cost=LINEAR):
    """V(net(c)) + x0 - c + IF_bar(c)."""
    c, lam = rtype.c, rtype.lam
    x0 = policy.prior.mean
    return float(cost.value(policy.net(c), lam) + x0 - c + max(0.0, c - x0))


@dataclass(frozen=True)
class BestResponse:
    effort: EffortChoice
    cutoff: float

    @property
    def canonical_effort(self):
        return self.effort.canonical

    def action(self, x):
        return optimal_action(x, self.cutoff)


def best_response(policy, rtype, cost=LINEAR):
    return BestResponse(optimal_effort(policy.net(rtype.c), rtype.lam, cost), rtype.c)
