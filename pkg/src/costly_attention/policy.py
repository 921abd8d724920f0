"""Information policies: convex functions between the no-information and full-information bounds.

A policy is stored as consecutive pieces on [0, inf); on each piece it equals
``w * IF0(x) + a + b * x`` where IF0 is the full-information policy of the prior.
This form is closed under mixing and covers censorships exactly.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ._search import first_true
from .dist import PosteriorMeanDistribution
from .errors import DomainError, ValidationError

FEAS_TOL = 1e-10
CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class Subdifferential:
    left_slope: float
    right_slope: float

    def contains(self, other, slack=1e-10):
        return self.left_slope <= other.left_slope + slack and other.right_slope <= self.right_slope + slack

    def __iter__(self):
        return iter((self.left_slope, self.right_slope))


@dataclass
class PolicyReport:
    """Outcome of a convexity/feasibility audit; ``violations`` holds (kind, x, amount)."""

    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    @property
    def first(self):
        return self.violations[0] if self.violations else None

    def __bool__(self):
        return self.ok


class InformationPolicy:
    """Piecewise policy ``x -> w_j IF0(x) + a_j + b_j x`` on ``[edges[j], edges[j+1])``."""

    def __init__(self, prior, edges, w, a, b, form="generic", params=None):
        edges = np.asarray(edges, dtype=float)
        w, a, b = (np.atleast_1d(np.asarray(v, dtype=float)) for v in (w, a, b))
        if edges.size != w.size + 1 or not (w.size == a.size == b.size):
            raise ValidationError("edges must have one more entry than the piece arrays")
        if edges[0] != 0.0 or edges[-1] != np.inf or np.any(np.diff(edges) < 0):
            raise ValidationError("edges must ascend from 0 to inf")
        keep = np.diff(edges) > 0
        edges = np.concatenate([[0.0], edges[1:][keep]])
        w, a, b = w[keep], a[keep], b[keep]
        # merge neighbours with identical coefficients
        same = (np.diff(w) == 0) & (np.diff(a) == 0) & (np.diff(b) == 0)
        if same.any():
            keep_piece = np.concatenate([[True], ~same])
            edges = np.concatenate([edges[:-1][keep_piece], [np.inf]])
            w, a, b = w[keep_piece], a[keep_piece], b[keep_piece]
        self.prior = prior
        self.edges, self.w, self.a, self.b = edges, w, a, b
        self.form = form
        self.params = dict(params or {})
        self._curved = bool(np.any(w != 0))
        self._report = None

    # ---------------------------------------------------------------- evaluation

    def _piece(self, x, side="right"):
        j = np.searchsorted(self.edges, x, side=side) - 1
        return np.clip(j, 0, self.w.size - 1)

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        if np.any(xa < 0):
            raise DomainError("policies are defined on x >= 0")
        j = self._piece(xa)
        out = self.a[j] + self.b[j] * xa
        if self._curved:
            out = out + self.w[j] * self.prior.cdf_integral(xa)
        return float(out) if xa.ndim == 0 else out

    value = __call__

    def right_slope(self, x):
        xa = np.asarray(x, dtype=float)
        j = self._piece(xa, "right")
        out = self.b[j] + (self.w[j] * self.prior.cdf(xa) if self._curved else 0.0)
        return float(out) if xa.ndim == 0 else out

    def left_slope(self, x):
        xa = np.asarray(x, dtype=float)
        j = self._piece(xa, "left")
        out = self.b[j] + (self.w[j] * self.prior.cdf(xa) if self._curved else 0.0)
        out = np.where(xa <= 0, 0.0, out)
        return float(out) if xa.ndim == 0 else out

    def cdf(self, x):
        """Posterior-mean CDF: the right derivative of the policy."""
        return self.right_slope(x)

    def net(self, c):
        """I(c) - IF_bar(c) without the feasibility gate."""
        ca = np.asarray(c, dtype=float)
        out = np.asarray(self(ca)) - np.maximum(0.0, ca - self.prior.mean)
        out = np.where((out < 0) & (out > -CLAMP_TOL), 0.0, out)
        return float(out) if ca.ndim == 0 else out

    @property
    def kinks(self):
        """Finite interior abscissae where the representation changes (plus prior kinks)."""
        inner = self.edges[1:-1]
        pts = [inner[inner < 1.0]]
        if self._curved and self.prior.kinks.size:
            pts.append(self.prior.kinks)
        return np.unique(np.concatenate(pts)) if pts else np.empty(0)

    @property
    def segments(self):
        return [(float(lo), float(hi), float(w), float(a), float(b))
                for lo, hi, w, a, b in zip(self.edges[:-1], self.edges[1:], self.w, self.a, self.b)]

    def points(self, n=201):
        """(x, I(x)) table on a grid merged with the breakpoints, suitable for export."""
        xs = np.unique(np.concatenate([np.linspace(0, 1, n), self.kinks]))
        return xs, np.asarray(self(xs))

    # ---------------------------------------------------------------- validation

    def audit(self, grid_n=201, tol=FEAS_TOL):
        """Convexity and feasibility audit on breakpoints, midpoints and interior extrema."""
        prior = self.prior
        rep = PolicyReport()
        inner = self.edges[1:-1]
        if np.any(self.w < -tol):
            j = int(np.argmax(self.w < -tol))
            rep.violations.append(("convexity", float(self.edges[j]), float(self.w[j])))
        for x in inner:
            gap = self.left_slope(x) - self.right_slope(x)
            if gap > tol:
                rep.violations.append(("convexity", float(x), float(gap)))
        grid = np.linspace(0.0, 1.0, grid_n)
        fin = np.concatenate([[0.0], inner[inner <= 1.0], [1.0]])
        probes = [grid, 0.5 * (grid[1:] + grid[:-1]), fin, 0.5 * (fin[1:] + fin[:-1]), [prior.mean]]
        # interior extrema of the gap to each bound on curved or affine pieces
        for lo, hi, w, a, b in self.segments:
            hi = min(hi, 1.0)
            if hi <= lo:
                continue
            levels = [b / (1.0 - w)] if w < 1 else []
            if w > 0:
                levels += [-b / w, (1.0 - b) / w]
            for level in levels:
                if 0.0 <= level <= 1.0:
                    probes.append([float(np.clip(prior.quantile(level), lo, hi))])
        xs = np.unique(np.concatenate([np.asarray(p, dtype=float) for p in probes]))
        vals = np.asarray(self(xs))
        over = vals - prior.cdf_integral(xs)
        under = prior.null_integral(xs) - vals
        for kind, excess in (("above_full", over), ("below_null", under)):
            bad = np.flatnonzero(excess > tol)
            for k in bad[:5]:
                rep.violations.append((kind, float(xs[k]), float(excess[k])))
        tail = self(np.array([1.0, 2.0])) - (np.array([1.0, 2.0]) - prior.mean)
        if np.any(np.abs(tail) > tol):
            rep.violations.append(("tail", 1.0, float(np.max(np.abs(tail)))))
        rep.violations.sort(key=lambda v: v[1])
        return rep

    def validate(self):
        """Raise ValidationError at the first offending abscissa; cached."""
        if self._report is None:
            self._report = self.audit()
        if not self._report.ok:
            kind, x, amount = self._report.first
            raise ValidationError(f"policy fails {kind} at x={x:.12g} (by {amount:.3g})", where=x)
        return self

    @property
    def is_feasible(self):
        if self._report is None:
            self._report = self.audit()
        return self._report.ok

    def plus_piecewise_linear(self, xs, ys):
        """Add the piecewise-linear bump through (xs, ys), zero outside [xs[0], xs[-1]].

        The result is generally not a feasible policy; it exists to build
        corrupted inputs for checkers.
        """
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        pts = np.unique(np.concatenate([self.edges[:-1], xs]))
        edges = np.concatenate([pts, [np.inf]])
        mids = np.concatenate([0.5 * (pts[1:] + pts[:-1]), [pts[-1] + 1.0]])
        j = self._piece(mids)
        w, a, b = self.w[j].copy(), self.a[j].copy(), self.b[j].copy()
        seg = np.searchsorted(xs, mids, side="right") - 1
        inside = (seg >= 0) & (seg < xs.size - 1)
        k = np.clip(seg, 0, xs.size - 2)
        slope = (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])
        a = a + np.where(inside, ys[k] - slope * xs[k], 0.0)
        b = b + np.where(inside, slope, 0.0)
        return InformationPolicy(self.prior, edges, w, a, b, form="generic", params={"perturbed": True})

    def __repr__(self):
        ps = ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in self.params.items())
        return f"InformationPolicy({self.form}{', ' + ps if ps else ''})"


# ------------------------------------------------------------------- building blocks


def _lines_max(lo, hi, lines):
    """Upper envelope of affine functions on [lo, hi] as [(lo, hi, a, b), ...]."""
    cuts = {lo, hi}
    for i, (a1, b1) in enumerate(lines):
        for a2, b2 in lines[i + 1:]:
            if b1 != b2:
                x = (a2 - a1) / (b1 - b2)
                if lo < x < hi:
                    cuts.add(x)
    cuts = sorted(cuts)
    out = []
    for l, h in zip(cuts[:-1], cuts[1:]):
        probe = 0.5 * (l + h) if np.isfinite(h) else l + 1.0
        a, b = max(lines, key=lambda ab: (ab[0] + ab[1] * probe, ab[1]))
        if out and out[-1][2] == a and out[-1][3] == b:
            out[-1] = (out[-1][0], h, a, b)
        else:
            out.append((l, h, a, b))
    return out


def _null_lines(prior):
    return [(0.0, 0.0), (-prior.mean, 1.0)]


def _from_segments(prior, segments, form, params):
    """segments: list of (lo, hi, w, a, b) covering [0, inf) in order."""
    edges = [segments[0][0]] + [s[1] for s in segments]
    w = [s[2] for s in segments]
    a = [s[3] for s in segments]
    b = [s[4] for s in segments]
    return InformationPolicy(prior, edges, w, a, b, form=form, params=params)


def _curved_then_lines(prior, split, lines, form, params):
    """IF0 on [0, split] followed by max(IF_bar, lines) on [split, inf)."""
    segs = [(0.0, split, 1.0, 0.0, 0.0)] if split > 0 else []
    for l, h, a, b in _lines_max(split, np.inf, list(lines) + _null_lines(prior)):
        segs.append((l, h, 0.0, a, b))
    return _from_segments(prior, segs, form, params)


def tangent_line(prior, theta):
    """(intercept, slope) of the full-information policy's tangent at theta."""
    s = float(prior.cdf(theta))
    return float(prior.cdf_integral(theta)) - s * theta, s


# ------------------------------------------------------------------- constructors


def full_info_policy(prior):
    return InformationPolicy(prior, [0.0, np.inf], [1.0], [0.0], [0.0], form="full")


def null_info_policy(prior):
    x0 = prior.mean
    return InformationPolicy(prior, [0.0, x0, np.inf], [0.0, 0.0], [0.0, -x0], [0.0, 1.0], form="null")


def upper_censorship(prior, theta_bar):
    """Reveal states below ``theta_bar`` and pool the rest."""
    t = float(theta_bar)
    if not 0.0 <= t <= 1.0:
        raise DomainError("censorship threshold must lie in [0, 1]")
    if t >= 1.0:
        pol = full_info_policy(prior)
    else:
        pol = _curved_then_lines(prior, t, [tangent_line(prior, t)], "upper_censorship", {})
    pol.form = "upper_censorship"
    pol.params = {"theta_bar": t, "kink": prior.pooled_mean(t)}
    return pol


def lower_censorship(prior, theta):
    """Pool states below ``theta`` and reveal the rest."""
    t = float(theta)
    if not 0.0 <= t <= 1.0:
        raise DomainError("censorship threshold must lie in [0, 1]")
    a, b = tangent_line(prior, t)
    segs = [(l, h, 0.0, ai, bi) for l, h, ai, bi in _lines_max(0.0, t, [(a, b), (0.0, 0.0)])] if t > 0 else []
    segs.append((t, np.inf, 1.0, 0.0, 0.0))
    return _from_segments(prior, segs, "lower_censorship", {"theta": t})


def bi_upper_censorship(prior, theta1, x1, x2, tol=1e-12):
    """Full revelation on [0, theta1], the tangent at theta1 up to x1, then a line
    reaching the no-information policy at x2.

    With ``x1 == x2`` the middle segment is empty and the result is the upper
    censorship at ``theta1``.
    """
    t1, x1, x2 = float(theta1), float(x1), float(x2)
    if not (0.0 <= t1 <= x1 + tol and x1 <= x2 + tol and x2 <= 1.0 + tol):
        raise ValidationError("bi-upper censorship needs 0 <= theta1 <= x1 <= x2 <= 1")
    params = {"theta1": t1, "x1": x1, "x2": x2}
    if x2 - x1 <= tol or t1 >= 1.0:
        pol = upper_censorship(prior, t1)
        pol.form = "bi_upper_censorship"
        pol.params = dict(params, slope=float(prior.cdf(t1)))
        return pol
    a_t, b_t = tangent_line(prior, t1)
    y1 = a_t + b_t * x1
    y2 = max(0.0, x2 - prior.mean)
    m = (y2 - y1) / (x2 - x1)
    if m < b_t - 1e-10 or m > 1.0 + 1e-10:
        raise ValidationError(f"bi-upper censorship slope {m:.6g} outside [{b_t:.6g}, 1]: not convex")
    segs = [(0.0, t1, 1.0, 0.0, 0.0)] if t1 > 0 else []
    segs.append((t1, x1, 0.0, a_t, b_t))
    segs.append((x1, x2, 0.0, y2 - m * x2, m))
    for l, h, a, b in _lines_max(x2, np.inf, _null_lines(prior)):
        segs.append((l, h, 0.0, a, b))
    return _from_segments(prior, segs, "bi_upper_censorship", dict(params, slope=m))


def mix(policy, e):
    """e * I + (1 - e) * IF_bar."""
    e = float(e)
    if not 0.0 <= e <= 1.0:
        raise DomainError("mixing weight must lie in [0, 1]")
    x0 = policy.prior.mean
    pts = np.unique(np.concatenate([policy.edges[:-1], [x0]]))
    mids = np.concatenate([0.5 * (pts[1:] + pts[:-1]), [pts[-1] + 1.0]])
    j = policy._piece(mids)
    above = mids > x0
    w = e * policy.w[j]
    a = e * policy.a[j] + (1 - e) * np.where(above, -x0, 0.0)
    b = e * policy.b[j] + (1 - e) * np.where(above, 1.0, 0.0)
    out = InformationPolicy(policy.prior, np.concatenate([pts, [np.inf]]), w, a, b,
                            form="mixture", params={"weight": e, "base": policy.form})
    if policy._report is not None and policy._report.ok:
        out._report = PolicyReport()
    return out


def from_points(prior, xs, ys, form="generic"):
    """Piecewise-linear policy through ordered (x, I(x)) pairs starting at x = 0.

    Beyond the last abscissa the policy continues with slope 1.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
        raise ValidationError("need at least two (x, I(x)) pairs")
    if xs[0] != 0.0:
        raise ValidationError("policy table must start at x = 0", where=float(xs[0]))
    if np.any(np.diff(xs) <= 0):
        k = int(np.argmax(np.diff(xs) <= 0))
        raise ValidationError("abscissae must be strictly increasing", where=float(xs[k + 1]))
    slopes = np.diff(ys) / np.diff(xs)
    edges = np.concatenate([xs, [np.inf]])
    a = np.concatenate([ys[:-1] - slopes * xs[:-1], [ys[-1] - xs[-1]]])
    b = np.concatenate([slopes, [1.0]])
    return InformationPolicy(prior, edges, np.zeros(a.size), a, b, form=form)


def from_distribution(prior, dist):
    """Policy of a step posterior-mean distribution (integral of its CDF)."""
    if not isinstance(dist, PosteriorMeanDistribution) or dist.kind != "step":
        raise ValidationError("expected a step PosteriorMeanDistribution")
    xs = np.unique(np.concatenate([[0.0], dist.breakpoints]))
    return from_points(prior, xs, dist.cdf_integral(xs))


def pointwise_max(policies, samples=48):
    """Upper envelope of policies sharing one prior.

    On each interval between merged breakpoints the winning piece is found on a
    sample grid and switch points are refined with Brent's method.
    """
    policies = list(policies)
    if not policies:
        raise ValidationError("empty menu")
    prior = policies[0].prior
    for p in policies[1:]:
        if p.prior is not prior:
            raise ValidationError("policies refer to different priors")
    pts = np.unique(np.concatenate([p.edges[:-1] for p in policies] + [[1.0]]))
    pts = pts[pts <= 1.0]
    bounds = list(zip(pts[:-1], pts[1:]))
    segs = []

    def coeffs(p, x):
        j = int(p._piece(np.array([x]))[0])
        return p.w[j], p.a[j], p.b[j]

    def val(c, x):
        w, a, b = c
        return w * prior.cdf_integral(x) + a + b * x if w else a + b * x

    for lo, hi in bounds:
        cand = [coeffs(p, 0.5 * (lo + hi)) for p in policies]
        xs = np.linspace(lo, hi, samples + 1)
        table = np.array([val(c, xs) for c in cand])
        top = table.max(axis=0)
        # among near-ties prefer the candidate with the larger slope to the right
        winners = []
        for k in range(xs.size):
            near = np.flatnonzero(table[:, k] >= top[k] - 1e-14)
            winners.append(int(near[-1]) if k == xs.size - 1 else int(near[0]))
        start = lo
        cur = winners[0]
        for k in range(1, xs.size):
            nxt = winners[k]
            if nxt != cur and table[cur, k] < top[k] - 1e-14:
                f = lambda x, i=cur, j=nxt: float(val(cand[i], x) - val(cand[j], x))
                xa, xb = xs[k - 1], xs[k]
                cross = optimize.brentq(f, xa, xb, xtol=1e-15) if f(xa) * f(xb) < 0 else xa
                segs.append((start, cross, *cand[cur]))
                start, cur = cross, nxt
        segs.append((start, hi, *cand[cur]))
    segs.append((1.0, np.inf, 0.0, -prior.mean, 1.0))
    return _from_segments(prior, segs, "envelope", {"size": len(policies)})


# ------------------------------------------------------------------- operators


def net_informativeness(policy, c):
    """I(c) - IF_bar(c) for a feasible policy; tiny negatives are clamped to zero."""
    ca = np.asarray(c, dtype=float)
    if np.any((ca < 0) | (ca > 1)):
        raise DomainError("cutoff must lie in [0, 1]")
    policy.validate()
    return policy.net(c)


def subdifferential(policy, x, snap=1e-12):
    """One-sided slopes at x; abscissae within ``snap`` of a breakpoint are read at it."""
    if x < 0:
        raise DomainError("x must be nonnegative")
    inner = policy.edges[1:-1]
    if inner.size:
        k = int(np.argmin(np.abs(inner - x)))
        if abs(inner[k] - x) <= snap * max(1.0, abs(x)):
            x = float(inner[k])
    return Subdifferential(float(policy.left_slope(x)), float(policy.right_slope(x)))


def blackwell_compare(I, J, grid_n=201, tol=FEAS_TOL):
    """'more', 'less', 'equal' or 'incomparable' by pointwise comparison."""
    if I.prior is not J.prior and I.prior.describe() != J.prior.describe():
        raise ValidationError("policies refer to different priors")
    grid = np.linspace(0, 1, grid_n)
    pts = np.unique(np.concatenate([grid, I.kinks, J.kinks]))
    xs = np.unique(np.concatenate([pts, 0.5 * (pts[1:] + pts[:-1])]))
    d = np.asarray(I(xs)) - np.asarray(J(xs))
    ge, le = bool(np.all(d >= -tol)), bool(np.all(d <= tol))
    if ge and le:
        return "equal"
    if ge:
        return "more"
    if le:
        return "less"
    return "incomparable"


def _line_below_full(prior, x_ref, y_ref, s, lo, hi, tol=CLAMP_TOL):
    """Does y_ref + s (x - x_ref) stay below IF0 on [lo, hi]? (exact via tangency)."""
    xs = [lo, hi]
    if 0.0 <= s <= 1.0:
        xs.append(float(np.clip(prior.quantile(s), lo, hi)))
    xs = np.array(xs)
    return bool(np.all(prior.cdf_integral(xs) - (y_ref + s * (xs - x_ref)) >= -tol))


def _tangency_from_right(prior, zeta, y, tol=1e-15, max_iter=256):
    """Smallest tangency point theta in [0, zeta] whose tangent passes above (zeta, y).

    A line through (zeta, y) with slope F0(theta) stays below IF0 on [0, zeta]
    exactly when the tangent at theta lies above y at zeta, so bisecting on the
    tangency abscissa is the same search as bisecting on admissible slopes.
    """
    def ok(t):
        t = np.asarray(t, dtype=float)
        return prior.cdf_integral(t) + prior.cdf(t) * (zeta - t) >= y
    if y <= 0.0:
        return 0.0
    if y >= float(prior.cdf_integral(zeta)) - 1e-15:
        return zeta
    return first_true(ok, 0.0, zeta, tol=tol, max_iter=max_iter)


def _tangency_from_left(prior, c, y, tol=1e-15, max_iter=256):
    """Largest tangency point theta in [c, 1] whose tangent passes above (c, y)."""
    def fails(t):
        t = np.asarray(t, dtype=float)
        return prior.cdf_integral(t) + prior.cdf(t) * (c - t) < y
    if y >= float(prior.cdf_integral(c)) - 1e-15:
        return c
    return first_true(fails, c, 1.0, tol=tol, max_iter=max_iter)


@dataclass
class CensorResult:
    theta: float
    policy: InformationPolicy
    slope: float


def censor_at(policy, zeta, tol=1e-12, max_iter=256):
    """Upper censorship through (zeta, I(zeta)) with the flattest admissible pooling slope.

    It lies above the input on [0, zeta], below it beyond zeta, and its left
    slope at zeta does not exceed the input's.
    """
    zeta = float(zeta)
    if not 0.0 <= zeta <= 1.0:
        raise DomainError("zeta must lie in [0, 1]")
    policy.validate()
    prior = policy.prior
    y = float(policy(zeta))
    top = float(subdifferential(policy, zeta).left_slope)
    theta = _tangency_from_right(prior, zeta, y, max_iter=max_iter)
    m = float(prior.cdf(theta))
    if m > top + tol:
        raise ValidationError(f"no admissible pooling slope at zeta={zeta}", where=zeta)
    return CensorResult(theta, upper_censorship(prior, theta), m)


@dataclass
class TwoSidedResult:
    policy: InformationPolicy
    branch: str
    chord_slope: float
    ell: float
    m: float
    theta_l: float
    theta_m: float


def two_sided_improvement(policy, c_lo, c_hi, tol=1e-12):
    """Policy matching I at c_lo and c_hi, weakly above I between them, with a bottom
    pooling region, a revelation band and a top pooling region.

    Tries the chord between the two points first ('chord'); if the chord leaves
    the feasible set, uses the extreme tangent slopes from each end ('tangent').
    """
    c_lo, c_hi = float(c_lo), float(c_hi)
    if not 0.0 <= c_lo <= c_hi <= 1.0:
        raise DomainError("need 0 <= c_lo <= c_hi <= 1")
    policy.validate()
    prior = policy.prior
    y_lo, y_hi = float(policy(c_lo)), float(policy(c_hi))
    theta_m = _tangency_from_right(prior, c_hi, y_hi)
    m = float(prior.cdf(theta_m))
    theta_l = _tangency_from_left(prior, c_lo, y_lo)
    ell = float(prior.cdf(theta_l))
    if c_hi - c_lo > 1e-12:
        s = (y_hi - y_lo) / (c_hi - c_lo)
    else:
        s = float(policy.right_slope(c_lo))
    line = (y_lo - s * c_lo, s)
    if 0.0 <= s <= 1.0 and _line_below_full(prior, c_lo, y_lo, s, 0.0, 1.0):
        segs = [(l, h, 0.0, a, b) for l, h, a, b in _lines_max(0.0, np.inf, [line] + _null_lines(prior))]
        pol = _from_segments(prior, segs, "generic", {"c_lo": c_lo, "c_hi": c_hi, "branch": "chord"})
        return TwoSidedResult(pol, "chord", s, ell, m, theta_l, theta_m)
    theta_m = max(theta_m, theta_l)
    low = (y_lo - ell * c_lo, ell)
    high = (y_hi - m * c_hi, m)
    segs = [(l, h, 0.0, a, b) for l, h, a, b in _lines_max(0.0, theta_l, [low] + _null_lines(prior))]
    segs.append((theta_l, theta_m, 1.0, 0.0, 0.0))
    segs += [(l, h, 0.0, a, b) for l, h, a, b in _lines_max(theta_m, np.inf, [high] + _null_lines(prior))]
    pol = _from_segments(prior, segs, "generic", {"c_lo": c_lo, "c_hi": c_hi, "branch": "tangent"})
    return TwoSidedResult(pol, "tangent", s, ell, m, theta_l, theta_m)
