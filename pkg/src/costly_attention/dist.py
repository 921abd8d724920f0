"""Distributions on [0, 1]: posterior-mean CDFs, priors, cutoff densities and type populations."""
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from . import _quad
from .errors import DomainError, ValidationError

ATOM_TOL = 1e-12
NORM_TOL = 1e-8


def _as_array(x):
    return np.asarray(x, dtype=float)


def _scalar_or_array(out, x):
    return float(out) if np.ndim(x) == 0 else out


class PosteriorMeanDistribution:
    """CDF on [0, 1] given at breakpoints.

    ``kind="step"`` treats each breakpoint as an atom (right-continuous steps),
    ``kind="linear"`` interpolates the CDF linearly between breakpoints.
    """

    def __init__(self, breakpoints, cdf_values, kind="step"):
        x = _as_array(breakpoints)
        F = _as_array(cdf_values)
        if x.ndim != 1 or x.shape != F.shape or x.size == 0:
            raise ValidationError("breakpoints and cdf_values must be equal-length 1-D arrays")
        if kind not in ("step", "linear"):
            raise ValidationError(f"unknown interpolation kind {kind!r}")
        if np.any(np.diff(x) <= 0):
            raise ValidationError("breakpoints must be strictly increasing")
        if x[0] < 0 or x[-1] > 1:
            raise ValidationError("breakpoints must lie in [0, 1]")
        if np.any(np.diff(F) < -ATOM_TOL) or F.min() < -ATOM_TOL or F.max() > 1 + ATOM_TOL:
            bad = int(np.argmax(np.diff(F) < -ATOM_TOL)) if np.any(np.diff(F) < -ATOM_TOL) else 0
            raise ValidationError("cdf_values must be nondecreasing within [0, 1]", where=float(x[bad]))
        if abs(F[-1] - 1.0) > 1e-10:
            raise ValidationError("final cdf value must equal 1")
        self.breakpoints = x
        self.cdf_values = np.clip(F, 0.0, 1.0)
        self.kind = kind
        # integral of F from 0 up to each breakpoint
        if kind == "step":
            seg = self.cdf_values[:-1] * np.diff(x)
        else:
            seg = 0.5 * (self.cdf_values[:-1] + self.cdf_values[1:]) * np.diff(x)
        self._cum = np.concatenate([[0.0], np.cumsum(seg)])
        self.mean = 1.0 - float(self.cdf_integral(1.0))

    @classmethod
    def from_atoms(cls, points, masses):
        points = _as_array(points)
        masses = _as_array(masses)
        order = np.argsort(points, kind="stable")
        points, masses = points[order], masses[order]
        if np.any(masses < -ATOM_TOL) or abs(masses.sum() - 1.0) > 1e-10:
            raise ValidationError("atom masses must be nonnegative and sum to 1")
        uniq, inv = np.unique(points, return_inverse=True)
        merged = np.zeros(uniq.size)
        np.add.at(merged, inv, masses)
        F = np.cumsum(merged)
        F[-1] = 1.0
        return cls(uniq, F, kind="step")

    @property
    def atoms(self):
        """(points, masses) of a step distribution."""
        if self.kind != "step":
            raise ValidationError("only step distributions have atoms")
        return self.breakpoints.copy(), np.diff(np.concatenate([[0.0], self.cdf_values]))

    def cdf(self, x):
        x = _as_array(x)
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        inside = idx >= 0
        j = np.clip(idx, 0, self.breakpoints.size - 1)
        out = np.where(inside, self.cdf_values[j], 0.0)
        if self.kind == "linear":
            jn = np.clip(j + 1, 0, self.breakpoints.size - 1)
            dx = self.breakpoints[jn] - self.breakpoints[j]
            t = np.where(dx > 0, (x - self.breakpoints[j]) / np.where(dx > 0, dx, 1.0), 0.0)
            lin = self.cdf_values[j] + np.clip(t, 0, 1) * (self.cdf_values[jn] - self.cdf_values[j])
            out = np.where(inside, lin, 0.0)
        return _scalar_or_array(out, x)

    def cdf_integral(self, x):
        x = _as_array(x)
        if np.any(x < 0):
            raise DomainError("cdf_integral needs x >= 0")
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        j = np.clip(idx, 0, self.breakpoints.size - 1)
        t = x - self.breakpoints[j]
        if self.kind == "step":
            part = self.cdf_values[j] * t
        else:
            jn = np.clip(j + 1, 0, self.breakpoints.size - 1)
            dx = self.breakpoints[jn] - self.breakpoints[j]
            slope = np.where(dx > 0, (self.cdf_values[jn] - self.cdf_values[j]) / np.where(dx > 0, dx, 1.0), 0.0)
            tt = np.minimum(t, np.where(dx > 0, dx, 0.0))
            part = self.cdf_values[j] * tt + 0.5 * slope * tt**2 + (t - tt) * self.cdf_values[jn]
        out = np.where(idx >= 0, self._cum[j] + part, 0.0)
        return _scalar_or_array(out, x)


def cdf_integral(F, x):
    """Integral of the CDF ``F`` from 0 to ``x`` (the information policy of F)."""
    return F.cdf_integral(x)


# --------------------------------------------------------------------------- priors


class Prior:
    """Atomless prior on [0, 1] with closed-form CDF integral.

    Families: ``uniform``, ``beta`` (params alpha, beta) and ``tabulated``
    (piecewise-linear density through ascending (x, value) pairs spanning [0, 1]).
    """

    def __init__(self, family="uniform", **params):
        self.family = family
        self.params = dict(params)
        self.kinks = np.empty(0)
        if family == "uniform":
            self.mean = 0.5
        elif family == "beta":
            a, b = float(params["alpha"]), float(params["beta"])
            if a <= 0 or b <= 0:
                raise ValidationError("beta parameters must be positive")
            self._a, self._b = a, b
            self.mean = a / (a + b)
        elif family == "tabulated":
            self._init_table(params["table"])
        else:
            raise ValidationError(f"unknown prior family {family!r}")

    def _init_table(self, table):
        tab = _as_array(table)
        if tab.ndim != 2 or tab.shape[1] != 2 or tab.shape[0] < 2:
            raise ValidationError("tabulated prior needs (x, density) pairs")
        xs, fs = tab[:, 0], tab[:, 1]
        if np.any(np.diff(xs) <= 0) or xs[0] != 0.0 or xs[-1] != 1.0:
            raise ValidationError("tabulated prior abscissae must ascend from 0 to 1")
        if np.any(fs < 0):
            raise ValidationError("tabulated prior density must be nonnegative")
        dx = np.diff(xs)
        slope = np.diff(fs) / dx
        mass = fs[:-1] * dx + 0.5 * slope * dx**2
        if abs(mass.sum() - 1.0) > NORM_TOL:
            raise ValidationError(f"tabulated prior integrates to {mass.sum():.10g}, not 1")
        C = np.concatenate([[0.0], np.cumsum(mass)])
        C[-1] = 1.0
        J = np.concatenate([[0.0], np.cumsum(C[:-1] * dx + 0.5 * fs[:-1] * dx**2 + slope * dx**3 / 6)])
        self._xs, self._fs, self._slope, self._C, self._J = xs, fs, slope, C, J
        self.kinks = xs[1:-1].copy()
        self.mean = 1.0 - float(J[-1])

    def _seg(self, x):
        j = np.clip(np.searchsorted(self._xs, x, side="right") - 1, 0, self._xs.size - 2)
        return j, x - self._xs[j]

    def pdf(self, x):
        x = _as_array(x)
        inside = (x >= 0) & (x <= 1)
        xc = np.clip(x, 0, 1)
        if self.family == "uniform":
            out = np.ones_like(xc)
        elif self.family == "beta":
            with np.errstate(divide="ignore", invalid="ignore"):
                out = np.exp((self._a - 1) * np.log(xc) + (self._b - 1) * np.log1p(-xc) - special.betaln(self._a, self._b))
            out = np.nan_to_num(out, nan=0.0, posinf=np.inf)
        else:
            j, t = self._seg(xc)
            out = self._fs[j] + self._slope[j] * t
        return _scalar_or_array(np.where(inside, out, 0.0), x)

    def cdf(self, x):
        x = _as_array(x)
        xc = np.clip(x, 0, 1)
        if self.family == "uniform":
            out = xc
        elif self.family == "beta":
            out = special.betainc(self._a, self._b, xc)
        else:
            j, t = self._seg(xc)
            out = self._C[j] + self._fs[j] * t + 0.5 * self._slope[j] * t**2
        return _scalar_or_array(np.clip(out, 0.0, 1.0), x)

    def quantile(self, u):
        """Smallest x with F(x) >= u."""
        u = _as_array(u)
        if np.any((u < 0) | (u > 1)):
            raise DomainError("quantile needs u in [0, 1]")
        if self.family == "uniform":
            out = u.copy()
        elif self.family == "beta":
            out = special.betaincinv(self._a, self._b, u)
        else:
            out = self._table_quantile(u)
        return _scalar_or_array(out, u)

    def _table_quantile(self, u):
        j = np.clip(np.searchsorted(self._C, u, side="left") - 1, 0, self._xs.size - 2)
        f0, s, r = self._fs[j], self._slope[j], u - self._C[j]
        with np.errstate(divide="ignore", invalid="ignore"):
            disc = np.sqrt(np.maximum(f0**2 + 2 * s * r, 0.0))
            # numerically stable root of s/2 t^2 + f0 t - r = 0
            t = np.where(np.abs(s) > 1e-14, 2 * r / (f0 + disc), np.where(f0 > 0, r / f0, 0.0))
        dx = self._xs[j + 1] - self._xs[j]
        return self._xs[j] + np.clip(np.nan_to_num(t), 0, dx)

    def cdf_integral(self, x):
        """Full-information policy: integral of the prior CDF from 0 to x (x >= 0)."""
        x = _as_array(x)
        if np.any(x < 0):
            raise DomainError("cdf_integral needs x >= 0")
        xc = np.minimum(x, 1.0)
        if self.family == "uniform":
            out = 0.5 * xc**2
        elif self.family == "beta":
            out = xc * special.betainc(self._a, self._b, xc) - self.mean * special.betainc(self._a + 1, self._b, xc)
        else:
            j, t = self._seg(xc)
            out = self._J[j] + self._C[j] * t + 0.5 * self._fs[j] * t**2 + self._slope[j] * t**3 / 6
        out = np.where(x > 1.0, x - self.mean, out)
        return _scalar_or_array(out, x)

    def null_integral(self, x):
        """No-information policy max(0, x - mean)."""
        x = _as_array(x)
        return _scalar_or_array(np.maximum(0.0, x - self.mean), x)

    def pooled_mean(self, t):
        """E[theta | theta >= t]; equals 1 at t = 1."""
        t = float(t)
        tail = 1.0 - float(self.cdf(t))
        if tail <= 1e-14:
            return 1.0 if t >= 1.0 else max(t, float(self.quantile(1.0)))
        area = (1.0 - t) - (float(self.cdf_integral(1.0)) - float(self.cdf_integral(t)))
        return t + area / tail

    def validate(self):
        """Raise ValidationError if the representation is inconsistent."""
        grid = np.linspace(0, 1, 1001)
        F = self.cdf(grid)
        if np.any(np.diff(F) < -ATOM_TOL):
            raise ValidationError("prior CDF decreases")
        mean_from_cdf = 1.0 - float(self.cdf_integral(1.0))
        if abs(mean_from_cdf - self.mean) > 1e-12:
            raise ValidationError("prior mean disagrees with its CDF")
        return True

    def describe(self):
        return {"family": self.family, **{k: v for k, v in self.params.items()}}

    def __repr__(self):
        return f"Prior({self.family!r}, mean={self.mean:.6g})"


# --------------------------------------------------------------------------- cutoff densities


class CutoffDensity:
    """Density of the action cutoff on [0, 1].

    Families: ``uniform``; ``linear`` (g = 1 + slope (c - 1/2), default slope 2,
    i.e. g = 2c); ``triangular`` (mode ``peak``); ``truncated_normal`` (mu, sigma);
    ``tabulated`` (piecewise-linear through (x, value) pairs); ``point`` (all types
    share cutoff ``zeta``; no density).
    """

    def __init__(self, family="uniform", **params):
        self.family = family
        self.params = dict(params)
        self.kinks = np.empty(0)
        self.is_point = False
        if family == "uniform":
            self.peak = 0.0
        elif family == "linear":
            s = float(params.get("slope", 2.0))
            if abs(s) > 2.0:
                raise ValidationError("linear cutoff density needs |slope| <= 2")
            self._s = s
            self.peak = 1.0 if s > 0 else 0.0
        elif family == "triangular":
            p = float(params["peak"])
            if not 0.0 <= p <= 1.0:
                raise ValidationError("triangular peak must lie in [0, 1]")
            self._p = p
            self.peak = p
            if 0.0 < p < 1.0:
                self.kinks = np.array([p])
        elif family == "truncated_normal":
            mu, sigma = float(params["mu"]), float(params["sigma"])
            if sigma <= 0:
                raise ValidationError("sigma must be positive")
            self._mu, self._sigma = mu, sigma
            self._lo = special.ndtr((0.0 - mu) / sigma)
            self._Z = special.ndtr((1.0 - mu) / sigma) - self._lo
            self.peak = min(max(mu, 0.0), 1.0)
        elif family == "tabulated":
            self._init_table(params["table"])
        elif family == "point":
            self.is_point = True
            self.zeta = float(params["zeta"])
            if not 0.0 <= self.zeta <= 1.0:
                raise ValidationError("point cutoff must lie in [0, 1]")
            self.peak = self.zeta
        else:
            raise ValidationError(f"unknown cutoff family {family!r}")

    def _init_table(self, table):
        tab = _as_array(table)
        if tab.ndim != 2 or tab.shape[1] != 2 or tab.shape[0] < 2:
            raise ValidationError("tabulated density needs (x, value) pairs")
        xs, gs = tab[:, 0], tab[:, 1]
        if np.any(np.diff(xs) <= 0) or xs[0] != 0.0 or xs[-1] != 1.0:
            raise ValidationError("tabulated density abscissae must ascend from 0 to 1")
        if np.any(gs < 0):
            raise ValidationError("tabulated density must be nonnegative")
        dx = np.diff(xs)
        mass = 0.5 * (gs[:-1] + gs[1:]) * dx
        if abs(mass.sum() - 1.0) > NORM_TOL:
            raise ValidationError(f"cutoff density integrates to {mass.sum():.10g}, not 1")
        self._xs, self._gs = xs, gs
        self._slope = np.diff(gs) / dx
        self._C = np.concatenate([[0.0], np.cumsum(mass)])
        self.kinks = xs[1:-1].copy()
        self.peak = float(xs[int(np.argmax(gs))])

    def _need_density(self):
        if self.is_point:
            raise ValidationError("a point-mass cutoff has no density")

    def _seg(self, c):
        j = np.clip(np.searchsorted(self._xs, c, side="right") - 1, 0, self._xs.size - 2)
        return j, c - self._xs[j]

    def pdf(self, c):
        self._need_density()
        c = _as_array(c)
        inside = (c >= 0) & (c <= 1)
        x = np.clip(c, 0, 1)
        fam = self.family
        if fam == "uniform":
            out = np.ones_like(x)
        elif fam == "linear":
            out = 1.0 + self._s * (x - 0.5)
        elif fam == "triangular":
            p = self._p
            up = 2 * x / p if p > 0 else np.zeros_like(x)
            down = 2 * (1 - x) / (1 - p) if p < 1 else np.zeros_like(x)
            out = np.where(x <= p, up, down) if 0 < p < 1 else (down if p == 0 else up)
        elif fam == "truncated_normal":
            z = (x - self._mu) / self._sigma
            out = np.exp(-0.5 * z**2) / (np.sqrt(2 * np.pi) * self._sigma * self._Z)
        else:
            j, t = self._seg(x)
            out = self._gs[j] + self._slope[j] * t
        return _scalar_or_array(np.where(inside, out, 0.0), c)

    def cdf(self, c):
        c = _as_array(c)
        if self.is_point:
            return _scalar_or_array((c >= self.zeta).astype(float), c)
        x = np.clip(c, 0, 1)
        fam = self.family
        if fam == "uniform":
            out = x
        elif fam == "linear":
            out = x + 0.5 * self._s * (x**2 - x)
        elif fam == "triangular":
            p = self._p
            if p == 0:
                out = 1 - (1 - x) ** 2
            elif p == 1:
                out = x**2
            else:
                out = np.where(x <= p, x**2 / p, 1 - (1 - x) ** 2 / (1 - p))
        elif fam == "truncated_normal":
            out = (special.ndtr((x - self._mu) / self._sigma) - self._lo) / self._Z
        else:
            j, t = self._seg(x)
            out = self._C[j] + self._gs[j] * t + 0.5 * self._slope[j] * t**2
        return _scalar_or_array(np.clip(out, 0.0, 1.0), c)

    def quantile(self, u):
        u = _as_array(u)
        if np.any((u < 0) | (u > 1)):
            raise DomainError("quantile needs u in [0, 1]")
        fam = self.family
        if fam == "point":
            out = np.full_like(u, self.zeta)
        elif fam == "uniform":
            out = u.copy()
        elif fam == "linear":
            s = self._s
            if abs(s) < 1e-14:
                out = u.copy()
            else:
                b = 1 - 0.5 * s
                denom = b + np.sqrt(np.maximum(b * b + 2 * s * u, 0.0))
                out = np.where(denom > 0, 2 * u / np.where(denom > 0, denom, 1.0), 0.0)
        elif fam == "triangular":
            p = self._p
            out = np.where(u <= p, np.sqrt(u * p), 1 - np.sqrt((1 - u) * (1 - p)))
        elif fam == "truncated_normal":
            out = self._mu + self._sigma * special.ndtri(np.clip(self._lo + u * self._Z, 0, 1))
        else:
            j = np.clip(np.searchsorted(self._C, u, side="left") - 1, 0, self._xs.size - 2)
            g0, s, r = self._gs[j], self._slope[j], u - self._C[j]
            disc = np.sqrt(np.maximum(g0**2 + 2 * s * r, 0.0))
            denom = g0 + disc
            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.where(denom > 0, 2 * r / np.where(denom > 0, denom, 1.0), 0.0)
            out = self._xs[j] + np.clip(t, 0, self._xs[j + 1] - self._xs[j])
        return _scalar_or_array(np.clip(out, 0.0, 1.0), u)

    def derivative(self, c):
        """dg/dc; at a kink the two one-sided slopes are averaged."""
        self._need_density()
        c = _as_array(c)
        x = np.clip(c, 0, 1)
        fam = self.family
        if fam == "uniform":
            out = np.zeros_like(x)
        elif fam == "linear":
            out = np.full_like(x, self._s)
        elif fam == "triangular":
            p = self._p
            up = 2 / p if p > 0 else 0.0
            down = -2 / (1 - p) if p < 1 else 0.0
            if p == 0:
                out = np.full_like(x, down)
            elif p == 1:
                out = np.full_like(x, up)
            else:
                out = np.where(x < p, up, np.where(x > p, down, 0.5 * (up + down)))
        elif fam == "truncated_normal":
            out = -(x - self._mu) / self._sigma**2 * self.pdf(x)
        else:
            j = np.clip(np.searchsorted(self._xs, x, side="right") - 1, 0, self._xs.size - 2)
            out = self._slope[j]
            at_kink = np.isin(x, self.kinks)
            if np.any(at_kink):
                k = np.searchsorted(self._xs, x[at_kink])
                out = np.array(out, dtype=float)
                out[at_kink] = 0.5 * (self._slope[k - 1] + self._slope[k])
        return _scalar_or_array(np.asarray(out, dtype=float), c)

    def total_mass(self):
        if self.is_point:
            return 1.0
        return _quad.integrate(self.pdf, 0.0, 1.0, points=self.kinks, tol=1e-12)

    def describe(self):
        return {"family": self.family, **self.params}

    def __repr__(self):
        return f"CutoffDensity({self.family!r}, {self.params})"


def density_derivative(density, c, lam=None):
    """dg/dc(c | lam) for a CutoffDensity or a TypePopulation."""
    c_arr = _as_array(c)
    if np.any((c_arr < 0) | (c_arr > 1)):
        raise DomainError("density_derivative needs c in [0, 1]")
    if isinstance(density, TypePopulation):
        density = density.density_for(lam)
    return density.derivative(c)


@dataclass(frozen=True)
class SinglePeakReport:
    ok: bool
    peak: float = float("nan")
    violation: tuple = ()

    def __bool__(self):
        return self.ok


def validate_single_peaked(density, grid_n=1001, tol=1e-12):
    """Check the up-then-down shape on a grid.

    Returns the smallest grid peak consistent with the shape, or the first
    valley triple (x_a, x_b, x_c) with g(x_b) below both neighbours.
    """
    if grid_n < 3:
        raise DomainError("grid_n must be at least 3")
    if density.is_point:
        return SinglePeakReport(True, density.zeta)
    mass = density.total_mass()
    if abs(mass - 1.0) > NORM_TOL:
        raise ValidationError(f"density integrates to {mass:.10g}, not 1")
    grid = np.linspace(0.0, 1.0, grid_n)
    if density.kinks.size:
        grid = np.unique(np.concatenate([grid, density.kinks]))
    g = density.pdf(grid)
    top = g.max()
    k = int(np.argmax(g >= top - tol))
    rises = np.diff(g) > tol
    falls = np.diff(g) < -tol
    if not falls[:k].any() and not rises[k:].any():
        return SinglePeakReport(True, float(grid[k]))
    first_fall = int(np.argmax(falls))
    later_rise = first_fall + int(np.argmax(rises[first_fall:]))
    triple = (float(grid[first_fall]), float(grid[later_rise]), float(grid[later_rise + 1]))
    return SinglePeakReport(False, violation=triple)


# --------------------------------------------------------------------------- populations


@dataclass
class TypePopulation:
    """Finite-support marginal over the attention-cost scale plus cutoff densities.

    ``cutoffs`` is a single CutoffDensity shared by every cost scale, or a list
    aligned with ``lambdas``.
    """

    lambdas: np.ndarray
    weights: np.ndarray
    cutoffs: object
    peak: float = None
    grid_n: int = 1001
    _dens: list = field(init=False, repr=False)

    def __post_init__(self):
        self.lambdas = np.atleast_1d(_as_array(self.lambdas))
        self.weights = np.atleast_1d(_as_array(self.weights))
        if self.lambdas.shape != self.weights.shape or self.lambdas.ndim != 1:
            raise ValidationError("lambda support and weights must be equal-length 1-D arrays")
        if np.any(self.lambdas < 0) or np.any(self.lambdas > 1):
            raise ValidationError("lambda support must lie in [0, 1]")
        if np.any(self.weights < 0) or abs(self.weights.sum() - 1.0) > 1e-10:
            raise ValidationError("lambda weights must be nonnegative and sum to 1")
        if isinstance(self.cutoffs, CutoffDensity):
            self._dens = [self.cutoffs] * self.lambdas.size
        else:
            self._dens = list(self.cutoffs)
            if len(self._dens) != self.lambdas.size:
                raise ValidationError("one cutoff density per lambda support point is required")
        if self.peak is None:
            self.peak = self._common_peak()

    @classmethod
    def degenerate(cls, lam, cutoff, **kw):
        return cls(np.array([float(lam)]), np.array([1.0]), cutoff, **kw)

    def _common_peak(self):
        peaks = [validate_single_peaked(g, self.grid_n) for g in self._dens]
        bad = [r for r in peaks if not r.ok]
        if bad:
            raise ValidationError(f"cutoff density is not single-peaked: valley at {bad[0].violation}")
        return max(r.peak for r in peaks)

    @property
    def densities(self):
        return list(self._dens)

    @property
    def is_degenerate(self):
        return self.lambdas.size == 1

    @property
    def has_point_cutoff(self):
        return any(g.is_point for g in self._dens)

    def density_for(self, lam):
        if lam is None:
            if len(set(map(id, self._dens))) == 1:
                return self._dens[0]
            raise ValidationError("lambda required for a population with lambda-specific densities")
        hit = np.flatnonzero(np.isclose(self.lambdas, lam, rtol=0, atol=1e-15))
        if hit.size == 0:
            raise ValidationError(f"lambda {lam} not in the support")
        return self._dens[int(hit[0])]

    def __iter__(self):
        return iter(zip(self.lambdas, self.weights, self._dens))

    def validate(self):
        """Normalization and single-peakedness around the declared peak."""
        for g in self._dens:
            if g.is_point:
                continue
            mass = g.total_mass()
            if abs(mass - 1.0) > NORM_TOL:
                raise ValidationError(f"cutoff density integrates to {mass:.10g}, not 1")
            grid = np.unique(np.concatenate([np.linspace(0, 1, self.grid_n), g.kinks, [self.peak]]))
            vals = g.pdf(grid)
            left = grid <= self.peak
            if np.any(np.diff(vals[left]) < -1e-12) or np.any(np.diff(vals[~left | (grid == self.peak)]) > 1e-12):
                raise ValidationError(f"cutoff density is not monotone on each side of peak {self.peak}")
        return True
