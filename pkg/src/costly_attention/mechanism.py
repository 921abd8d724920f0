"""Screening menus of information policies: incentive checks, the upper envelope and the
menu-to-single-signal equivalence check."""
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .policy import pointwise_max, subdifferential
from .receiver import LINEAR

IC_TOL = 1e-10


@dataclass(frozen=True)
class TypeGrid:
    cutoffs: np.ndarray
    lambdas: np.ndarray

    @classmethod
    def regular(cls, n_cutoffs, lambdas):
        return cls(np.linspace(0.0, 1.0, int(n_cutoffs)), np.asarray(lambdas, dtype=float))

    @property
    def shape(self):
        return (self.cutoffs.size, self.lambdas.size)


@dataclass
class PersuasionMechanism:
    """A menu plus an assignment of each grid type (cutoff row, lambda column) to a menu index."""

    menu: list
    grid: TypeGrid
    assignment: np.ndarray

    def __post_init__(self):
        if not self.menu:
            raise ValidationError("menu must be nonempty")
        self.assignment = np.asarray(self.assignment, dtype=int)
        if self.assignment.shape != self.grid.shape:
            raise ValidationError("assignment must cover every grid type")
        if self.assignment.min() < 0 or self.assignment.max() >= len(self.menu):
            raise ValidationError("assignment refers to a missing menu item")

    def nets(self):
        """Net informativeness of every menu item at every grid cutoff, shape (R, n_c)."""
        return np.array([p.net(self.grid.cutoffs) for p in self.menu])


def assign_greedy(menu, grid, cost=LINEAR):
    """Give each type the menu item with the largest net informativeness at its cutoff.

    Ties go to the lowest index. The receiver value is nondecreasing in net
    informativeness, so the result is incentive compatible for any cost.
    """
    nets = np.array([p.net(grid.cutoffs) for p in menu])
    pick = np.argmax(nets, axis=0)
    return PersuasionMechanism(list(menu), grid, np.repeat(pick[:, None], grid.lambdas.size, axis=1))


@dataclass(frozen=True)
class Violation:
    c: float
    lam: float
    index: int
    detail: str


def check_ic(mech, cost=LINEAR, tol=IC_TOL):
    """Types who would gain more than ``tol`` by reporting another type."""
    nets = mech.nets()
    out = []
    for j, lam in enumerate(mech.grid.lambdas):
        values = np.asarray(cost.value(np.maximum(nets, 0.0), lam))
        own_idx = mech.assignment[:, j]
        own = values[own_idx, np.arange(nets.shape[1])]
        best = values.max(axis=0)
        for i in np.flatnonzero(best > own + tol):
            r = int(np.argmax(values[:, i]))
            out.append(Violation(float(mech.grid.cutoffs[i]), float(lam), int(own_idx[i]),
                                 f"report {r} gains {best[i] - own[i]:.3g}"))
    return out


def upper_envelope(menu):
    """Pointwise maximum of the menu, audited for convexity and feasibility."""
    env = pointwise_max(menu)
    env.validate()
    return env


def corrupt_envelope(envelope, depth=1e-3, where=None, width=0.03):
    """Copy of ``envelope`` pushed down by ``depth`` at one breakpoint (a checker fault injection).

    The dent is a hat of half-width at most ``width``, kept inside the
    neighbouring breakpoints. ``where`` picks the breakpoint closest to it; by
    default the interior breakpoint nearest 1/2. Returns (policy, breakpoint).
    """
    inner = envelope.edges[1:-1]
    inner = inner[(inner > 0.0) & (inner < 1.0)]
    if inner.size == 0:
        inner = np.array([0.5])
    target = 0.5 if where is None else float(where)
    k = int(np.argmin(np.abs(inner - target)))
    knots = np.concatenate([[0.0], inner, [1.0]])
    b = float(inner[k])
    left = max(float(knots[k]), b - width)
    right = min(float(knots[k + 2]), b + width)
    return envelope.plus_piecewise_linear([left, b, right], [0.0, -depth, 0.0]), b


@dataclass
class EquivalenceReport:
    envelope: object
    effort_violations: list = field(default_factory=list)
    action_violations: list = field(default_factory=list)
    max_envelope_gap: float = 0.0

    @property
    def ok(self):
        return not self.effort_violations and not self.action_violations


def _contains(outer, inner, slack):
    return outer[0] <= inner[0] + slack and inner[1] <= outer[1] + slack


def check_equivalence(mech, cost=LINEAR, envelope=None, slack=IC_TOL):
    """Compare every type's truthful policy with the menu's upper envelope.

    Effort: the truthful effort argmax set must sit inside the envelope's.
    Action (only for types who attend): the truthful subdifferential at the
    cutoff must sit inside the envelope's.
    """
    bad = check_ic(mech, cost)
    if bad:
        raise ValidationError(f"mechanism is not incentive compatible ({len(bad)} violations)")
    J = envelope if envelope is not None else upper_envelope(mech.menu)
    nets = mech.nets()
    sup = nets.max(axis=0)
    net_J = J.net(mech.grid.cutoffs)
    report = EquivalenceReport(J)
    for i, c in enumerate(mech.grid.cutoffs):
        c = float(c)
        for j, lam in enumerate(mech.grid.lambdas):
            r = int(mech.assignment[i, j])
            a_own = max(float(nets[r, i]), 0.0)
            a_env = max(float(net_J[i]), 0.0)
            own_set = cost.argmax_interval(a_own, lam)
            env_set = cost.argmax_interval(a_env, lam, slack=slack)
            if not _contains(env_set, own_set, slack):
                report.effort_violations.append(
                    Violation(c, float(lam), r, f"efforts {own_set} not within envelope's {env_set}"))
            if cost.effort(a_own, lam) <= 0.0:
                continue
            report.max_envelope_gap = max(report.max_envelope_gap, float(sup[i] - nets[r, i]))
            d_own = subdifferential(mech.menu[r], c)
            d_env = subdifferential(J, c)
            if not d_env.contains(d_own, slack):
                report.action_violations.append(
                    Violation(c, float(lam), r,
                              f"slopes [{d_own.left_slope:.6g}, {d_own.right_slope:.6g}] not within "
                              f"[{d_env.left_slope:.6g}, {d_env.right_slope:.6g}]"))
    return report
