"""Small scalar search routines used by the solvers."""
import math

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def first_true(pred, lo, hi, tol=1e-14, fanout=16, max_iter=64):
    """Smallest x in [lo, hi] where a monotone (False...True) vectorized predicate holds.

    Returns ``hi`` when the predicate is false everywhere and ``lo`` when it
    already holds at ``lo``. Each round evaluates ``fanout - 1`` interior points.
    """
    lo, hi = float(lo), float(hi)
    if bool(pred(np.array([lo]))[0]):
        return lo
    if not bool(pred(np.array([hi]))[0]):
        return hi
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        xs = np.linspace(lo, hi, fanout + 1)[1:-1]
        hits = np.asarray(pred(xs), dtype=bool)
        k = int(np.argmax(hits)) if hits.any() else xs.size
        new_lo = xs[k - 1] if k > 0 else lo
        new_hi = xs[k] if k < xs.size else hi
        if new_lo == lo and new_hi == hi:
            break
        lo, hi = new_lo, new_hi
    return hi


def golden_max(f, lo, hi, tol=1e-10, max_iter=200):
    """Golden-section search for a maximizer of ``f`` on [lo, hi]; returns (x, f(x))."""
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    best = max(((fc, c), (fd, d), (f(x), x)))
    return best[1], best[0]
