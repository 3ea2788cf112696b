"""Deterministic adaptive quadrature on the line and against Levy measures.

The engine is a fixed-order nested Gauss-Legendre pair (15 against 7 nodes)
with worst-first adaptive bisection. Everything is deterministic: the
refinement order depends only on the panel error estimates and the final sum
runs left to right, so results are bit-stable across runs and thread counts.
Integrands must accept a 1-d numpy array of abscissas and return an array of
values (real or complex).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError

_NODES_HI, _WEIGHTS_HI = np.polynomial.legendre.leggauss(15)
_NODES_LO, _WEIGHTS_LO = np.polynomial.legendre.leggauss(7)
_PANEL_EVALS = len(_NODES_HI) + len(_NODES_LO)


@dataclass(frozen=True)
class QuadResult:
    """Value, a posteriori error estimate, and integrand evaluation count."""

    value: complex
    error_estimate: float
    evaluations: int


def _panel(h, x0, x1):
    half = 0.5 * (x1 - x0)
    mid = 0.5 * (x0 + x1)
    y_hi = np.asarray(h(mid + half * _NODES_HI))
    y_lo = np.asarray(h(mid + half * _NODES_LO))
    if not (np.all(np.isfinite(y_hi)) and np.all(np.isfinite(y_lo))):
        raise ValueError(f"integrand returned a non-finite value on [{x0}, {x1}]")
    v_hi = half * (y_hi @ _WEIGHTS_HI)
    v_lo = half * (y_lo @ _WEIGHTS_LO)
    return v_hi, abs(v_hi - v_lo)


def integrate_line(h, a, b, tol=1e-9, *, breakpoints=(), radius=60.0,
                   max_evals=1_000_000):
    """Integrate ``h`` over [a, b] by worst-first adaptive bisection.

    Infinite endpoints are truncated to ``-radius`` / ``radius``; callers pick
    the radius from kernel decay so the truncation error stays below ``tol``.
    ``breakpoints`` inside the domain become initial panel edges, which keeps
    kinks and jumps off the Gauss nodes. The panel with the largest error
    estimate is bisected until the summed estimate drops below ``tol``;
    panels narrower than the width floor are frozen as-is (a jump inside one
    contributes at most its width). If the evaluation budget runs out first,
    NonConvergenceError carries the running estimate. The final sum runs
    left to right over the surviving panels, so results are bit-stable.
    """
    lo = -float(radius) if math.isinf(a) and a < 0 else float(a)
    hi = float(radius) if math.isinf(b) and b > 0 else float(b)
    if hi < lo:
        raise ValueError("inverted interval")
    if hi == lo:
        return QuadResult(0.0, 0.0, 0)
    edges = [lo]
    for p in sorted(set(float(q) for q in breakpoints)):
        if lo < p < hi and p - edges[-1] > 1e-13 * max(1.0, abs(p)):
            edges.append(p)
    edges.append(hi)

    panels = []                 # [x0, x1, value, err, alive]
    heap = []                   # (-err, panel index); index breaks ties
    evals = 0
    is_complex = False

    def add_panel(x0, x1):
        nonlocal evals, is_complex
        v, e = _panel(h, x0, x1)
        evals += _PANEL_EVALS
        is_complex = is_complex or np.iscomplexobj(v)
        heapq.heappush(heap, (-e, len(panels)))
        panels.append([x0, x1, v, e, True])
        return e

    total_err = 0.0
    frozen_err = 0.0
    for i in range(len(edges) - 1):
        total_err += add_panel(edges[i], edges[i + 1])

    while heap and total_err > tol:
        neg_e, idx = heapq.heappop(heap)
        x0, x1, _, e, _ = panels[idx]
        if x1 - x0 <= 1e-14 * max(1.0, abs(x0), abs(x1)):
            # cannot refine further; keep its value, move error aside
            total_err -= e
            frozen_err += e
            continue
        if evals + 2 * _PANEL_EVALS > max_evals:
            raise NonConvergenceError(
                f"quadrature budget of {max_evals} evaluations exhausted "
                f"(running error {total_err:.3e}, tol {tol:.3e})",
                evaluations=evals, error_estimate=total_err)
        panels[idx][4] = False
        total_err -= e
        xm = 0.5 * (x0 + x1)
        total_err += add_panel(x0, xm)
        total_err += add_panel(xm, x1)

    alive = sorted((p for p in panels if p[4]), key=lambda p: p[0])
    value = 0.0 + 0.0j
    for p in alive:
        value += p[2]
    out = complex(value) if is_complex else float(value.real)
    return QuadResult(out, total_err + frozen_err, evals)


def integrate_levy(h, measure, tol=1e-9, *, max_evals=1_000_000, h_sup=2.0):
    """Integrate ``h`` against a Levy measure, handling its singularities.

    Atomic measures are summed exactly. Absolutely continuous ones are
    reduced to proper integrals on a bounded interval first:

    * dickman: density 1/y on (0,1); integrate h(y)/y directly, relying on
      h(0)=0 with a linear bound (true for characteristic-function kernels).
    * truncated_stable: substitute y = t^p with p = 2/(1-beta), which turns
      the |y|^{-1-beta} blow-up into an O(t) integrand near 0.
    * inner_truncated_stable: the support is unbounded, so the tail beyond Y
      is dropped once sup|h| * tail_mass(Y) <= tol/2; ``h_sup`` is the
      caller's bound on |h| (2 covers any e^{i...}-1 integrand).
    """
    kind = measure.kind
    if kind == "two_point":
        vals = np.asarray(h(np.array([1.0, -1.0])))
        return QuadResult(0.5 * measure.lam * (vals[0] + vals[1]), 0.0, 2)
    if kind == "dickman":
        return integrate_line(lambda ys: h(ys) / ys, 0.0, 1.0, tol,
                              max_evals=max_evals)
    if kind == "truncated_stable":
        beta, big_c = measure.beta, measure.big_c
        p = 2.0 / (1.0 - beta)

        def folded(ts):
            ys = ts ** p
            return big_c * p * (h(ys) + h(-ys)) * ts ** (-1.0 - p * beta)

        return integrate_line(folded, 0.0, 1.0, tol, max_evals=max_evals)
    if kind == "inner_truncated_stable":
        alpha, c, delta = measure.alpha, measure.c, measure.delta
        cut = max((4.0 * c * h_sup / (alpha * tol)) ** (1.0 / alpha),
                  10.0 * delta, 1.0)

        def folded(ys):
            return c * (h(ys) + h(-ys)) * ys ** (-1.0 - alpha)

        breaks = []
        p = 10.0 * delta
        while p < cut:
            breaks.append(p)
            p *= 10.0
        res = integrate_line(folded, delta, cut, tol, breakpoints=breaks,
                             max_evals=max_evals)
        return QuadResult(res.value, res.error_estimate + 0.5 * tol,
                          res.evaluations)
    raise ValueError(f"unknown measure kind {kind!r}")
