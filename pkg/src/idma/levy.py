"""Levy measures with finite absolute first moment.

Four builtin families, all with closed-form moments, tail masses, and
inverse-CDF jump sampling:

* dickman: density 1/y on (0, 1), asymmetric, total mass infinite.
* truncated_stable(beta, C): density C |y|^{-1-beta} on 0 < |y| <= 1,
  symmetric, beta in (0, 1).
* two_point(lam): atoms of mass lam/2 at +-1.
* inner_truncated_stable(alpha, c, delta): density c |y|^{-1-alpha} on
  |y| >= delta, symmetric, alpha in (1, 2). First moment finite, second
  moment divergent.

Moments over restricted regions are exposed in vectorized form so that
integrability diagnostics can evaluate them on whole quadrature panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DivergentMomentError, EmptyTruncationError


@dataclass(frozen=True)
class LevyMeasure:
    kind: str
    beta: float | None = None
    big_c: float | None = None
    lam: float | None = None
    alpha: float | None = None
    c: float | None = None
    delta: float | None = None

    # -- basic descriptors ------------------------------------------------

    @property
    def symmetric(self) -> bool:
        return self.kind != "dickman"

    @property
    def support_bound(self) -> float:
        """Largest possible jump magnitude (inf when unbounded)."""
        return math.inf if self.kind == "inner_truncated_stable" else 1.0

    # -- global moments ---------------------------------------------------

    def abs_moment(self) -> float:
        """int |y| nu(dy); finite for every builtin family."""
        if self.kind == "dickman":
            return 1.0
        if self.kind == "truncated_stable":
            return 2.0 * self.big_c / (1.0 - self.beta)
        if self.kind == "two_point":
            return self.lam
        return 2.0 * self.c * self.delta ** (1.0 - self.alpha) / (self.alpha - 1.0)

    def second_moment(self) -> float:
        """int y^2 nu(dy); raises DivergentMomentError when infinite."""
        if self.kind == "dickman":
            return 0.5
        if self.kind == "truncated_stable":
            return 2.0 * self.big_c / (2.0 - self.beta)
        if self.kind == "two_point":
            return self.lam
        raise DivergentMomentError(
            "inner_truncated_stable has a divergent second moment "
            f"(alpha={self.alpha} < 2 with unbounded support)")

    def compensator_integral(self) -> float:
        """int_{|y| <= 1} y nu(dy); zero for the symmetric families."""
        return 1.0 if self.kind == "dickman" else 0.0

    # -- restricted moments (vectorized over the cut radius) ---------------

    def tail_mass(self, eps):
        """nu({|y| >= eps}) for eps > 0; scalar or elementwise on arrays."""
        eps = np.asarray(eps, dtype=float)
        if np.any(eps <= 0.0):
            raise ValueError("eps must be positive (total mass may be infinite)")
        if self.kind == "dickman":
            out = np.where(eps < 1.0, -np.log(np.minimum(eps, 1.0)), 0.0)
        elif self.kind == "truncated_stable":
            safe = np.minimum(eps, 1.0)
            out = np.where(eps < 1.0,
                           (2.0 * self.big_c / self.beta) * (safe ** -self.beta - 1.0),
                           0.0)
        elif self.kind == "two_point":
            out = np.where(eps <= 1.0, self.lam, 0.0)
        else:
            out = (2.0 * self.c / self.alpha) * np.maximum(eps, self.delta) ** -self.alpha
        return out if out.ndim else float(out)

    def small_jump_variance(self, eps):
        """int_{|y| < eps} y^2 nu(dy): what truncation at eps discards."""
        eps = np.asarray(eps, dtype=float)
        if self.kind == "dickman":
            out = 0.5 * np.clip(eps, 0.0, 1.0) ** 2
        elif self.kind == "truncated_stable":
            out = (2.0 * self.big_c / (2.0 - self.beta)
                   * np.clip(eps, 0.0, 1.0) ** (2.0 - self.beta))
        elif self.kind == "two_point":
            out = np.where(eps > 1.0, self.lam, 0.0)
        else:
            if np.any(np.isinf(eps)):
                raise DivergentMomentError(
                    "second moment of inner_truncated_stable is infinite")
            ex = 2.0 - self.alpha
            out = np.where(eps <= self.delta, 0.0,
                           2.0 * self.c
                           * (np.maximum(eps, self.delta) ** ex - self.delta ** ex) / ex)
        return out if out.ndim else float(out)

    def signed_moment_interval(self, lo, hi):
        """int_{lo <= |y| <= hi} y nu(dy); elementwise in lo, hi."""
        lo, hi = np.broadcast_arrays(np.asarray(lo, float), np.asarray(hi, float))
        if self.symmetric:
            out = np.zeros_like(lo)
        else:
            out = np.maximum(0.0, np.minimum(hi, 1.0) - np.clip(lo, 0.0, 1.0))
        return out if out.ndim else float(out)

    # -- jump sampling ------------------------------------------------------

    def jump_quantile(self, u, eps):
        """Inverse CDF of nu restricted to {|y| >= eps}, normalized.

        For the symmetric families u is folded: the sign comes from u < 1/2
        and |2u - 1| drives the magnitude quantile, so a single uniform per
        jump suffices.
        """
        u = np.asarray(u, dtype=float)
        eps = float(eps)
        if not np.all((0.0 <= u) & (u < 1.0)):
            raise ValueError("u must lie in [0, 1)")
        if eps <= 0.0 and self.kind in ("dickman", "truncated_stable"):
            raise ValueError("eps must be positive: total mass is infinite")
        if eps > 0.0 and self.tail_mass(eps) <= 0.0:
            raise EmptyTruncationError(f"no jumps with |y| >= {eps}")
        if self.kind == "dickman":
            return eps ** (1.0 - u)
        w = 2.0 * u - 1.0
        sign = np.where(w < 0.0, -1.0, 1.0)
        v = np.abs(w)
        if self.kind == "two_point":
            return sign
        if self.kind == "truncated_stable":
            a = eps ** -self.beta
            return sign * (a - v * (a - 1.0)) ** (-1.0 / self.beta)
        m0 = max(eps, self.delta)
        return sign * m0 * (1.0 - v) ** (-1.0 / self.alpha)

    def sample_jump_sizes(self, eps, n, rng):
        """Draw n jump sizes from nu conditioned on {|y| >= eps}."""
        return self.jump_quantile(rng.random(int(n)), eps)


def dickman() -> LevyMeasure:
    return LevyMeasure(kind="dickman")


def truncated_stable(beta: float, big_c: float) -> LevyMeasure:
    if not 0.0 < beta < 1.0:
        raise ConfigError(f"truncated_stable needs beta in (0,1), got {beta}")
    if big_c <= 0.0:
        raise ConfigError(f"truncated_stable needs C > 0, got {big_c}")
    return LevyMeasure(kind="truncated_stable", beta=float(beta), big_c=float(big_c))


def two_point(lam: float) -> LevyMeasure:
    if lam <= 0.0:
        raise ConfigError(f"two_point needs lambda > 0, got {lam}")
    return LevyMeasure(kind="two_point", lam=float(lam))


def inner_truncated_stable(alpha: float, c: float, delta: float) -> LevyMeasure:
    if not 1.0 < alpha < 2.0:
        raise ConfigError(f"inner_truncated_stable needs alpha in (1,2), got {alpha}")
    if c <= 0.0 or delta <= 0.0:
        raise ConfigError("inner_truncated_stable needs c > 0 and delta > 0")
    return LevyMeasure(kind="inner_truncated_stable", alpha=float(alpha),
                       c=float(c), delta=float(delta))


_CONFIG_KEYS = {
    "dickman": set(),
    "truncated_stable": {"beta", "C"},
    "two_point": {"lambda"},
    "inner_truncated_stable": {"alpha", "c", "delta"},
}


def from_config(cfg: dict) -> LevyMeasure:
    """Build a measure from a config dict like {"kind": "two_point", "lambda": 1.0}."""
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ConfigError("measure config must be a dict with a 'kind' key")
    kind = cfg["kind"]
    if kind not in _CONFIG_KEYS:
        raise ConfigError(f"unknown measure kind {kind!r}")
    given = set(cfg) - {"kind"}
    allowed = _CONFIG_KEYS[kind]
    if given != allowed:
        raise ConfigError(
            f"measure kind {kind!r} takes keys {sorted(allowed)}, got {sorted(given)}")
    try:
        if kind == "dickman":
            return dickman()
        if kind == "truncated_stable":
            return truncated_stable(float(cfg["beta"]), float(cfg["C"]))
        if kind == "two_point":
            return two_point(float(cfg["lambda"]))
        return inner_truncated_stable(float(cfg["alpha"]), float(cfg["c"]),
                                      float(cfg["delta"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad measure parameter: {exc}") from exc
