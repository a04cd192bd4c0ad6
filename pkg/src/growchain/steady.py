"""Exact steady degree distributions.

Two independent routes to the same P(k):

* forward iteration of the one-step recurrence
  ``P(k) = (F(k-1) P(k-1) + d_k) / (1 + F(k))`` starting from
  ``P(m) = d_m / (1 + F(m))``; works for any F;
* for affine F with A > 0, the product/sum form up to the top of the birth
  support M and a log-Gamma ratio beyond it, whose large-k behaviour gives
  the tail ``P(k) ~ C k^-(1 + 1/A)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError
from .rates import AffineLimit, BirthDistribution, ChainClass, classify, validate_birth

DEFAULT_K_MAX = 10_000


@dataclass(frozen=True)
class TailInfo:
    """What lies beyond k_max.

    ``gamma``/``prefactor`` describe a power-law tail ``C k^-gamma``;
    ``ratio`` describes a geometric tail ``P(k+1) = ratio * P(k)``. Exactly
    one of the two descriptions is filled in, or neither for a tail that is
    identically zero.
    """

    gamma: float | None
    prefactor: float | None
    truncated_mass: float
    ratio: float | None = None


@dataclass(frozen=True)
class DegreeDistribution:
    """P(k) on k = m..k_max. ``probs[0]`` is P(m)."""

    m: int
    probs: np.ndarray
    tail: TailInfo | None = None
    n_obs: int | None = None  # sample size, for empirical distributions

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise DomainError("probs must be a non-empty 1-d array")
        if np.any(probs < 0) or np.any(probs > 1):
            raise DomainError("probabilities must lie in [0, 1]")
        if probs.sum() > 1 + 1e-10:
            raise DomainError(f"partial sum {probs.sum()!r} exceeds 1")
        object.__setattr__(self, "probs", probs)

    @property
    def k_max(self) -> int:
        return self.m + self.probs.size - 1

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(self.m, self.k_max + 1)

    def __call__(self, k: int) -> float:
        if self.m <= k <= self.k_max:
            return float(self.probs[k - self.m])
        return 0.0

    def on(self, lo: int, hi: int) -> np.ndarray:
        """Dense P(k) for k = lo..hi, zero outside the stored support."""
        out = np.zeros(hi - lo + 1)
        a, b = max(lo, self.m), min(hi, self.k_max)
        if a <= b:
            out[a - lo : b - lo + 1] = self.probs[a - self.m : b - self.m + 1]
        return out


def log_gamma(x):
    """ln Gamma(x) for x > 0, scalar or array."""
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError(f"log_gamma needs x > 0, got {x!r}")
    out = gammaln(arr)
    return float(out) if out.ndim == 0 else out


def head_probability(d_m: float, F_m: float) -> float:
    return d_m / (1.0 + F_m)


def next_probability(P_prev: float, F_prev: float, F_k: float, d_k: float) -> float:
    return (F_prev * P_prev + d_k) / (1.0 + F_k)


def tail_exponent_exact(A: float) -> float:
    if not A > 0:
        raise DomainError(f"power-law tail needs A > 0, got A={A}")
    return 1.0 + 1.0 / A


def _check_inputs(birth: BirthDistribution, lim: AffineLimit, k_max: int):
    problems = validate_birth(birth) + lim.violations()
    if problems:
        raise DomainError("; ".join(problems))
    if lim.m != birth.m:
        raise DomainError(f"limit minimum degree {lim.m} != birth minimum degree {birth.m}")
    if k_max < birth.M:
        raise DomainError(f"k_max={k_max} is below the top of the birth support M={birth.M}")


def _tail_info(birth, lim, probs) -> TailInfo:
    k_max = birth.m + probs.size - 1
    truncated = max(0.0, 1.0 - math.fsum(probs))
    cls = classify(lim.A, lim.B)
    if cls is ChainClass.SCALE_FREE:
        a, g = lim.B / lim.A, tail_exponent_exact(lim.A)
        M = birth.M
        P_M = probs[M - birth.m]
        if M + a > 0 and P_M > 0:
            # Gamma(k+a)/Gamma(k+a+g) ~ k^-g
            C = P_M * math.exp(gammaln(M + a + g) - gammaln(M + a))
        else:
            C = 0.0
        return TailInfo(g, C, truncated)
    if lim.A == 0 and lim.B >= 0 and k_max >= birth.M:
        # beyond M each step multiplies by F/(1+F) = B/(1+B)
        return TailInfo(None, None, truncated, ratio=lim.B / (1.0 + lim.B))
    return TailInfo(None, None, truncated)


def steady_by_recurrence(
    birth: BirthDistribution, lim: AffineLimit, k_max: int = DEFAULT_K_MAX
) -> DegreeDistribution:
    _check_inputs(birth, lim, k_max)
    m = birth.m
    d = birth.as_array(m, k_max)
    probs = np.empty(k_max - m + 1)
    probs[0] = head_probability(d[0], lim(m))
    F_prev = lim(m)
    for i in range(1, probs.size):
        F_k = lim(m + i)
        probs[i] = next_probability(probs[i - 1], F_prev, F_k, d[i])
        F_prev = F_k
    return DegreeDistribution(m, probs, _tail_info(birth, lim, probs))


def steady_closed_form_affine(
    birth: BirthDistribution, lim: AffineLimit, k_max: int = DEFAULT_K_MAX
) -> DegreeDistribution:
    """Closed form for F(k) = A k + B with A > 0.

    Between m and M the product/sum expression is expanded so that no
    division by a product of ratios occurs (a ratio is zero whenever
    F(k) = 0, e.g. an absorbing state at k = m). Past M the Gamma ratio is
    evaluated in log space.
    """
    _check_inputs(birth, lim, k_max)
    if not lim.A > 0:
        raise DomainError(f"closed form needs A > 0, got A={lim.A}")
    m, M = birth.m, birth.M
    A, B = lim.A, lim.B
    a = B / A
    g = 1.0 + 1.0 / A
    if M + a <= 0:
        raise DomainError(f"Gamma argument k + B/A = {M + a} <= 0 at k={M}")

    # head block m..M: P(k) = R(m,k) P(m) + sum_l d_{l+1}/(1+F(l+1)) R(l+1,k),
    # with R(j,k) = prod_{i=j}^{k-1} F(i)/(1+F(i+1))
    n_head = M - m + 1
    ratio = np.array([lim(i) / (1.0 + lim(i + 1)) for i in range(m, M)])
    births = np.array([birth[l] / (1.0 + lim(l)) for l in range(m, M + 1)])
    head = np.empty(n_head)
    for j in range(n_head):
        total = 0.0
        for l in range(j + 1):
            total += births[l] * np.prod(ratio[l:j])
        head[j] = total

    ks = np.arange(M + 1, k_max + 1, dtype=float)
    log_ratio = (
        log_gamma(ks + a) - log_gamma(ks + a + g) if ks.size else np.empty(0)
    ) + (log_gamma(M + a + g) - log_gamma(M + a))
    probs = np.concatenate([head, head[-1] * np.exp(log_ratio)])
    return DegreeDistribution(m, probs, _tail_info(birth, lim, probs))


def normalization_report(dist: DegreeDistribution) -> dict:
    """Partial sum plus an estimate of the mass beyond k_max."""
    partial = math.fsum(dist.probs)
    tail = dist.tail
    k_max = dist.k_max
    if tail is None:
        bound = 0.0
    elif tail.gamma is not None:
        # integral of C k^-gamma from k_max + 1/2, the midpoint rule for the sum over k > k_max
        bound = tail.prefactor * (k_max + 0.5) ** (1 - tail.gamma) / (tail.gamma - 1)
    elif tail.ratio is not None:
        r = tail.ratio
        bound = dist.probs[-1] * r / (1 - r)
    else:
        bound = 0.0
    return {"partial_sum": partial, "tail_bound": float(bound)}
