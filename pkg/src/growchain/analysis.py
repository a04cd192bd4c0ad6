"""Distances between degree distributions and tail-exponent estimates."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Mapping

import numpy as np

from .errors import DomainError
from .netgen import SimResult
from .steady import DegreeDistribution

DEFAULT_FIT_RANGE = (50, 500)
MIN_TAIL_SAMPLE = 100


@dataclass(frozen=True)
class CompareReport:
    tv: float
    ks: float
    head_abs_err: float
    gamma_fit: float | None
    gamma_exact: float | None
    fit_range: tuple[int, int]
    fit_method: str = "loglog"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fit_range"] = list(self.fit_range)
        return d


def _aligned(p: DegreeDistribution, q: DegreeDistribution):
    lo = min(p.m, q.m)
    hi = max(p.k_max, q.k_max)
    return p.on(lo, hi), q.on(lo, hi)


def _truncated(d: DegreeDistribution) -> float:
    return max(0.0, 1.0 - math.fsum(d.probs))


def tv_distance(p: DegreeDistribution, q: DegreeDistribution) -> float:
    """Half the L1 distance, with each side's missing mass as one extra bin."""
    a, b = _aligned(p, q)
    return 0.5 * (float(np.abs(a - b).sum()) + abs(_truncated(p) - _truncated(q)))


def ks_distance(p: DegreeDistribution, q: DegreeDistribution) -> float:
    a, b = _aligned(p, q)
    return float(np.max(np.abs(np.cumsum(a) - np.cumsum(b))))


def tail_slope_loglog(d: DegreeDistribution, k_lo: int, k_hi: int) -> float:
    """Negated least-squares slope of ln P(k) against ln k for k_lo <= k <= k_hi."""
    if k_lo < 1 or k_hi < 2 * k_lo:
        raise DomainError(f"fit range [{k_lo}, {k_hi}] must satisfy 1 <= k_lo and k_hi >= 2 k_lo")
    P = d.on(k_lo, k_hi)
    zero = np.flatnonzero(P <= 0)
    if zero.size:
        first = k_lo + int(zero[0])
        raise DomainError(
            f"P(k) = 0 at k={first} ({zero.size} empty bins in [{k_lo}, {k_hi}]); "
            f"try k_hi < {first} or log-binned data"
        )
    k = np.arange(k_lo, k_hi + 1, dtype=float)
    slope = np.polyfit(np.log(k), np.log(P), 1)[0]
    return float(-slope)


def _counts(hist) -> Mapping[int, int]:
    if isinstance(hist, SimResult):
        return hist.histogram
    return hist


def tail_exponent_mle(hist, k_min: int) -> float:
    """Continuous-approximation MLE for discrete data.

    gamma = 1 + n / sum ln(k_i / (k_min - 1/2)) over observations k_i >= k_min.
    ``hist`` is a degree -> count mapping or a :class:`SimResult`.
    """
    if k_min < 1:
        raise DomainError(f"k_min={k_min} must be >= 1")
    counts = _counts(hist)
    ks = np.array([k for k, c in counts.items() if k >= k_min and c > 0], dtype=float)
    cs = np.array([counts[int(k)] for k in ks], dtype=float)
    n = cs.sum()
    if n < MIN_TAIL_SAMPLE:
        raise DomainError(f"only {int(n)} observations with k >= {k_min}; need {MIN_TAIL_SAMPLE}")
    if ks.size == 1:
        raise DomainError(f"all {int(n)} tail observations sit at k={int(ks[0])}; the estimate diverges")
    s = float(np.dot(cs, np.log(ks / (k_min - 0.5))))
    return float(1.0 + n / s)


def _as_histogram(d: DegreeDistribution) -> dict[int, int]:
    if d.n_obs is None:
        raise DomainError("MLE fit needs an empirical distribution (n_obs unknown)")
    counts = np.rint(d.probs * d.n_obs).astype(np.int64)
    return {int(k): int(c) for k, c in zip(d.degrees, counts) if c}


def compare_report(
    exact: DegreeDistribution,
    other: DegreeDistribution,
    fit_range: tuple[int, int] = DEFAULT_FIT_RANGE,
    fit_method: str = "loglog",
) -> CompareReport:
    """Compare ``other`` against an exact law.

    ``fit_method`` chooses how ``gamma_fit`` is estimated from ``other``:
    ``"loglog"`` fits the slope over ``fit_range``; ``"mle"`` applies the
    tail MLE with ``k_min = fit_range[0]`` and needs ``other.n_obs``.
    """
    gamma_exact = exact.tail.gamma if exact.tail is not None else None
    gamma_fit = None
    if gamma_exact is not None:
        if fit_method == "loglog":
            gamma_fit = tail_slope_loglog(other, *fit_range)
        elif fit_method == "mle":
            gamma_fit = tail_exponent_mle(_as_histogram(other), fit_range[0])
        else:
            raise DomainError(f"unknown fit method {fit_method!r}")
    return CompareReport(
        tv=tv_distance(exact, other),
        ks=ks_distance(exact, other),
        head_abs_err=abs(exact(exact.m) - other(exact.m)),
        gamma_fit=gamma_fit,
        gamma_exact=gamma_exact,
        fit_range=(int(fit_range[0]), int(fit_range[1])),
        fit_method=fit_method,
    )
