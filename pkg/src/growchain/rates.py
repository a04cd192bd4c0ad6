"""Growth-law primitives: step rates f_t(k), their scaled limits F(k), birth laws.

A growing-network chain k_i(t) gains one unit per step with probability
f_t(k) and stays put otherwise. Everything downstream is driven by the
limit F(k) = lim t * f_t(k), which for all the models here is affine,
and by the limiting law d_k of a vertex's degree at birth.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError

MASS_TOL = 1e-12


@dataclass(frozen=True)
class AffineLimit:
    """F(k) = A*k + B, meaningful for degrees k >= m."""

    A: float
    B: float
    m: int = 0

    def __call__(self, k):
        return self.A * k + self.B

    def violations(self) -> list[str]:
        out = []
        if self.m < 0:
            out.append(f"minimum degree m={self.m} is negative")
        # affine: checking k = m and the sign of A covers every k >= m
        f_m = self(self.m)
        if f_m < 0:
            out.append(f"F(m)={f_m} < 0")
        if 1 + f_m <= 0:
            out.append(f"1 + F(m)={1 + f_m} <= 0")
        if self.A < 0:
            out.append(f"A={self.A} < 0, so F(k) turns negative for large k")
        return out


@dataclass(frozen=True)
class StepRate:
    """Per-step increment probability f_t(k).

    ``evaluator`` must accept an integer ``t`` and either an integer or an
    integer numpy array ``k``.
    """

    evaluator: Callable
    description: str = ""

    def __call__(self, t, k):
        return self.evaluator(t, k)


@dataclass(frozen=True)
class BirthDistribution:
    """Limiting law d_k of the degree a vertex is born with."""

    entries: Mapping[int, float]
    m: int
    M: int

    @classmethod
    def of(cls, entries: Mapping[int, float]) -> "BirthDistribution":
        """Build from a degree -> probability map, inferring m and M from the positive entries."""
        support = [k for k, d in entries.items() if d > 0]
        if not support:
            raise DomainError("birth distribution has no positive mass")
        return cls(dict(entries), min(support), max(support))

    @classmethod
    def point(cls, k: int) -> "BirthDistribution":
        return cls({k: 1.0}, k, k)

    def __getitem__(self, k: int) -> float:
        return float(self.entries.get(k, 0.0))

    def as_array(self, lo: int, hi: int) -> np.ndarray:
        """d_k for k = lo..hi as a dense array."""
        out = np.zeros(hi - lo + 1)
        for k, d in self.entries.items():
            if lo <= k <= hi:
                out[k - lo] = d
        return out


class ChainClass(enum.Enum):
    SCALE_FREE = "scale-free"
    GEOMETRIC = "geometric"
    IMPOSSIBLE = "impossible"


def eval_limit(lim: AffineLimit, k: int) -> float:
    if k < lim.m:
        raise DomainError(f"degree k={k} below minimum degree m={lim.m}")
    return lim.A * k + lim.B


def classify(A: float, B: float) -> ChainClass:
    """Sort (A, B) into the three cases; B == 0 with A == 0 is a frozen chain and counts as impossible."""
    if A > 0:
        return ChainClass.SCALE_FREE
    if A == 0 and B > 0:
        return ChainClass.GEOMETRIC
    return ChainClass.IMPOSSIBLE


def validate_birth(b: BirthDistribution) -> list[str]:
    """Return the list of violated invariants; empty means valid."""
    problems = []
    for k, d in b.entries.items():
        if k < 0:
            problems.append(f"negative degree {k} in support")
        if not math.isfinite(d) or d < 0:
            problems.append(f"d_{k}={d} is not a nonnegative number")
    total = math.fsum(b.entries.values())
    if abs(total - 1.0) > MASS_TOL:
        problems.append(f"total mass {total!r} != 1")
    if b[b.m] <= 0:
        problems.append(f"d_m = d_{b.m} is not positive")
    for k, d in b.entries.items():
        if d > 0 and k < b.m:
            problems.append(f"d_{k} > 0 below declared minimum m={b.m}")
        if d > 0 and k > b.M:
            problems.append(f"d_{k} > 0 above declared maximum M={b.M}")
    return problems


DEFAULT_T_GRID = (10**3, 10**4, 10**5, 10**6)


def extract_limit(
    rate: StepRate,
    k_probe: Sequence[int],
    t_grid: Sequence[int] = DEFAULT_T_GRID,
    m: int | None = None,
) -> AffineLimit:
    """Recover (A, B) from an opaque step rate.

    Fits t*f_t(k) against k by least squares at the largest t. Convergence
    is certified Cauchy-style: for every probe degree the change in
    t*f_t(k) over the last grid gap must be smaller than over the gap
    before it. A failing rate raises :class:`ConvergenceError` carrying the
    residuals |t*f_t(k) - (A k + B)| at every grid time.
    """
    ks = np.asarray(sorted(set(int(k) for k in k_probe)))
    ts = [int(t) for t in t_grid]
    if len(ks) < 3:
        raise DomainError("need at least 3 distinct probe degrees")
    if len(ts) < 3 or any(b <= a for a, b in zip(ts, ts[1:])):
        raise DomainError("t_grid must be strictly increasing with at least three entries")
    if ts[-1] < 10**6:
        raise DomainError("largest t in t_grid must be at least 1e6")

    scaled = np.array([t * np.asarray(rate(t, ks), dtype=float) for t in ts])
    slope, intercept = np.polyfit(ks.astype(float), scaled[-1], 1)
    fit = slope * ks + intercept

    before = np.abs(scaled[-2] - scaled[-3])
    last = np.abs(scaled[-1] - scaled[-2])
    floor = 1e-9 * (1.0 + np.abs(fit))  # already constant to round-off
    bad = (last >= before) & (last > floor)
    if np.any(bad):
        residuals = {int(k): np.abs(scaled[:, i] - fit[i]).tolist() for i, k in enumerate(ks)}
        raise ConvergenceError(
            f"t*f_t(k) not converging at k={ks[bad].tolist()}; "
            f"residuals at t={ts}: {residuals}",
            residuals=residuals,
        )
    # snap round-off so exact rates give exact zeros
    A = 0.0 if abs(slope) < 1e-12 else float(slope)
    B = 0.0 if abs(intercept) < 1e-12 else float(intercept)
    return AffineLimit(A, B, int(ks[0]) if m is None else m)
