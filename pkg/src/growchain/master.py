"""Finite-time mean degree distribution P(k, t) by exact iteration.

With every chain born from the limiting law d_k, the vertex-averaged
distribution obeys

    P(k, t+1) = t/(t+1) * [P(k,t) (1 - f_t(k)) + P(k-1,t) f_t(k-1)] + d_k/(t+1)

Only the one-step (k -> k+1) transitions are kept; for multiple-link models
the jumps of two or more are o(1/t) and drop out of the limit. Mass that
climbs past k_max is held in an overflow bin so nothing is renormalised
away.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DomainError, ModelError
from .models import ModelSpec
from .steady import DegreeDistribution

MAX_START = 10**6


@dataclass(frozen=True)
class Snapshot:
    t: int
    probs: np.ndarray  # P(k, t) for k = m..k_max
    overflow: float  # mass above k_max


@dataclass(frozen=True)
class EvolutionTrace:
    model_name: str
    m: int
    k_max: int
    t_start: int
    snapshots: list[Snapshot] = field(default_factory=list)

    @property
    def times(self) -> list[int]:
        return [s.t for s in self.snapshots]

    def at(self, t: int) -> Snapshot:
        for s in self.snapshots:
            if s.t == t:
                return s
        raise KeyError(t)


def _rate_problem(f: np.ndarray, live: np.ndarray):
    bad = live & ~((f >= 0) & (f < 1))
    return np.flatnonzero(bad)


def first_valid_time(model: ModelSpec, limit: int = MAX_START) -> int:
    """Smallest t at which f_t is a probability on the whole birth support.

    The closed-form rates are asymptotic expressions; several exceed one
    for the first few steps (f_1(k) = m/1 for the random-attachment
    model), so the iteration begins once they are admissible.
    """
    ks = np.arange(model.birth.m, model.birth.M + 1)
    for t in range(1, limit + 1):
        f = np.asarray(model.rate(t, ks), dtype=float)
        if np.all((f >= 0) & (f < 1)):
            return t
    raise ModelError(f"{model.name}: f_t not a probability on the birth support for any t <= {limit}")


def evolve(
    model: ModelSpec,
    T: int,
    k_max: int,
    snapshot_times: Iterable[int] = (),
    t_start: int | None = None,
) -> EvolutionTrace:
    """Iterate the master equation up to time T.

    The state at ``t_start`` (by default :func:`first_valid_time`) is the
    birth law itself. Snapshots are taken at each requested time in
    ``[t_start, T]``; T is always included.

    Raises :class:`ModelError` naming (t, k) if f_t(k) leaves [0, 1) at a
    degree carrying probability.
    """
    birth = model.birth
    if T < 2:
        raise DomainError(f"T={T} must be at least 2")
    if k_max < birth.M + 2:
        raise DomainError(f"k_max={k_max} must be at least M + 2 = {birth.M + 2}")
    t0 = first_valid_time(model) if t_start is None else int(t_start)
    if t0 < 1 or t0 > T:
        raise DomainError(f"start time {t0} outside [1, {T}]")
    wanted = sorted({int(t) for t in snapshot_times if t0 <= t <= T} | {T})

    m = birth.m
    ks = np.arange(m, k_max + 1)
    d = birth.as_array(m, k_max)
    P = d.copy()
    overflow = 0.0
    # degrees reachable at time t are <= M + (t - t0)
    reach = birth.M - m
    snaps = []
    wi = 0
    if wanted[0] == t0:
        snaps.append(Snapshot(t0, P.copy(), overflow))
        wi = 1

    for t in range(t0, T):
        hi = min(reach, ks.size - 1) + 1
        f = np.asarray(model.rate(t, ks[:hi]), dtype=float)
        bad = _rate_problem(f, P[:hi] > 0)
        if bad.size:
            k = int(ks[bad[0]])
            raise ModelError(
                f"{model.name}: f_t(k)={f[bad[0]]!r} is not a probability at t={t}, k={k}", t=t, k=k
            )
        flow = P[:hi] * f
        new = P.copy()
        new[:hi] -= flow
        if hi < ks.size:
            new[1 : hi + 1] += flow
        else:
            new[1:] += flow[:-1]
            overflow += flow[-1]
        stay = t / (t + 1.0)
        new *= stay
        new += d / (t + 1.0)
        overflow *= stay
        P = new
        reach += 1
        if wi < len(wanted) and wanted[wi] == t + 1:
            snaps.append(Snapshot(t + 1, P.copy(), overflow))
            wi += 1

    return EvolutionTrace(model.name, m, k_max, t0, snaps)


def convergence_metrics(trace: EvolutionTrace, limit: DegreeDistribution) -> list[tuple[int, float]]:
    """Total-variation distance from each snapshot to the limit, on the shared support."""
    if limit.m != trace.m or limit.k_max != trace.k_max:
        raise DomainError(
            f"support mismatch: trace k={trace.m}..{trace.k_max}, limit k={limit.m}..{limit.k_max}"
        )
    return [(s.t, 0.5 * float(np.abs(s.probs - limit.probs).sum())) for s in trace.snapshots]
