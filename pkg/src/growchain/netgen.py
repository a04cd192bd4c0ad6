"""Stochastic network growth for the nine models.

Only degree sequences are kept. Proportional sampling uses a repeated-node
list: every edge endpoint is appended to ``picks``, so a uniform draw from
``picks`` lands on vertex v with probability deg(v) / sum(deg). Additive
weights (the p term of ll1, the attractiveness H of dms) are handled as a
two-component mixture with a uniform vertex draw.

Random numbers come from numpy's PCG64 bit generator, seeded with the
caller's 64-bit seed; the kernels are compiled with numba and release the
GIL, so :func:`trials` runs them on threads.
"""

from __future__ import annotations

import concurrent.futures as cf
import os
from dataclasses import dataclass, field

import numpy as np
from numba import njit, types
from numba.typed import Dict

from . import __version__
from .errors import SimulationError
from .models import ModelSpec
from .steady import DegreeDistribution

RNG_NAME = "numpy.random.PCG64"
MAX_RETRIES = 10_000

OK, RETRIES_EXCEEDED, BOOKKEEPING, NO_WEIGHT = 0, 1, 2, 3
_STATUS = {
    RETRIES_EXCEEDED: f"more than {MAX_RETRIES} redraws while picking distinct targets",
    BOOKKEEPING: "pick-list length disagrees with the recomputed total weight",
    NO_WEIGHT: "total attachment weight is zero",
}


@dataclass(frozen=True)
class SimResult:
    model_name: str
    N: int
    seed: int
    histogram: dict[int, int]
    n_trials: int = 1
    params: dict = field(default_factory=dict)
    rng: str = RNG_NAME
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "model": self.model_name,
            "params": dict(self.params),
            "N": self.N,
            "seed": self.seed,
            "n_trials": self.n_trials,
            "rng": self.rng,
            "version": self.version,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


# --- kernels --------------------------------------------------------------
# Each returns (degrees, status). ``debug`` re-checks the weight bookkeeping
# after every step, which is O(N) per step.


@njit(cache=True)
def _ring(deg, picks, m0):
    L = 0
    for i in range(m0):
        j = (i + 1) % m0
        picks[L] = i
        picks[L + 1] = j
        deg[i] += 1
        deg[j] += 1
        L += 2
    return L


@njit(cache=True)
def _seen(targets, j, w):
    for i in range(j):
        if targets[i] == w:
            return True
    return False


@njit(nogil=True, cache=True)
def _grow_ba(N, m, rng, debug):
    m0 = m + 1
    deg = np.zeros(N, np.int64)
    picks = np.empty(2 * m0 + 2 * m * (N - m0), np.int64)
    L = _ring(deg, picks, m0)
    targets = np.empty(m, np.int64)
    for v in range(m0, N):
        for j in range(m):
            tries = 0
            w = picks[int(rng.random() * L)]
            while _seen(targets, j, w):
                tries += 1
                if tries > MAX_RETRIES:
                    return deg, RETRIES_EXCEEDED
                w = picks[int(rng.random() * L)]
            targets[j] = w
        for j in range(m):
            picks[L] = v
            picks[L + 1] = targets[j]
            deg[v] += 1
            deg[targets[j]] += 1
            L += 2
        if debug and L != deg[: v + 1].sum():
            return deg, BOOKKEEPING
    return deg, OK


@njit(nogil=True, cache=True)
def _grow_random(N, m, rng, debug):
    m0 = m + 1
    deg = np.zeros(N, np.int64)
    picks = np.empty(2 * m0, np.int64)
    _ring(deg, picks, m0)
    targets = np.empty(m, np.int64)
    for v in range(m0, N):
        for j in range(m):
            tries = 0
            w = int(rng.random() * v)
            while _seen(targets, j, w):
                tries += 1
                if tries > MAX_RETRIES:
                    return deg, RETRIES_EXCEEDED
                w = int(rng.random() * v)
            targets[j] = w
        for j in range(m):
            deg[v] += 1
            deg[targets[j]] += 1
    return deg, OK


@njit(nogil=True, cache=True)
def _grow_ll1(N, m, p, rng, debug):
    # weight of vertex j is (1-p) k_j + p
    m0 = m + 1
    q = 1.0 - p
    deg = np.zeros(N, np.int64)
    picks = np.empty(2 * m0 + 2 * m * (N - m0), np.int64)
    L = _ring(deg, picks, m0)
    targets = np.empty(m, np.int64)
    for v in range(m0, N):
        pref = q * L
        total = pref + p * v
        for j in range(m):
            tries = 0
            while True:
                if rng.random() * total < pref:
                    w = picks[int(rng.random() * L)]
                else:
                    w = int(rng.random() * v)
                if not _seen(targets, j, w):
                    break
                tries += 1
                if tries > MAX_RETRIES:
                    return deg, RETRIES_EXCEEDED
            targets[j] = w
        for j in range(m):
            picks[L] = v
            picks[L + 1] = targets[j]
            deg[v] += 1
            deg[targets[j]] += 1
            L += 2
        if debug and L != deg[: v + 1].sum():
            return deg, BOOKKEEPING
    return deg, OK


@njit(nogil=True, cache=True)
def _grow_ll2(N, m, p, m0, rng, debug):
    # each link is preferential with probability 1-p, uniform otherwise
    deg = np.zeros(N, np.int64)
    picks = np.empty(2 * m0 + 2 * m * (N - m0), np.int64)
    L = _ring(deg, picks, m0)
    targets = np.empty(m, np.int64)
    for v in range(m0, N):
        for j in range(m):
            tries = 0
            while True:
                if rng.random() < p:
                    w = int(rng.random() * v)
                else:
                    w = picks[int(rng.random() * L)]
                if not _seen(targets, j, w):
                    break
                tries += 1
                if tries > MAX_RETRIES:
                    return deg, RETRIES_EXCEEDED
            targets[j] = w
        for j in range(m):
            picks[L] = v
            picks[L + 1] = targets[j]
            deg[v] += 1
            deg[targets[j]] += 1
            L += 2
        if debug and L != deg[: v + 1].sum():
            return deg, BOOKKEEPING
    return deg, OK


@njit(nogil=True, cache=True)
def _grow_collab(N, T, m0, rng, debug):
    # seed: complete graph on m0 vertices; each step joins T-1 chosen
    # vertices and the newcomer into a T-clique
    deg = np.zeros(N, np.int64)
    per_step = 2 * ((T - 1) + (T - 1) * (T - 2) // 2)
    picks = np.empty(m0 * (m0 - 1) + per_step * (N - m0), np.int64)
    edges = Dict.empty(key_type=types.int64, value_type=types.boolean)
    L = 0
    for a in range(m0):
        for b in range(a + 1, m0):
            edges[a * N + b] = True
            picks[L] = a
            picks[L + 1] = b
            deg[a] += 1
            deg[b] += 1
            L += 2
    k = T - 1
    targets = np.empty(k, np.int64)
    for v in range(m0, N):
        for j in range(k):
            tries = 0
            w = picks[int(rng.random() * L)]
            while _seen(targets, j, w):
                tries += 1
                if tries > MAX_RETRIES:
                    return deg, RETRIES_EXCEEDED
                w = picks[int(rng.random() * L)]
            targets[j] = w
        # picks must not change while choosing, so append afterwards
        for j in range(k):
            picks[L] = v
            picks[L + 1] = targets[j]
            deg[v] += 1
            deg[targets[j]] += 1
            L += 2
        for a in range(k):
            for b in range(a + 1, k):
                lo = min(targets[a], targets[b])
                hi = max(targets[a], targets[b])
                key = lo * N + hi
                if key not in edges:
                    edges[key] = True
                    picks[L] = lo
                    picks[L + 1] = hi
                    deg[lo] += 1
                    deg[hi] += 1
                    L += 2
        if debug and L != deg[: v + 1].sum():
            return deg, BOOKKEEPING
    return deg, OK


@njit(nogil=True, cache=True)
def _grow_zrz(N, m, rng, debug):
    # registry of every m-clique; a uniform one is chosen each step
    deg = np.zeros(N, np.int64)
    cliques = np.empty((1 + m * (N - m), m), np.int32)
    for i in range(m):
        cliques[0, i] = i
        deg[i] = m - 1
    nc = 1
    for v in range(m, N):
        c = int(rng.random() * nc)
        for i in range(m):
            deg[cliques[c, i]] += 1
        deg[v] = m
        for j in range(m):
            for i in range(m):
                cliques[nc, i] = cliques[c, i]
            cliques[nc, j] = v
            nc += 1
        if debug and nc != 1 + m * (v - m + 1):
            return deg, BOOKKEEPING
    return deg, OK


@njit(nogil=True, cache=True)
def _grow_kk(N, p, rng, debug):
    # entry t is the group founded at step t, or a permanent size-0 entry
    # when that step's element joined an existing group
    size = np.zeros(N, np.int64)
    group_of = np.empty(N, np.int64)
    size[0] = 1
    group_of[0] = 0
    for t in range(1, N):
        if rng.random() < p:
            g = group_of[int(rng.random() * t)]
            size[g] += 1
            group_of[t] = g
        else:
            size[t] = 1
            group_of[t] = t
        if debug and size[: t + 1].sum() != t + 1:
            return size, BOOKKEEPING
    return size, OK


@njit(nogil=True, cache=True)
def _grow_dms(N, m, H, rng, debug):
    # in-degree q_s; target weight H + q_s over all sites including the
    # newcomer; the m links of a step are drawn from the same weights
    q = np.zeros(N, np.int64)
    picks = np.empty(m * (N - 1), np.int64)
    L = 0
    targets = np.empty(m, np.int64)
    for v in range(1, N):
        n = v + 1
        uniform = H * n
        total = uniform + L
        if total <= 0:
            return q, NO_WEIGHT
        for j in range(m):
            if rng.random() * total < uniform:
                targets[j] = int(rng.random() * n)
            else:
                targets[j] = picks[int(rng.random() * L)]
        for j in range(m):
            picks[L] = targets[j]
            q[targets[j]] += 1
            L += 1
        if debug and L != q[: v + 1].sum():
            return q, BOOKKEEPING
    return q, OK


@njit(nogil=True, cache=True)
def _grow_lcd(N, m, rng, debug):
    # edges added one at a time; the newcomer's own half-edge is in the
    # list before each draw, so loops occur and multi-edges are kept
    deg = np.zeros(N, np.int64)
    picks = np.empty(2 + 2 * m * (N - 1), np.int64)
    picks[0] = 0
    picks[1] = 0
    deg[0] = 2
    L = 2
    for v in range(1, N):
        for j in range(m):
            picks[L] = v
            L += 1
            w = picks[int(rng.random() * L)]
            picks[L] = w
            L += 1
            deg[v] += 1
            deg[w] += 1
        if debug and L != deg[: v + 1].sum():
            return deg, BOOKKEEPING
    return deg, OK


# --- public surface -------------------------------------------------------


def initial_size(model: ModelSpec) -> int:
    """Number of vertices in the seed network of ``model``'s generative rule."""
    p = model.params
    rule = model.generative_rule
    if rule in ("ba", "random", "ll1"):
        return p["m"] + 1
    if rule == "ll2":
        return p["m_0"]
    if rule == "collab":
        return p["m_0"]
    if rule == "zrz":
        return p["m"]
    return 1  # kk, dms, lcd


def grow_degrees(model: ModelSpec, N: int, seed: int, debug: bool = False) -> np.ndarray:
    """Run one growth and return the per-vertex degree array."""
    N = int(N)
    n0 = initial_size(model)
    if N < n0:
        raise SimulationError(f"N={N} is smaller than the seed network ({n0} vertices)")
    rng = _rng(seed)
    p = model.params
    rule = model.generative_rule
    if rule == "ba":
        deg, status = _grow_ba(N, p["m"], rng, debug)
    elif rule == "random":
        deg, status = _grow_random(N, p["m"], rng, debug)
    elif rule == "ll1":
        deg, status = _grow_ll1(N, p["m"], p["p"], rng, debug)
    elif rule == "ll2":
        deg, status = _grow_ll2(N, p["m"], p["p"], p["m_0"], rng, debug)
    elif rule == "collab":
        deg, status = _grow_collab(N, p["T"], p["m_0"], rng, debug)
    elif rule == "zrz":
        deg, status = _grow_zrz(N, p["m"], rng, debug)
    elif rule == "kk":
        deg, status = _grow_kk(N, p["p"], rng, debug)
    elif rule == "dms":
        deg, status = _grow_dms(N, p["m"], float(p["H"]), rng, debug)
    elif rule == "lcd":
        deg, status = _grow_lcd(N, p["m"], rng, debug)
    else:
        raise SimulationError(f"no generative rule {rule!r}")
    if status != OK:
        raise SimulationError(f"{model.name}: {_STATUS[status]}")
    return deg


def _histogram(deg: np.ndarray) -> dict[int, int]:
    counts = np.bincount(deg)
    return {int(k): int(c) for k, c in enumerate(counts) if c}


def grow(model: ModelSpec, N: int, seed: int, debug: bool = False) -> SimResult:
    deg = grow_degrees(model, N, seed, debug)
    return SimResult(model.name, int(N), int(seed), _histogram(deg), 1, dict(model.params))


def trials(
    model: ModelSpec, N: int, seed_base: int, n_trials: int, workers: int | None = None
) -> SimResult:
    """Aggregate ``n_trials`` independent runs seeded ``seed_base + i``.

    Runs execute on a thread pool; the summed histogram does not depend on
    completion order.
    """
    if n_trials < 1:
        raise SimulationError(f"n_trials={n_trials} must be at least 1")
    workers = workers or min(n_trials, os.cpu_count() or 1)

    def run(i):
        try:
            return grow(model, N, seed_base + i)
        except SimulationError as exc:
            raise SimulationError(f"trial {i}: {exc}", trial=i) from exc

    if workers == 1 or n_trials == 1:
        results = [run(i) for i in range(n_trials)]
    else:
        with cf.ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(n_trials)))
    total: dict[int, int] = {}
    for r in results:
        for k, c in r.histogram.items():
            total[k] = total.get(k, 0) + c
    return SimResult(model.name, int(N), int(seed_base), dict(sorted(total.items())), n_trials, dict(model.params))


def empirical_distribution(r: SimResult) -> DegreeDistribution:
    """Observed fraction of vertices at each degree, from the smallest observed degree up."""
    if not r.histogram:
        raise SimulationError("empty histogram")
    lo, hi = min(r.histogram), max(r.histogram)
    counts = np.zeros(hi - lo + 1)
    for k, c in r.histogram.items():
        counts[k - lo] = c
    n = r.N * r.n_trials
    return DegreeDistribution(lo, counts / n, None, n_obs=n)
