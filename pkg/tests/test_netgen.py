import numpy as np
import pytest

from growchain.errors import SimulationError
from growchain.models import MODELS, build_model
from growchain.netgen import (
    RNG_NAME,
    SimResult,
    empirical_distribution,
    grow,
    grow_degrees,
    initial_size,
    trials,
)


def test_ba_head_at_1e5():
    dist = empirical_distribution(grow(build_model("ba", m=1), 10**5, seed=12345))
    assert dist(1) == pytest.approx(0.667, abs=0.01)


def test_random_head_at_1e5():
    dist = empirical_distribution(grow(build_model("random", m=1), 10**5, seed=12345))
    assert dist(1) == pytest.approx(0.5, abs=0.01)


SEEDS = [
    ("ba", {"m": 1}, {2: 2}),
    ("ba", {"m": 2}, {2: 3}),
    ("random", {"m": 1}, {2: 2}),
    ("ll1", {"m": 2, "p": 0.5}, {2: 3}),
    ("ll2", {"m": 1, "p": 0.5}, {2: 2}),
    ("collab", {"T": 3}, {2: 3}),
    ("zrz", {"m": 4}, {3: 4}),
    ("kk", {"p": 0.5}, {1: 1}),
    ("dms", {"m": 2, "H": 1.0}, {0: 1}),
    ("lcd", {"m": 1}, {2: 1}),
]


@pytest.mark.parametrize("name, params, hist", SEEDS, ids=[f"{s[0]}{s[1]}" for s in SEEDS])
def test_zero_growth_returns_seed_network(name, params, hist):
    model = build_model(name, **params)
    r = grow(model, initial_size(model), seed=0)
    assert r.histogram == hist


def test_too_few_vertices():
    with pytest.raises(SimulationError, match="seed network"):
        grow(build_model("zrz", m=5), 4, seed=0)


def test_single_trial_equals_grow():
    model = build_model("ll1", m=2, p=0.3)
    assert trials(model, 5000, 77, 1).histogram == grow(model, 5000, 77).histogram


def test_trials_deterministic_and_order_free():
    model = build_model("dms", m=2, H=1.0)
    a = trials(model, 20_000, 5, 6, workers=1)
    b = trials(model, 20_000, 5, 6, workers=4)
    c = trials(model, 20_000, 5, 6)
    assert a.histogram == b.histogram == c.histogram
    summed = {}
    for i in range(6):
        for k, n in grow(model, 20_000, 5 + i).histogram.items():
            summed[k] = summed.get(k, 0) + n
    assert a.histogram == summed


def test_trials_tighten_ba_head():
    r = trials(build_model("ba", m=1), 10**5, 2024, 10)
    assert sum(r.histogram.values()) == 10**6
    assert empirical_distribution(r)(1) == pytest.approx(0.667, abs=0.004)


def test_trials_report_failing_index():
    model = build_model("dms", m=1, H=0.0, force=True)
    with pytest.raises(SimulationError) as info:
        trials(model, 100, 0, 3, workers=1)
    assert info.value.trial == 0
    assert "trial 0" in str(info.value)


def test_trials_need_at_least_one():
    with pytest.raises(SimulationError):
        trials(build_model("ba"), 100, 0, 0)


@pytest.mark.parametrize("name", list(MODELS))
def test_determinism(name):
    model = build_model(name)
    a = grow(model, 3000, 99)
    b = grow(model, 3000, 99)
    assert a.histogram == b.histogram
    assert grow(model, 3000, 100).histogram != a.histogram


@pytest.mark.parametrize("name", list(MODELS))
def test_debug_bookkeeping_clean(name):
    model = build_model(name)
    deg = grow_degrees(model, 600, 3, debug=True)
    assert deg.size == 600 and deg.min() >= 0


@pytest.mark.parametrize(
    "name, params",
    [("ba", {"m": 3}), ("ll2", {"m": 3, "p": 0.2}), ("collab", {"T": 4}), ("zrz", {"m": 3}), ("lcd", {"m": 2})],
)
def test_debug_bookkeeping_other_parameters(name, params):
    grow_degrees(build_model(name, **params), 800, 11, debug=True)


@pytest.mark.parametrize("m", [1, 2, 5])
@pytest.mark.parametrize("name", ["ba", "random", "ll1"])
def test_edge_accounting_ring_seeded(name, m):
    N = 4000
    deg = grow_degrees(build_model(name, m=m), N, 8)
    m0 = m + 1
    grown_edges = (deg.sum() - 2 * m0) // 2
    assert deg.sum() % 2 == 0
    assert grown_edges == m * (N - m0)


def test_ba_mean_degree_identity():
    m, N = 1, 10**4
    r = grow(build_model("ba", m=m), N, 1)
    dist = empirical_distribution(r)
    mean = float(np.dot(dist.degrees, dist.probs))
    # seed ring of m0 = m+1 vertices carries m0 edges
    assert mean * N == pytest.approx(2 * ((m + 1) + m * (N - m - 1)), abs=1e-6)


def test_other_accounting_identities():
    N = 5000
    zrz = grow_degrees(build_model("zrz", m=4), N, 2)
    assert zrz.sum() == 4 * 3 + 2 * 4 * (N - 4)
    kk = grow_degrees(build_model("kk", p=0.3), N, 2)
    assert kk.sum() == N
    dms = grow_degrees(build_model("dms", m=3, H=2.0), N, 2)
    assert dms.sum() == 3 * (N - 1)
    lcd = grow_degrees(build_model("lcd", m=2), N, 2)
    assert lcd.sum() == 2 + 4 * (N - 1)


def test_collab_minimum_degree_and_clique_edges():
    T, N = 3, 5000
    deg = grow_degrees(build_model("collab", T=T), N, 4)
    assert deg[T:].min() >= T - 1
    assert deg.sum() % 2 == 0
    # each step adds T-1 newcomer edges plus at most C(T-1, 2) clique edges
    lo = T * (T - 1) + 2 * (T - 1) * (N - T)
    hi = lo + (T - 1) * (T - 2) * (N - T)
    assert lo <= deg.sum() <= hi


def test_dms_h_zero_has_no_weight():
    with pytest.raises(SimulationError, match="weight"):
        grow(build_model("dms", m=1, H=0.0, force=True), 50, 0)


def test_histogram_sums_and_provenance():
    r = trials(build_model("kk", p=0.4), 3000, 10, 3)
    assert sum(r.histogram.values()) == 3000 * 3
    d = r.to_dict()
    assert d["rng"] == RNG_NAME and d["n_trials"] == 3 and d["seed"] == 10
    assert d["params"] == {"p": 0.4}


def test_empirical_distribution_small():
    dist = empirical_distribution(SimResult("x", 100, 0, {1: 50, 2: 50}))
    np.testing.assert_array_equal(dist.probs, [0.5, 0.5])
    assert dist.m == 1 and dist.n_obs == 100


def test_empirical_distribution_gaps_and_trials():
    dist = empirical_distribution(SimResult("x", 10, 0, {3: 4, 6: 16}, n_trials=2))
    np.testing.assert_array_equal(dist.probs, [0.2, 0, 0, 0.8])
    assert dist.m == 3 and dist.n_obs == 20


def test_empirical_distribution_empty():
    with pytest.raises(SimulationError):
        empirical_distribution(SimResult("x", 0, 0, {}))


@pytest.mark.slow
def test_ba_head_ratio_at_1e6():
    dist = empirical_distribution(grow(build_model("ba", m=1), 10**6, 31))
    assert dist(1) / dist(2) == pytest.approx(4.0, rel=0.05)


@pytest.mark.slow
def test_dms_head_at_1e6():
    dist = empirical_distribution(grow(build_model("dms", m=1, H=1.0), 10**6, 31))
    assert dist(0) == pytest.approx(2 / 3, abs=0.005)
