import math

import numpy as np
import pytest

from growchain.errors import ParameterError
from growchain.models import (
    MODELS,
    build_ba,
    build_collab,
    build_dms,
    build_kk,
    build_lcd,
    build_ll1,
    build_ll2,
    build_model,
    build_random,
    build_zrz,
    list_models,
)
from growchain.rates import ChainClass, classify
from growchain.steady import steady_by_recurrence, steady_closed_form_affine, tail_exponent_exact


def _steady(model, k_max=2000):
    return steady_by_recurrence(model.birth, model.limit, k_max)


def test_ba_head_m3():
    assert _steady(build_ba(3))(3) == pytest.approx(0.4, rel=1e-12)


def test_ba_spec_fields():
    ba = build_ba(1)
    assert ba.expected_gamma == 3.0
    assert (ba.limit.A, ba.limit.B) == (0.5, 0.0)
    assert not ba.multiple_links
    assert ba.rate(10, 4) == pytest.approx(0.2, rel=1e-15)


def test_ba_m2_prefactor_from_gamma_ratio():
    # Gamma(m+3)/Gamma(m) * 2/(m+2) = 2m(m+1) = 12 at m = 2
    dist = steady_closed_form_affine(build_ba(2).birth, build_ba(2).limit, 10**4)
    assert dist.tail.prefactor == pytest.approx(12.0, rel=1e-12)
    assert 1e4**3 * dist(10**4) == pytest.approx(12.0, rel=1e-3)


@pytest.mark.xfail(strict=True, reason="2m^2 is only the large-m leading term of 2m(m+1); at m=2 the limit is 12")
def test_ba_m2_prefactor_stated_value():
    dist = steady_closed_form_affine(build_ba(2).birth, build_ba(2).limit, 10**4)
    assert 1e4**3 * dist(10**4) == pytest.approx(8.0, rel=1e-2)


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_ba_and_lcd_heads(m):
    for model in (build_ba(m), build_lcd(m)):
        assert _steady(model)(m) == pytest.approx(2 / (m + 2), rel=1e-12)


def test_random_geometric_law():
    dist = _steady(build_random(1), 50)
    assert dist(4) == pytest.approx(1 / 16, rel=1e-15)
    assert dist(1) == 0.5
    assert build_random(2).chain_class is ChainClass.GEOMETRIC
    m = 3
    d3 = _steady(build_random(m), 50)
    for k in (3, 4, 10):
        assert d3(k) == pytest.approx((m / (1 + m)) ** (k - m) / (1 + m), rel=1e-13)


def test_ll1_p0_is_ba():
    ll1, ba = build_ll1(2, 0.0), build_ba(2)
    ts = np.array([1, 2, 7, 100, 12345, 10**6], dtype=float)
    for k in range(0, 40):
        np.testing.assert_array_equal(ll1.rate(ts, k), ba.rate(ts, k))
    assert (ll1.limit.A, ll1.limit.B) == (ba.limit.A, ba.limit.B)
    assert ll1.expected_gamma == ba.expected_gamma


@pytest.mark.parametrize("m, p", [(1, 0.5), (2, 0.3), (3, 0.9)])
def test_ll1_exponent_and_head(m, p):
    model = build_ll1(m, p)
    assert model.expected_gamma == pytest.approx(3 + p / (m * (1 - p)), rel=1e-12)
    head = (2 * m + (1 - 2 * m) * p) / (m**2 + 2 * m + (1 - m**2 - m) * p)
    assert _steady(model)(m) == pytest.approx(head, rel=1e-12)


def test_ll1_m1_half_is_gamma_4():
    assert build_ll1(1, 0.5).expected_gamma == pytest.approx(4.0, rel=1e-15)


def test_ll1_p1_geometric():
    assert build_ll1(2, 1.0).chain_class is ChainClass.GEOMETRIC


@pytest.mark.parametrize("m, p", [(1, 0.5), (2, 0.25), (4, 0.0)])
def test_ll2_exponent_and_head(m, p):
    model = build_ll2(m, p)
    assert model.expected_gamma == pytest.approx(1 + 2 / (1 - p), rel=1e-12)
    assert _steady(model)(m) == pytest.approx(2 / (2 + m + m * p), rel=1e-12)


def test_ll2_examples():
    assert build_ll2(1, 0.0).expected_gamma == 3.0
    assert build_ll2(1, 0.5).expected_gamma == pytest.approx(5.0, rel=1e-15)
    assert build_ll2(2, 1.0).chain_class is ChainClass.GEOMETRIC
    ll2 = build_ll2(2, 0.3, m_0=5, N_0=7)
    assert ll2.rate(10, 4) == pytest.approx(2 * 0.7 * 4 / (40 + 7) + 0.6 / 15, rel=1e-15)


@pytest.mark.parametrize("T, gamma", [(2, 3.0), (3, 2.5), (5, 2.25)])
def test_collab_exponent(T, gamma):
    model = build_collab(T)
    assert model.expected_gamma == pytest.approx(gamma, rel=1e-15)
    assert model.birth.m == T - 1


def test_collab_limit_and_defaults():
    model = build_collab(5)
    assert model.limit.A == pytest.approx(0.8, rel=1e-15)
    assert model.params == {"T": 5, "m_0": 5, "k_0": 20}
    assert model.rate(10, 4) == pytest.approx(16 / 70, rel=1e-15)


def test_zrz_examples():
    z3 = build_zrz(3)
    assert z3.expected_gamma == pytest.approx(2.5, rel=1e-15)
    assert z3.limit(3) == pytest.approx(1.0, abs=1e-15)
    assert _steady(z3)(3) == pytest.approx(0.5, rel=1e-12)
    assert build_zrz(4).limit.A == 0.75


def test_kk_examples():
    kk = build_kk(0.5)
    dist = _steady(kk)
    assert dist(0) == 0.5
    assert dist(1) == pytest.approx(1 / 3, rel=1e-15)
    assert dist(2) == pytest.approx(1 / 12, rel=1e-13)
    assert build_kk(0.25).expected_gamma == pytest.approx(5.0, rel=1e-15)


@pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
def test_kk_heads_and_gamma_form(p):
    dist = _steady(build_kk(p))
    assert dist(0) == pytest.approx(p, rel=1e-12)
    assert dist(1) == pytest.approx((1 - p) / (1 + p), rel=1e-12)
    for k in (2, 5, 40):
        expected = math.exp(math.lgamma(k) + math.lgamma(2 + 1 / p) - math.lgamma(k + 1 + 1 / p)) * (1 - p) / (1 + p)
        assert dist(k) == pytest.approx(expected, rel=1e-11)


@pytest.mark.parametrize("m, H", [(1, 1.0), (2, 4.0), (3, 0.5)])
def test_dms_head_and_exponent(m, H):
    model = build_dms(m, H)
    assert _steady(model)(0) == pytest.approx((m + H) / (m + H + m * H), rel=1e-12)
    assert model.expected_gamma == pytest.approx(2 + H / m, rel=1e-12)
    assert model.multiple_links and model.birth.m == 0


def test_dms_examples():
    assert _steady(build_dms(1, 1.0))(0) == pytest.approx(2 / 3, rel=1e-12)
    assert build_dms(3, 3.0).expected_gamma == pytest.approx(3.0, rel=1e-15)


def test_dms_h_zero_needs_force():
    with pytest.raises(ParameterError, match="force"):
        build_dms(1, 0.0)
    forced = build_dms(1, 0.0, force=True)
    assert forced.expected_gamma == pytest.approx(2.0, rel=1e-15)
    assert forced.limit.violations() == []
    assert forced.limit(0) == 0.0


def test_lcd_examples():
    assert _steady(build_lcd(3))(3) == pytest.approx(0.4, rel=1e-12)
    assert build_lcd(7).expected_gamma == 3.0
    assert _steady(build_lcd(1))(3) == pytest.approx(1 / 15, rel=1e-12)
    assert build_lcd(1).multiple_links


@pytest.mark.parametrize("name", list(MODELS))
def test_expected_gamma_is_one_plus_inverse_slope(name):
    model = build_model(name)
    if model.limit.A > 0:
        assert model.expected_gamma == tail_exponent_exact(model.limit.A)
        assert model.expected_gamma == 1 + 1 / model.limit.A
    else:
        assert model.expected_gamma is None
    assert model.chain_class is classify(model.limit.A, model.limit.B)
    assert model.generative_rule == name


def test_list_models():
    infos = list_models()
    assert len(infos) == 9
    by_name = {i.name: i for i in infos}
    assert set(by_name["ba"].schema) == {"m"}
    assert by_name["dms"].multiple_links
    assert [i.name for i in infos] == ["ba", "random", "ll1", "ll2", "collab", "zrz", "kk", "dms", "lcd"]


@pytest.mark.parametrize(
    "builder, kwargs",
    [
        (build_ba, {"m": 0}),
        (build_ba, {"m": 1.5}),
        (build_random, {"m": -1}),
        (build_ll1, {"p": 1.2}),
        (build_ll2, {"m": 2, "m_0": 1}),
        (build_collab, {"T": 1}),
        (build_zrz, {"m": 2}),
        (build_kk, {"p": 0.0}),
        (build_kk, {"p": 1.0}),
        (build_dms, {"H": -1.0}),
        (build_lcd, {"m": True}),
    ],
)
def test_parameter_errors(builder, kwargs):
    with pytest.raises(ParameterError):
        builder(**kwargs)


def test_build_model_lookup():
    assert build_model("ba", m=None).params == {"m": 1}
    with pytest.raises(ParameterError, match="unknown model"):
        build_model("nope")
    with pytest.raises(ParameterError, match="unexpected"):
        build_model("ba", p=0.5)
