"""The nine growth models as chain specifications.

Each builder returns a :class:`ModelSpec` holding the birth law d_k, the
exact per-step rate f_t(k), its affine limit (A, B) and the tail exponent
the limit implies. The simulator in :mod:`growchain.netgen` looks the
generative rule up by ``generative_rule``.

Two rates differ from the commonly quoted forms:

* ``ba``: a vertex of degree k receives each of the m new edges with
  probability k / (2 m t), so f_t(k) = k / (2t) and A = 1/2. Writing
  m k / (2t) would give A = m/2 and gamma = 1 + 2/m, which contradicts the
  Gamma(k)/Gamma(k+3) law and gamma = 3. Simulating m = 3 settles it
  (see tests/test_acceptance.py, criterion 7).
* ``zrz``: lim t f_t(k) of ((m-1)k - m(m-2)) / (mt + 1) has intercept
  -(m-2), not -m(m-2). The derived value keeps F(m) = 1.

The collaboration model is born at degree T-1 (each new vertex links to
T-1 existing ones); its rate keeps the k_0 + T t normaliser, which ignores
the clique edges added among the chosen vertices, so exact and simulated
laws differ slightly by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

from .errors import ParameterError
from .rates import AffineLimit, BirthDistribution, StepRate, classify, ChainClass
from .steady import tail_exponent_exact


@dataclass(frozen=True)
class ModelSpec:
    name: str
    params: dict
    birth: BirthDistribution
    rate: StepRate
    limit: AffineLimit
    expected_gamma: float | None
    multiple_links: bool
    generative_rule: str
    notes: str = ""

    @property
    def chain_class(self) -> ChainClass:
        return classify(self.limit.A, self.limit.B)


def _spec(name, params, birth, rate, A, B, multiple=False, notes=""):
    limit = AffineLimit(A, B, birth.m)
    gamma = tail_exponent_exact(A) if A > 0 else None
    return ModelSpec(name, params, birth, rate, limit, gamma, multiple, name, notes)


def _int_at_least(name, value, lo):
    if isinstance(value, bool) or int(value) != value or value < lo:
        raise ParameterError(f"{name} must be an integer >= {lo}, got {value!r}")
    return int(value)


def _prob(name, value, lo_open=False, hi_open=False):
    v = float(value)
    lo_ok = v > 0 if lo_open else v >= 0
    hi_ok = v < 1 if hi_open else v <= 1
    if not (lo_ok and hi_ok):
        lo = "(" if lo_open else "["
        hi = ")" if hi_open else "]"
        raise ParameterError(f"{name} must lie in {lo}0, 1{hi}, got {value!r}")
    return v


def build_ba(m: int = 1) -> ModelSpec:
    m = _int_at_least("m", m, 1)
    rate = StepRate(lambda t, k: k / (2 * t), "k/(2t)")
    return _spec("ba", {"m": m}, BirthDistribution.point(m), rate, 0.5, 0.0)


def build_random(m: int = 1) -> ModelSpec:
    m = _int_at_least("m", m, 1)
    rate = StepRate(lambda t, k: m / t + 0 * k, "m/t")
    return _spec("random", {"m": m}, BirthDistribution.point(m), rate, 0.0, float(m))


def build_ll1(m: int = 1, p: float = 0.5) -> ModelSpec:
    m = _int_at_least("m", m, 1)
    p = _prob("p", p)
    q = 1.0 - p
    den = q * 2 * m + p
    # integer-exact numerator/denominator so p = 0 rounds exactly like ba
    rate = StepRate(lambda t, k: m * (q * k + p) / (den * t), "m((1-p)k+p)/(((1-p)2m+p)t)")
    return _spec("ll1", {"m": m, "p": p}, BirthDistribution.point(m), rate, m * q / den, m * p / den)


def build_ll2(m: int = 1, p: float = 0.5, m_0: int | None = None, N_0: int | None = None) -> ModelSpec:
    m = _int_at_least("m", m, 1)
    p = _prob("p", p)
    m_0 = m + 1 if m_0 is None else _int_at_least("m_0", m_0, m)
    N_0 = 2 * m_0 if N_0 is None else _int_at_least("N_0", N_0, 0)
    q = 1.0 - p

    def f(t, k):
        return m * q * k / (2 * m * t + N_0) + m * p / (t + m_0)

    params = {"m": m, "p": p, "m_0": m_0, "N_0": N_0}
    rate = StepRate(f, "m(1-p)k/(2mt+N_0) + mp/(t+m_0)")
    return _spec("ll2", params, BirthDistribution.point(m), rate, q / 2, m * p)


def build_collab(T: int = 2, m_0: int | None = None, k_0: int | None = None) -> ModelSpec:
    T = _int_at_least("T", T, 2)
    m_0 = T if m_0 is None else _int_at_least("m_0", m_0, T)
    k_0 = m_0 * (m_0 - 1) if k_0 is None else _int_at_least("k_0", k_0, 0)
    rate = StepRate(lambda t, k: (T - 1) * k / (k_0 + T * t), "(T-1)k/(k_0+Tt)")
    params = {"T": T, "m_0": m_0, "k_0": k_0}
    return _spec(
        "collab", params, BirthDistribution.point(T - 1), rate, (T - 1) / T, 0.0,
        notes="born at degree T-1; rate normaliser omits clique edges among chosen vertices",
    )


def build_zrz(m: int = 3) -> ModelSpec:
    m = _int_at_least("m", m, 3)
    rate = StepRate(lambda t, k: ((m - 1) * k - m * (m - 2)) / (m * t + 1), "((m-1)k-m(m-2))/(mt+1)")
    return _spec(
        "zrz", {"m": m}, BirthDistribution.point(m), rate, (m - 1) / m, -(m - 2.0),
        notes="intercept -(m-2) taken from the limit of the stated rate",
    )


def build_kk(p: float = 0.5) -> ModelSpec:
    p = _prob("p", p, lo_open=True, hi_open=True)
    birth = BirthDistribution({0: p, 1: 1.0 - p}, 0, 1)
    rate = StepRate(lambda t, k: p * k / t, "pk/t")
    return _spec("kk", {"p": p}, birth, rate, p, 0.0, notes="degree = group size; size 0 is absorbing")


def build_dms(m: int = 1, H: float = 1.0, force: bool = False) -> ModelSpec:
    m = _int_at_least("m", m, 1)
    H = float(H)
    if H < 0 or (H == 0 and not force):
        raise ParameterError(
            f"H must be > 0 (H = 0 freezes every site at in-degree 0; pass force to allow), got {H!r}"
        )
    rate = StepRate(lambda t, k: m * (k + H) / ((m + H) * t), "m(k+H)/((m+H)t)")
    return _spec(
        "dms", {"m": m, "H": H}, BirthDistribution.point(0), rate, m / (m + H), m * H / (m + H),
        multiple=True, notes="chain tracks in-degree",
    )


def build_lcd(m: int = 1) -> ModelSpec:
    m = _int_at_least("m", m, 1)
    rate = StepRate(lambda t, k: m * k / (2 * m * t + m), "mk/(2mt+m)")
    return _spec("lcd", {"m": m}, BirthDistribution.point(m), rate, 0.5, 0.0, multiple=True)


@dataclass(frozen=True)
class ModelInfo:
    name: str
    builder: Callable[..., ModelSpec]
    schema: dict[str, Any] = field(default_factory=dict)  # parameter -> default
    gamma_formula: str = ""
    multiple_links: bool = False


MODELS: dict[str, ModelInfo] = {
    info.name: info
    for info in [
        ModelInfo("ba", build_ba, {"m": 1}, "3"),
        ModelInfo("random", build_random, {"m": 1}, "none (geometric)"),
        ModelInfo("ll1", build_ll1, {"m": 1, "p": 0.5}, "3 + p/(m(1-p)); geometric at p=1"),
        ModelInfo("ll2", build_ll2, {"m": 1, "p": 0.5, "m_0": None, "N_0": None}, "1 + 2/(1-p); geometric at p=1"),
        ModelInfo("collab", build_collab, {"T": 2, "m_0": None, "k_0": None}, "1 + T/(T-1)"),
        ModelInfo("zrz", build_zrz, {"m": 3}, "1 + m/(m-1)"),
        ModelInfo("kk", build_kk, {"p": 0.5}, "1 + 1/p"),
        ModelInfo("dms", build_dms, {"m": 1, "H": 1.0, "force": False}, "2 + H/m", multiple_links=True),
        ModelInfo("lcd", build_lcd, {"m": 1}, "3", multiple_links=True),
    ]
}


def list_models() -> list[ModelInfo]:
    return list(MODELS.values())


def build_model(name: str, **params) -> ModelSpec:
    """Build a registered model, ignoring ``None`` values and rejecting unknown parameters."""
    try:
        info = MODELS[name]
    except KeyError:
        raise ParameterError(f"unknown model {name!r}; choose from {sorted(MODELS)}") from None
    given = {k: v for k, v in params.items() if v is not None}
    unknown = set(given) - set(info.schema)
    if unknown:
        raise ParameterError(f"model {name!r} takes {sorted(info.schema)}, got unexpected {sorted(unknown)}")
    return info.builder(**given)
