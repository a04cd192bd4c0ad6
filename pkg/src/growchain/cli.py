"""Command-line interface.

    growchain exact    --model ba --m 3 --k-max 1000
    growchain evolve   --model kk --p 0.5 --t-max 100000
    growchain simulate --model dms --m 1 --H 1 --N 1000000 --seed 42
    growchain compare  --model ba --N 1000000 --trials 3 --max-tv 0.01
    growchain sweep    --model ll1 --grid p=0,0.25,0.5
    growchain models

Flags override values from ``--config FILE`` (a JSON object with the same
keys as :class:`RunConfig`, model parameters under ``"params"``). Relative
``--out`` paths resolve against ``$GROWCHAIN_OUTPUT_DIR`` when it is set.

Exit codes: 0 ok, 2 usage or parameter error, 3 numerical/domain error,
4 compare threshold exceeded.
"""

from __future__ import annotations

import argparse
import concurrent.futures as cf
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .analysis import DEFAULT_FIT_RANGE, compare_report, tail_exponent_mle, tail_slope_loglog
from .errors import GrowchainError, ParameterError
from .master import convergence_metrics, evolve
from .models import MODELS, build_model, list_models
from .netgen import RNG_NAME, empirical_distribution, trials
from .rates import ChainClass
from .steady import (
    DegreeDistribution,
    normalization_report,
    steady_by_recurrence,
    steady_closed_form_affine,
)

OUTPUT_DIR_ENV = "GROWCHAIN_OUTPUT_DIR"
COMMANDS = ("exact", "evolve", "simulate", "compare", "sweep", "models")

EXIT_USAGE, EXIT_NUMERIC, EXIT_THRESHOLD = 2, 3, 4
INT_PARAMS = {"m", "T", "m_0", "N_0", "k_0"}

MODEL_FLAGS = {  # flag dest -> model parameter name
    "m": "m",
    "p": "p",
    "H": "H",
    "T": "T",
    "m0": "m_0",
    "N0": "N_0",
    "k0": "k_0",
    "force": "force",
}


@dataclass
class RunConfig:
    command: str
    model: str = "ba"
    params: dict = field(default_factory=dict)
    k_max: int | None = None
    N: int = 100_000
    T: int = 10_000
    seed: int = 0
    n_trials: int = 1
    fit_range: tuple[int, int] = DEFAULT_FIT_RANGE
    k_min: int = 10
    grid: str | None = None
    against: str = "simulation"
    simulate: bool = False
    max_tv: float | None = None
    max_gamma_err: float | None = None
    output: str | None = None
    fmt: str = "csv"

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("output")  # keep files byte-identical wherever they are written
        d["fit_range"] = list(self.fit_range)
        return d


@dataclass
class Table:
    columns: list[str]
    rows: list[list]
    summary: dict = field(default_factory=dict)


# --- argument handling ----------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--config", help="JSON config file; flags take precedence")
    common.add_argument("--model", choices=sorted(MODELS))
    g = common.add_argument_group("model parameters")
    g.add_argument("--m", type=int)
    g.add_argument("--p", type=float)
    g.add_argument("--H", type=float)
    g.add_argument("--T", type=int, help="clique size of the collaboration model")
    g.add_argument("--m0", type=int)
    g.add_argument("--N0", type=int)
    g.add_argument("--k0", type=int)
    g.add_argument("--force", action="store_true", default=None, help="allow dms with H = 0")
    r = common.add_argument_group("run")
    r.add_argument("--k-max", dest="k_max", type=int)
    r.add_argument("--N", type=int, help="vertices per simulated network")
    r.add_argument("--t-max", dest="t_max", type=int, help="master-equation horizon")
    r.add_argument("--seed", type=int)
    r.add_argument("--trials", dest="n_trials", type=int)
    r.add_argument("--fit-range", dest="fit_range", type=int, nargs=2, metavar=("LO", "HI"))
    r.add_argument("--k-min", dest="k_min", type=int)
    r.add_argument("--grid", help="NAME=v1,v2,... for sweep")
    r.add_argument("--against", choices=("simulation", "exact", "evolve"))
    r.add_argument("--simulate", action="store_true", default=None, help="sweep: fit simulations by MLE")
    r.add_argument("--max-tv", dest="max_tv", type=float)
    r.add_argument("--max-gamma-err", dest="max_gamma_err", type=float)
    o = common.add_argument_group("output")
    o.add_argument("--out", help="output file (default stdout)")
    o.add_argument("--format", dest="fmt", choices=("csv", "json"))

    parser = argparse.ArgumentParser(
        prog="growchain",
        description="Degree distributions of growing-network Markov chains.",
        allow_abbrev=False,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], allow_abbrev=False)
    return parser


def resolve_config(ns: argparse.Namespace) -> RunConfig:
    """Merge built-in defaults, the optional JSON file, then flags."""
    base: dict = {}
    if ns.config:
        try:
            base = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read config {ns.config}: {exc}") from exc
        if not isinstance(base, dict):
            raise ParameterError("config file must hold a JSON object")
        unknown = set(base) - set(RunConfig.__dataclass_fields__)
        if unknown:
            raise ParameterError(f"unknown config keys {sorted(unknown)}")
    base.pop("command", None)
    params = dict(base.pop("params", {}) or {})
    for flag, name in MODEL_FLAGS.items():
        v = getattr(ns, flag)
        if v is not None:
            params[name] = v
    overrides = {
        "model": ns.model,
        "k_max": ns.k_max,
        "N": ns.N,
        "T": ns.t_max,
        "seed": ns.seed,
        "n_trials": ns.n_trials,
        "fit_range": ns.fit_range,
        "k_min": ns.k_min,
        "grid": ns.grid,
        "against": ns.against,
        "simulate": ns.simulate,
        "max_tv": ns.max_tv,
        "max_gamma_err": ns.max_gamma_err,
        "output": ns.out,
        "fmt": ns.fmt,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    cfg = RunConfig(command=ns.command, params=params, **base)
    cfg.fit_range = tuple(int(x) for x in cfg.fit_range)
    if cfg.fmt not in ("csv", "json"):
        raise ParameterError(f"format must be csv or json, got {cfg.fmt!r}")
    if cfg.model not in MODELS:
        raise ParameterError(f"unknown model {cfg.model!r}")
    return cfg


# --- commands -------------------------------------------------------------


def _model(cfg: RunConfig):
    return build_model(cfg.model, **cfg.params)


def cmd_exact(cfg: RunConfig) -> Table:
    model = _model(cfg)
    k_max = cfg.k_max or 10_000
    rec = steady_by_recurrence(model.birth, model.limit, k_max)
    summary = _limit_summary(model)
    summary.update(_tail_summary(rec))
    if model.chain_class is ChainClass.SCALE_FREE:
        closed = steady_closed_form_affine(model.birth, model.limit, k_max)
        rows = [
            [int(k), a, b, abs(a - b)]
            for k, a, b in zip(rec.degrees, rec.probs.tolist(), closed.probs.tolist())
        ]
        return Table(["k", "P_recurrence", "P_closed_form", "abs_diff"], rows, summary)
    rows = [[int(k), a] for k, a in zip(rec.degrees, rec.probs.tolist())]
    return Table(["k", "P_recurrence"], rows, summary)


def decade_times(T: int) -> list[int]:
    out, t = [], 10
    while t < T:
        out.append(t)
        t *= 10
    return out + [T]


def cmd_evolve(cfg: RunConfig) -> Table:
    model = _model(cfg)
    k_max = cfg.k_max or 500
    trace = evolve(model, cfg.T, k_max, decade_times(cfg.T))
    limit = steady_by_recurrence(model.birth, model.limit, k_max)
    tv = dict(convergence_metrics(trace, limit))
    rows = [[s.t, tv[s.t], float(s.probs[0]), s.overflow] for s in trace.snapshots]
    summary = _limit_summary(model)
    summary.update({"t_start": trace.t_start, "P_m_limit": float(limit.probs[0])})
    return Table(["t", "tv_to_limit", "P_m_t", "overflow"], rows, summary)


def cmd_simulate(cfg: RunConfig) -> Table:
    model = _model(cfg)
    result = trials(model, cfg.N, cfg.seed, cfg.n_trials)
    emp = empirical_distribution(result)
    rows = [
        [int(k), result.histogram.get(int(k), 0), p]
        for k, p in zip(emp.degrees, emp.probs.tolist())
    ]
    summary = result.to_dict()
    summary.pop("histogram")
    return Table(["k", "count", "P_hat"], rows, summary)


def cmd_compare(cfg: RunConfig) -> Table:
    model = _model(cfg)
    k_max = cfg.k_max or 10_000
    exact = steady_by_recurrence(model.birth, model.limit, k_max)
    fit_range, method = cfg.fit_range, "loglog"
    if cfg.against == "simulation":
        other = empirical_distribution(trials(model, cfg.N, cfg.seed, cfg.n_trials))
        fit_range, method = (cfg.k_min, cfg.fit_range[1]), "mle"
    elif cfg.against == "evolve":
        snap = evolve(model, cfg.T, k_max).snapshots[-1]
        other = DegreeDistribution(exact.m, snap.probs)
    else:
        other = exact
    report = compare_report(exact, other, fit_range, method)
    summary = {"against": cfg.against, **report.to_dict()}
    failed = []
    if cfg.max_tv is not None and report.tv >= cfg.max_tv:
        failed.append(f"tv={report.tv:.6g} >= {cfg.max_tv}")
    if cfg.max_gamma_err is not None and report.gamma_fit is not None:
        err = abs(report.gamma_fit - report.gamma_exact)
        if err >= cfg.max_gamma_err:
            failed.append(f"|gamma_fit - gamma_exact|={err:.6g} >= {cfg.max_gamma_err}")
    summary["thresholds_failed"] = failed
    row = [report.tv, report.ks, report.head_abs_err, report.gamma_fit, report.gamma_exact]
    return Table(["tv", "ks", "head_abs_err", "gamma_fit", "gamma_exact"], [row], summary)


def _parse_grid(spec: str | None) -> tuple[str, list[float]]:
    if not spec or "=" not in spec:
        raise ParameterError("sweep needs --grid NAME=v1,v2,...")
    name, _, values = spec.partition("=")
    vals = [v for v in values.split(",") if v.strip()]
    if not vals:
        raise ParameterError(f"empty grid for {name!r}")
    try:
        return name.strip(), [float(v) for v in vals]
    except ValueError as exc:
        raise ParameterError(f"bad grid value in {spec!r}") from exc


def cmd_sweep(cfg: RunConfig) -> Table:
    name, values = _parse_grid(cfg.grid)
    lo, hi = cfg.fit_range

    def one(i_v):
        i, v = i_v
        params = {**cfg.params, name: int(v) if name in INT_PARAMS and v.is_integer() else v}
        model = build_model(cfg.model, **params)
        fit = None
        if model.expected_gamma is not None:
            if cfg.simulate:
                res = trials(model, cfg.N, cfg.seed + 1000 * i, cfg.n_trials)
                fit = tail_exponent_mle(res, cfg.k_min)
            else:
                fit = tail_slope_loglog(steady_by_recurrence(model.birth, model.limit, hi), lo, hi)
        return [v, model.expected_gamma, fit]

    with cf.ThreadPoolExecutor() as pool:
        rows = list(pool.map(one, enumerate(values)))
    summary = {"parameter": name, "fit": "mle" if cfg.simulate else f"loglog[{lo},{hi}]"}
    return Table([name, "gamma_exact", "gamma_fit"], rows, summary)


def cmd_models(cfg: RunConfig) -> Table:
    rows = [
        [info.name, json.dumps(info.schema, sort_keys=True), info.gamma_formula, info.multiple_links]
        for info in list_models()
    ]
    return Table(["name", "parameters", "gamma", "multiple_links"], rows)


def _limit_summary(model) -> dict:
    return {
        "model": model.name,
        "params": model.params,
        "class": model.chain_class.value,
        "A": model.limit.A,
        "B": model.limit.B,
        "m": model.birth.m,
        "M": model.birth.M,
        "expected_gamma": model.expected_gamma,
    }


def _tail_summary(dist) -> dict:
    tail = dist.tail
    norm = normalization_report(dist)
    return {
        "gamma": tail.gamma if tail else None,
        "prefactor": tail.prefactor if tail else None,
        "truncated_mass": tail.truncated_mass if tail else None,
        **norm,
    }


HANDLERS = {
    "exact": cmd_exact,
    "evolve": cmd_evolve,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
    "models": cmd_models,
}


# --- output ---------------------------------------------------------------


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def render(cfg: RunConfig, table: Table) -> str:
    provenance = {"version": __version__, "seed": cfg.seed, "rng": RNG_NAME}
    if cfg.fmt == "json":
        payload = {
            "command": cfg.command,
            "config": cfg.echo(),
            "columns": table.columns,
            "data": [dict(zip(table.columns, row)) for row in table.rows],
            "summary": table.summary,
            "provenance": provenance,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# growchain {__version__} {cfg.command}\n")
    buf.write(f"# config {json.dumps(cfg.echo(), sort_keys=True)}\n")
    if table.summary:
        buf.write(f"# summary {json.dumps(table.summary, sort_keys=True)}\n")
    buf.write(f"# provenance {json.dumps(provenance, sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(x) for x in row])
    return buf.getvalue()


def _destination(path: str) -> Path:
    p = Path(path)
    root = os.environ.get(OUTPUT_DIR_ENV)
    if root and not p.is_absolute():
        p = Path(root) / p
    return p


def run(cfg: RunConfig) -> int:
    table = HANDLERS[cfg.command](cfg)
    text = render(cfg, table)
    if cfg.output:
        dest = _destination(cfg.output)
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)
    else:
        sys.stdout.write(text)
    failed = table.summary.get("thresholds_failed") if cfg.command == "compare" else None
    if failed:
        print("threshold exceeded: " + "; ".join(failed), file=sys.stderr)
        return EXIT_THRESHOLD
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(ns)
        return run(cfg)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GrowchainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
