"""Command-line experiment runner.

Five subcommands expose the library as reproducible experiments:

    qcurve    monotone-quantity curve along a heat flow
    closure   residual sign check for a (ramped) heat flow
    hyper     norm-ratio sweep across the critical smoothing time
    boolean   noise-contraction sweep tables on the two-point function
    selftest  the full invariant battery (nonzero exit on any failure)

Outputs are CSV (header row, snake_case columns, 17 significant digits)
or JSON (the same rows as objects plus a config echo).  Given the same
config, outputs are byte-identical across runs.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import boolean as bool_mod
from .errors import LabError, ParameterError
from .flow import (
    ExponentPair,
    closure_check,
    heat_flow,
    hyper_ratio,
    q_curve,
    ramped_flow,
)
from .hermite import MAX_ORDER
from .presets import PRESET_NAMES, get_preset
from .selftest import run_selftest
from .semigroup import OuContext


@dataclass
class ExperimentConfig:
    command: str
    p: float = 2.0
    q: float = 4.0
    c: float = 1.0
    s: float | None = None
    t_min: float = 1e-3
    t_max: float = 12.0
    t_count: int = 60
    t_spacing: str = "log"
    order: int = 80
    inner_order: int | None = None
    max_degree: int | None = None
    preset: str = "bump"
    preset_params: dict = field(default_factory=dict)
    ramp: float = 0.0
    s_sweep: str = "0.8*:1.2*:21"
    n: int = 1
    eps_count: int = 99
    rho_factors: tuple = (0.98, 1.0, 1.02)
    output: str | None = None
    fmt: str = "csv"

    def validate(self) -> list[str]:
        errors = []
        if self.command not in ("qcurve", "closure", "hyper", "boolean", "selftest"):
            errors.append(f"command: unknown command {self.command!r}")
        if not 1 <= self.order <= MAX_ORDER:
            errors.append(f"order: must be in [1, {MAX_ORDER}], got {self.order}")
        if self.inner_order is not None and self.inner_order < self.order:
            errors.append(
                f"inner_order: must be >= order ({self.order}), got {self.inner_order}"
            )
        if self.t_spacing not in ("log", "linear"):
            errors.append(f"t_spacing: must be log or linear, got {self.t_spacing!r}")
        if self.t_min <= 0 or self.t_max <= self.t_min:
            errors.append(f"times: need 0 < t_min < t_max, got [{self.t_min}, {self.t_max}]")
        min_count = 3 if self.command == "closure" else 1
        if self.t_count < min_count:
            errors.append(f"t_count: must be >= {min_count} for {self.command}, got {self.t_count}")
        if self.preset not in PRESET_NAMES:
            errors.append(f"preset: unknown preset {self.preset!r}")
        if self.fmt not in ("csv", "json"):
            errors.append(f"format: must be csv or json, got {self.fmt!r}")
        if self.command == "boolean" and not 1 <= self.n <= bool_mod.MAX_DIM:
            errors.append(f"n: must be in [1, {bool_mod.MAX_DIM}], got {self.n}")
        return errors

    def times(self) -> np.ndarray:
        if self.t_spacing == "log":
            return np.geomspace(self.t_min, self.t_max, self.t_count)
        return np.linspace(self.t_min, self.t_max, self.t_count)

    def context(self) -> OuContext:
        return OuContext.build(
            self.order,
            inner_order=self.inner_order,
            max_degree=self.max_degree,
        )

    def echo(self) -> dict:
        d = asdict(self)
        d["rho_factors"] = list(self.rho_factors)
        return d


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return str(v)


def _write_rows(config: ExperimentConfig, header: list[str], rows: list[tuple]) -> str:
    buf = io.StringIO()
    if config.fmt == "csv":
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(_fmt_value(v) for v in row) + "\n")
    else:
        payload = {
            "config": config.echo(),
            "rows": [dict(zip(header, row)) for row in rows],
        }
        buf.write(json.dumps(payload, indent=2, sort_keys=True, default=float))
        buf.write("\n")
    return buf.getvalue()


def _emit(config: ExperimentConfig, text: str) -> None:
    if config.output is None:
        sys.stdout.write(text)
    else:
        with open(config.output, "w", newline="\n") as fh:
            fh.write(text)


def _run_qcurve(config: ExperimentConfig) -> tuple[list[str], list[tuple]]:
    pair = ExponentPair(config.p, config.q, config.c)
    ctx = config.context()
    preset = get_preset(config.preset, **config.preset_params)
    curve = q_curve(preset.fn, pair, config.times(), ctx)
    sign = 1.0 if curve.direction == "nondecreasing" else -1.0
    rows = []
    for i, (t, qv) in enumerate(zip(curve.times, curve.q_values)):
        slack = 0.0 if i == 0 else sign * (qv - curve.q_values[i - 1])
        rows.append((float(t), float(qv), curve.direction, float(slack)))
    return ["t", "q_value", "direction", "slack"], rows


def _run_closure(config: ExperimentConfig) -> tuple[list[str], list[tuple], bool]:
    pair = ExponentPair(config.p, config.q, config.c)
    ctx = config.context()
    preset = get_preset(config.preset, **config.preset_params)
    if preset.polynomial_degree is None:
        raise ParameterError(
            f"closure needs a polynomial preset (got {preset.name!r}); "
            "spectral refits of non-polynomials are sign-indefinite off-window"
        )
    u0 = preset.spectral(max(preset.polynomial_degree, 2))
    flow = heat_flow(u0, config.times(), ctx.rule)
    if config.ramp:
        flow = ramped_flow(flow, pair.regime.hypothesis_sign * abs(config.ramp))
    report = closure_check(flow, pair, ctx)
    rows = []
    for hyp, con in zip(report.hypothesis, report.conclusion or report.hypothesis):
        rows.append(
            (
                hyp.index,
                hyp.time,
                hyp.min_slack,
                hyp.tol,
                con.min_slack if report.conclusion else math.nan,
                con.max_slack if report.conclusion else math.nan,
                con.tol if report.conclusion else math.nan,
                bool(hyp.ok and (not report.conclusion or con.ok)),
            )
        )
    header = [
        "index",
        "t",
        "hyp_min_slack",
        "hyp_tol",
        "con_min_slack",
        "con_max_slack",
        "con_tol",
        "ok",
    ]
    return header, rows, report.passed


def _parse_sweep(spec: str, critical: float) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise ParameterError(f"s_sweep: expected MIN:MAX[:COUNT], got {spec!r}")

    def value(token: str) -> float:
        token = token.strip()
        if token.endswith("*"):
            return float(token[:-1] or 1.0) * critical
        return float(token)

    lo, hi = value(parts[0]), value(parts[1])
    count = int(parts[2]) if len(parts) == 3 else 21
    if not (0.0 < lo < hi) or count < 2:
        raise ParameterError(f"s_sweep: need 0 < min < max and count >= 2, got {spec!r}")
    return np.linspace(lo, hi, count)


def _run_hyper(config: ExperimentConfig) -> tuple[list[str], list[tuple]]:
    pair = ExponentPair(config.p, config.q, config.c)
    ctx = config.context()
    preset = get_preset(config.preset, **config.preset_params)
    sweep = _parse_sweep(config.s_sweep, pair.critical_time)
    rows = [
        (float(s), float(hyper_ratio(preset.fn, pair, s, ctx)))
        for s in sweep
    ]
    return ["s", "ratio"], rows


def _run_boolean(config: ExperimentConfig) -> tuple[list[str], list[tuple]]:
    rho_c = bool_mod.critical_rho(config.p, config.q)
    eps = np.linspace(0.01, 0.99, config.eps_count)
    rows = []
    for factor in config.rho_factors:
        rho = min(1.0, factor * rho_c)
        for e in eps:
            f1 = bool_mod.walsh_analyze([1.0 + e, 1.0 - e])
            f = bool_mod.tensor_power(f1, config.n) if config.n > 1 else f1
            rep = bool_mod.boolean_hyper_check(f, config.p, config.q, rho)
            rows.append(
                (float(factor), float(rho), float(e), float(rep.ratio), rep.passed)
            )
    return ["rho_factor", "rho", "eps", "ratio", "ok"], rows


def _run_selftest(config: ExperimentConfig) -> tuple[list[str], list[tuple], bool]:
    results = run_selftest()
    rows = [(r.name, r.passed, r.value, r.detail) for r in results]
    return ["check", "passed", "value", "detail"], rows, all(r.passed for r in results)


def run(config: ExperimentConfig) -> int:
    """Execute a validated config; returns the process exit status."""
    errors = config.validate()
    if errors:
        for e in errors:
            print(f"error: {e}", file=sys.stderr)
        return 2
    try:
        ok = True
        if config.command == "qcurve":
            header, rows = _run_qcurve(config)
        elif config.command == "closure":
            header, rows, ok = _run_closure(config)
        elif config.command == "hyper":
            header, rows = _run_hyper(config)
        elif config.command == "boolean":
            header, rows = _run_boolean(config)
        else:
            header, rows, ok = _run_selftest(config)
            for name, passed, value, _ in rows:
                print(f"{'PASS' if passed else 'FAIL'} {name} ({value:.6e})")
    except LabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(config, _write_rows(config, header, rows))
    return 0 if ok else 1


def _parse_preset_params(pairs: list[str]) -> dict:
    params = {}
    for item in pairs:
        if "=" not in item:
            raise ParameterError(f"preset parameter must be key=value, got {item!r}")
        key, _, value = item.partition("=")
        params[key.strip()] = float(value)
    return params


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hclab",
        description="Semigroup smoothing, hypercontractivity, and Boolean noise experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, times=True):
        sp.add_argument("--p", type=float, default=2.0)
        sp.add_argument("--q", type=float, default=4.0)
        sp.add_argument("--c", type=float, default=1.0, help="curvature constant")
        sp.add_argument("--order", type=int, default=80, help="quadrature order")
        sp.add_argument("--inner-order", type=int, default=None)
        sp.add_argument("--max-degree", type=int, default=None)
        sp.add_argument("--preset", default="bump", choices=PRESET_NAMES)
        sp.add_argument(
            "--preset-param",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a preset parameter (repeatable)",
        )
        if times:
            sp.add_argument("--t-min", type=float, default=1e-3)
            sp.add_argument("--t-max", type=float, default=12.0)
            sp.add_argument("--t-count", type=int, default=60)
            sp.add_argument("--t-spacing", default="log", choices=("log", "linear"))
        sp.add_argument("--output", default=None, help="write rows to this path")
        sp.add_argument("--format", dest="fmt", default="csv", choices=("csv", "json"))

    common(sub.add_parser("qcurve", help="monotone quantity along a heat flow"))
    sp = sub.add_parser("closure", help="supersolution transport check")
    common(sp)
    sp.add_argument("--ramp", type=float, default=0.0, help="ramp magnitude eps")
    sp = sub.add_parser("hyper", help="norm-ratio sweep around the critical time")
    common(sp, times=False)
    sp.add_argument(
        "--s-sweep",
        default="0.8*:1.2*:21",
        help="MIN:MAX[:COUNT]; values suffixed * are multiples of the critical time",
    )
    sp = sub.add_parser("boolean", help="hypercube noise-contraction sweeps")
    common(sp, times=False)
    sp.add_argument("--n", type=int, default=1, help="tensor-power dimension")
    sp.add_argument("--eps-count", type=int, default=99)
    sp.add_argument(
        "--rho-factors",
        default="0.98,1,1.02",
        help="comma-separated multiples of the critical noise rate",
    )
    sp = sub.add_parser("selftest", help="run the invariant battery")
    sp.add_argument("--output", default=None)
    sp.add_argument("--format", dest="fmt", default="csv", choices=("csv", "json"))
    return parser


def config_from_args(argv: list[str] | None = None) -> ExperimentConfig:
    args = build_parser().parse_args(argv)
    kwargs = {"command": args.command, "output": args.output, "fmt": args.fmt}
    if args.command != "selftest":
        kwargs.update(
            p=args.p,
            q=args.q,
            c=args.c,
            order=args.order,
            inner_order=args.inner_order,
            max_degree=args.max_degree,
            preset=args.preset,
            preset_params=_parse_preset_params(args.preset_param),
        )
    if args.command in ("qcurve", "closure"):
        kwargs.update(
            t_min=args.t_min,
            t_max=args.t_max,
            t_count=args.t_count,
            t_spacing=args.t_spacing,
        )
    if args.command == "closure":
        kwargs["ramp"] = args.ramp
    if args.command == "hyper":
        kwargs["s_sweep"] = args.s_sweep
    if args.command == "boolean":
        kwargs.update(
            n=args.n,
            eps_count=args.eps_count,
            rho_factors=tuple(float(v) for v in args.rho_factors.split(",")),
        )
    return ExperimentConfig(**kwargs)


def main(argv: list[str] | None = None) -> int:
    try:
        config = config_from_args(argv)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
