"""The full invariant battery, runnable without a test harness.

Each check exercises one documented invariant of the library at its
stated tolerance and returns a record with the measured extremal value.
Randomness is seeded, so two runs produce identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad as _quad

from . import boolean
from .errors import LabError
from .flow import (
    ExponentPair,
    closure_check,
    endpoint_check,
    heat_flow,
    hyper_ratio,
    q_curve,
    ramped_flow,
)
from .hermite import (
    SpectralFn,
    analyze,
    differentiate,
    gauss_hermite_rule,
    integrate_gamma,
    lp_norm_gamma,
    synthesize,
)
from .presets import get_preset, positive_battery
from .semigroup import (
    OuContext,
    carre_du_champ,
    gamma2,
    generator,
    gradient_bound_residual,
    mehler_density,
    semigroup_quadrature,
    semigroup_spectral,
)

_SEED = 20240817


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    detail: str


def _result(name: str, passed: bool, value: float, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), value=float(value), detail=detail)


def _random_fn(rng, degree: int) -> SpectralFn:
    return SpectralFn(rng.uniform(-1.0, 1.0, size=degree + 1))


# ---------------------------------------------------------------------------
# quadrature and spectral transform


def check_rule_invariants() -> CheckResult:
    worst = 0.0
    for order in (1, 2, 3, 8, 16, 64, 128, 512):
        rule = gauss_hermite_rule(order)
        worst = max(worst, abs(rule.weights.sum() - 1.0))
        # True extreme-tail weights of very high orders (~1e-430 at order
        # 512) sit below the smallest subnormal and underflow to exact 0.
        floor_ok = (
            np.all(rule.weights > 0.0) if order <= 256 else np.all(rule.weights >= 0.0)
        )
        if not floor_ok:
            return _result("rule-invariants", False, 0.0, f"negative weight at order {order}")
        if order > 1 and np.any(np.diff(rule.nodes) <= 0.0):
            return _result("rule-invariants", False, 0.0, f"nodes not increasing at order {order}")
        if np.max(np.abs(rule.nodes + rule.nodes[::-1])) != 0.0:
            return _result("rule-invariants", False, 0.0, f"nodes not symmetric at order {order}")
        # moments against the double-factorial recurrence, capped where
        # node**k itself would overflow
        x_max = float(np.max(np.abs(rule.nodes))) if order > 1 else 1.0
        k_max = min(2 * order - 1, int(700.0 / math.log(max(x_max, 2.0))))
        moment = 1.0
        for k in range(0, k_max + 1, 2):
            if k > 0:
                moment *= k - 1
            got = float(rule.weights @ rule.nodes**k)
            worst = max(worst, abs(got - moment) / moment)
            if k + 1 <= k_max:
                odd = float(rule.weights @ rule.nodes ** (k + 1))
                worst = max(worst, abs(odd) / max(1.0, moment * math.sqrt(k + 1)))
    return _result("rule-invariants", worst <= 1e-12, worst, "max moment error")


def check_spectral_roundtrip() -> CheckResult:
    rng = np.random.default_rng(_SEED)
    rule = gauss_hermite_rule(64)
    worst = 0.0
    for _ in range(100):
        degree = int(rng.integers(0, 41))
        f = _random_fn(rng, degree)
        vals = synthesize(f, rule.nodes)
        back = analyze(vals, rule, degree)
        worst = max(worst, float(np.max(np.abs(back.coeffs - f.coeffs))))
        parseval = float(np.sum(f.coeffs**2))
        by_quad = integrate_gamma(vals**2, rule)
        worst = max(worst, abs(parseval - by_quad) / max(1.0, parseval) * 1e-2)
        # scaled so the 1e-10 Parseval tolerance maps onto the 1e-12 gate
    return _result("spectral-roundtrip", worst <= 1e-12, worst, "max roundtrip error")


def check_analysis_exactness() -> CheckResult:
    rng = np.random.default_rng(_SEED + 1)
    worst = 0.0
    for order in (8, 32):
        rule = gauss_hermite_rule(order)
        for _ in range(25):
            k = int(rng.integers(0, order))
            deg = 2 * order - 1 - k
            f = _random_fn(rng, min(deg, order - 1))
            hk = SpectralFn(np.eye(k + 1)[k])
            got = integrate_gamma(synthesize(f, rule.nodes) * synthesize(hk, rule.nodes), rule)
            want = f.coeffs[k] if k < f.size else 0.0
            worst = max(worst, abs(got - want))
    return _result("analysis-exactness", worst <= 1e-11, worst, "max <f, h_k> error")


def check_differentiate_fd() -> CheckResult:
    rng = np.random.default_rng(_SEED + 2)
    rule = gauss_hermite_rule(64)
    pts = rule.nodes[np.abs(rule.nodes) <= 4.0]
    h = 1e-5
    worst = 0.0
    for _ in range(20):
        f = _random_fn(rng, int(rng.integers(1, 21)))
        exact = synthesize(differentiate(f), pts)
        fd = (synthesize(f, pts + h) - synthesize(f, pts - h)) / (2 * h)
        worst = max(worst, float(np.max(np.abs(exact - fd))))
    return _result("differentiate-fd", worst <= 1e-7, worst, "max |spectral - central difference|")


def check_lp_monotone() -> CheckResult:
    rule = gauss_hermite_rule(64)
    f = 2.0 + rule.nodes**2 / math.sqrt(3.0)
    grid = [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 4.0]
    norms = [lp_norm_gamma(f, rule, p) for p in grid]
    worst = min(b - a for a, b in zip(norms, norms[1:]))
    return _result("lp-monotone", worst >= -1e-12, worst, "min norm increment over p grid")


# ---------------------------------------------------------------------------
# semigroup operators


def check_semigroup_law() -> CheckResult:
    rng = np.random.default_rng(_SEED + 3)
    worst = 0.0
    for _ in range(20):
        f = _random_fn(rng, int(rng.integers(0, 21)))
        s, t = rng.uniform(0.05, 1.5, size=2)
        once = semigroup_spectral(f, s + t)
        twice = semigroup_spectral(semigroup_spectral(f, s), t)
        worst = max(worst, float(np.max(np.abs(once.coeffs - twice.coeffs))))
    return _result("semigroup-law", worst <= 1e-11, worst, "max coefficient error")


def check_two_representations() -> CheckResult:
    rng = np.random.default_rng(_SEED + 4)
    ctx = OuContext.build(64, inner_order=128)
    win = ctx.window
    worst = 0.0
    for _ in range(10):
        f = _random_fn(rng, 20)
        s = float(rng.uniform(0.05, 2.0))
        spec = synthesize(semigroup_spectral(f, s), ctx.rule.nodes)
        quad = semigroup_quadrature(lambda z: synthesize(f, z), s, ctx.rule.nodes, ctx)
        worst = max(worst, float(np.max(np.abs(spec - quad)[win])))
    for a in (-1.0, -0.5, 0.3, 1.0):
        preset = get_preset("exp", a=a)
        fs = preset.spectral(48)
        for s in (0.1, 0.549306, 2.0):
            spec = synthesize(semigroup_spectral(fs, s), ctx.rule.nodes)
            quad = semigroup_quadrature(preset.fn, s, ctx.rule.nodes, ctx)
            worst = max(worst, float(np.max(np.abs(spec - quad)[win])))
    return _result("two-representations", worst <= 1e-8, worst, "max |spectral - quadrature| on window")


def check_eigenrelation() -> CheckResult:
    rule = gauss_hermite_rule(64)
    pts = rule.nodes[np.abs(rule.nodes) <= 4.0]
    h = 1e-4
    worst = 0.0
    for k in range(11):
        hk = SpectralFn(np.eye(k + 1)[k])
        lk = synthesize(generator(hk), pts)
        worst = max(worst, float(np.max(np.abs(lk + k * synthesize(hk, pts)))))
        # second path: f'' - x f' by central differences
        fpp = (synthesize(hk, pts + h) - 2 * synthesize(hk, pts) + synthesize(hk, pts - h)) / h**2
        fp = (synthesize(hk, pts + h) - synthesize(hk, pts - h)) / (2 * h)
        worst_fd = float(np.max(np.abs(fpp - pts * fp - lk)))
        if worst_fd > 1e-4:
            return _result("eigenrelation", False, worst_fd, f"finite differences disagree at k={k}")
    return _result("eigenrelation", worst <= 1e-12, worst, "max |L h_k + k h_k| on window")


def check_generator_invariance() -> CheckResult:
    rng = np.random.default_rng(_SEED + 5)
    rule = gauss_hermite_rule(64)
    worst = 0.0
    for _ in range(20):
        f = _random_fn(rng, int(rng.integers(0, 31)))
        worst = max(worst, abs(integrate_gamma(synthesize(generator(f), rule.nodes), rule)))
    return _result("generator-invariance", worst <= 1e-11, worst, "max |integral of Lf|")


def check_integration_by_parts() -> CheckResult:
    rng = np.random.default_rng(_SEED + 6)
    ctx = OuContext.build(64, inner_order=64)
    rule = ctx.rule
    worst = 0.0
    for _ in range(20):
        f = _random_fn(rng, int(rng.integers(0, 21)))
        g = _random_fn(rng, int(rng.integers(0, 21)))
        lhs = integrate_gamma(synthesize(f, rule.nodes) * synthesize(generator(g), rule.nodes), rule)
        rhs = -integrate_gamma(carre_du_champ(f, g, ctx), rule)
        worst = max(worst, abs(lhs - rhs))
    return _result("integration-by-parts", worst <= 1e-10, worst, "max |<f, Lg> + <Gamma(f,g), 1>|")


def check_diffusion_chain_rule() -> CheckResult:
    ctx = OuContext.build(320, max_degree=159)
    rule = ctx.rule
    win = ctx.window
    f = get_preset("quadratic", a=2.0, b=1.0 / math.sqrt(3.0)).spectral(2)
    f_vals = synthesize(f, rule.nodes)
    lf_vals = synthesize(generator(f), rule.nodes)
    gamma_vals = carre_du_champ(f, f, ctx)
    worst = 0.0
    for lam in (0.5, 1.0 / 3.0, 2.0, 3.0):
        u_vals = f_vals**lam
        lu = synthesize(generator(analyze(u_vals, rule, ctx.max_degree)), rule.nodes)
        rhs = lam * f_vals ** (lam - 1) * lf_vals + lam * (lam - 1) * f_vals ** (lam - 2) * gamma_vals
        worst = max(worst, float(np.max(np.abs(lu - rhs)[win])))
    return _result("diffusion-chain-rule", worst <= 1e-8, worst, "max |L(f^lam) - chain rule| on window")


def check_gamma_power_identity() -> CheckResult:
    ctx = OuContext.build(320, max_degree=159)
    rule = ctx.rule
    win = ctx.window
    u = get_preset("quadratic", a=2.0, b=1.0 / math.sqrt(3.0)).spectral(2)
    u_vals = synthesize(u, rule.nodes)
    gamma_u = carre_du_champ(u, u, ctx)
    worst = 0.0
    for p in (2.0, 3.0, 4.0, -2.0):
        root_vals = u_vals ** (1.0 / p)
        root_fn = analyze(root_vals, rule, ctx.max_degree)
        lhs = synthesize(differentiate(root_fn), rule.nodes) ** 2
        rhs = u_vals ** (2.0 / p - 2.0) * gamma_u / p**2
        worst = max(worst, float(np.max(np.abs(lhs - rhs)[win])))
    return _result("gamma-power-identity", worst <= 1e-8, worst, "max identity error on window")


def check_curvature() -> CheckResult:
    rng = np.random.default_rng(_SEED + 7)
    ctx = OuContext.build(64, inner_order=64)
    win = ctx.window
    worst = math.inf
    for _ in range(100):
        f = _random_fn(rng, int(rng.integers(1, 13)))
        slack = gamma2(f, ctx) - carre_du_champ(f, f, ctx)
        worst = min(worst, float(np.min(slack[win])))
    return _result("curvature", worst >= -1e-9, worst, "min Gamma2 - Gamma on window")


def check_gradient_bound() -> CheckResult:
    ctx = OuContext.build(64, inner_order=96)
    win = ctx.window
    fns = [p.spectral(48) for p in positive_battery()]
    fns.append(SpectralFn([0.0, 1.0]))
    fns.append(SpectralFn([1.0, 1.0, math.sqrt(2.0)]))
    worst = math.inf
    for f in fns:
        for s in (0.2, 0.5, 1.0):
            res = gradient_bound_residual(f, s, 1.0, ctx)
            worst = min(worst, float(np.min(res[win])))
    return _result("gradient-bound", worst >= -1e-9, worst, "min residual on window")


def check_mehler() -> CheckResult:
    s, x = 0.3, 1.5
    total, _ = _quad(lambda y: mehler_density(s, x, y), -12.0, 12.0, limit=200)
    err = abs(total - 1.0)
    # kernel representation vs diagonal action for x**2
    f = SpectralFn([1.0, 0.0, math.sqrt(2.0)])
    spec = synthesize(semigroup_spectral(f, 0.7), 0.9)
    kern, _ = _quad(lambda y: y * y * mehler_density(0.7, 0.9, y), -14.0, 14.0, limit=200)
    err = max(err, abs(kern - spec))
    return _result("mehler-kernel", err <= 1e-10, err, "normalization and representation error")


# ---------------------------------------------------------------------------
# flows and monotone quantities

_FLOW_CTX = OuContext.build(80, inner_order=96)
_CLOSURE_CTX = OuContext.build(160, inner_order=192, max_degree=79)


def _flow_times() -> np.ndarray:
    return np.geomspace(1e-3, 12.0, 60)


def check_qcurve_forward() -> CheckResult:
    worst = math.inf
    times = _flow_times()
    for p, q in ((2.0, 4.0), (1.5, 3.0), (3.0, 6.0)):
        pair = ExponentPair(p, q)
        for preset in positive_battery():
            curve = q_curve(preset.fn, pair, times, _FLOW_CTX)
            slack = curve.directed_increments() + 1e-8 * np.maximum(
                1.0, np.abs(curve.q_values[:-1])
            )
            worst = min(worst, float(np.min(slack)))
    return _result("qcurve-forward", worst >= 0.0, worst, "min monotonicity slack")


def check_qcurve_reverse() -> CheckResult:
    worst = math.inf
    times = _flow_times()
    battery = [get_preset("quadratic"), get_preset("exp", a=0.4), get_preset("bump")]
    for p, q in ((-1.0, -2.0), (0.5, 0.25), (0.5, -1.0)):
        pair = ExponentPair(p, q)
        for preset in battery:
            curve = q_curve(preset.fn, pair, times, _FLOW_CTX)
            slack = curve.directed_increments() + 1e-8 * np.maximum(
                1.0, np.abs(curve.q_values[:-1])
            )
            worst = min(worst, float(np.min(slack)))
    return _result("qcurve-reverse", worst >= 0.0, worst, "min monotonicity slack (derived directions)")


def check_q_normalization() -> CheckResult:
    times = np.geomspace(1e-2, 4.0, 12)
    pair = ExponentPair(2.0, 4.0)
    preset = get_preset("bump")
    integral = q_curve(preset.fn, pair, times, _FLOW_CTX, normalization="integral")
    power = q_curve(preset.fn, pair, times, _FLOW_CTX, normalization="power")
    err = float(np.max(np.abs(power.q_values - integral.q_values ** (1.0 / pair.q))))
    return _result("q-normalization", err <= 1e-12, err, "max |power form - integral form^(1/q)|")


def _closure_times() -> np.ndarray:
    return np.geomspace(1e-3, 3.0, 60)


def check_closure_forward() -> CheckResult:
    times = _closure_times()
    u0 = get_preset("quadratic").spectral(2)
    worst = math.inf
    for p, q in ((2.0, 4.0), (1.5, 3.0)):
        pair = ExponentPair(p, q)
        base = heat_flow(u0, times, _CLOSURE_CTX.rule)
        for eps in (0.0, 0.05, 0.2):
            flow = ramped_flow(base, eps) if eps else base
            report = closure_check(flow, pair, _CLOSURE_CTX)
            if not report.passed:
                return _result(
                    "closure-forward", False, 0.0, "; ".join(report.failures[:2])
                )
            worst = min(worst, min(r.min_slack + r.tol for r in report.conclusion))
    return _result("closure-forward", True, worst, "min conclusion slack + tol")


def check_closure_reverse() -> CheckResult:
    times = _closure_times()
    u0 = get_preset("quadratic").spectral(2)
    base = heat_flow(u0, times, _CLOSURE_CTX.rule)
    cases = [
        (ExponentPair(-1.0, -2.0), +0.05),  # supersolution hypothesis
        (ExponentPair(0.5, 0.25), -0.05),  # subsolution hypothesis
        (ExponentPair(0.5, -1.0), -0.05),
    ]
    worst = math.inf
    for pair, eps in cases:
        flow = ramped_flow(base, eps)
        report = closure_check(flow, pair, _CLOSURE_CTX)
        if not report.passed:
            return _result(
                "closure-reverse",
                False,
                0.0,
                f"({pair.p},{pair.q}): " + "; ".join(report.failures[:2]),
            )
        worst = min(worst, min(r.min_slack + r.tol for r in report.conclusion))
    return _result("closure-reverse", True, worst, "min conclusion slack + tol")


def check_criticality() -> CheckResult:
    pair = ExponentPair(2.0, 4.0)
    preset = get_preset("exp", a=0.8)
    at_star = hyper_ratio(preset.fn, pair, pair.critical_time, _FLOW_CTX)
    below = hyper_ratio(preset.fn, pair, 0.9 * pair.critical_time, _FLOW_CTX)
    ok = abs(at_star - 1.0) <= 1e-8 and below >= 1.0 + 1e-3
    return _result(
        "criticality-sharpness",
        ok,
        at_star - 1.0,
        f"ratio(s*) - 1; ratio(0.9 s*) = {below:.6f}",
    )


def check_reverse_ratio() -> CheckResult:
    pair = ExponentPair(0.5, 0.25)
    worst = math.inf
    for preset in positive_battery():
        ratio = hyper_ratio(preset.fn, pair, pair.critical_time, _FLOW_CTX)
        worst = min(worst, ratio)
    return _result("reverse-ratio", worst >= 1.0 - 1e-9, worst, "min reverse ratio at s*")


def check_endpoints() -> CheckResult:
    worst = 0.0
    cases = [
        (ExponentPair(2.0, 4.0), get_preset("quadratic")),
        (ExponentPair(3.0, 6.0), get_preset("bump")),
    ]
    for pair, preset in cases:
        rep = endpoint_check(preset.fn, pair, _FLOW_CTX)
        worst = max(worst, rep.rel_early, rep.rel_late)
    return _result("endpoint-limits", worst <= 1e-3, worst, "max relative endpoint error")


# ---------------------------------------------------------------------------
# hypercube


def check_walsh_roundtrip() -> CheckResult:
    rng = np.random.default_rng(_SEED + 8)
    worst = 0.0
    for n in (1, 2, 5, 8):
        vals = rng.normal(size=1 << n)
        f = boolean.walsh_analyze(vals)
        back = boolean.walsh_synthesize(f)
        worst = max(worst, float(np.max(np.abs(back - vals))))
        parseval = abs(float(np.sum(f.coeffs**2)) - float(np.mean(vals**2)))
        worst = max(worst, parseval)
    return _result("walsh-roundtrip", worst <= 1e-12, worst, "max roundtrip/Parseval error")


def check_noise_semigroup() -> CheckResult:
    rng = np.random.default_rng(_SEED + 9)
    worst = 0.0
    for n in (1, 3, 6):
        f = boolean.walsh_analyze(rng.normal(size=1 << n))
        for rho, sig in ((0.5, 0.8), (-0.3, 0.9), (1.0, 0.25)):
            once = boolean.noise_operator(f, rho * sig)
            twice = boolean.noise_operator(boolean.noise_operator(f, rho), sig)
            worst = max(worst, float(np.max(np.abs(once.coeffs - twice.coeffs))))
    return _result("noise-semigroup", worst <= 1e-15, worst, "max coefficient error")


def check_boolean_forward() -> CheckResult:
    eps = np.linspace(0.01, 0.99, 99)
    for p, q in ((2.0, 4.0), (1.5, 3.0), (2.0, 10.0)):
        rho_c = boolean.critical_rho(p, q)
        for e in eps:
            f = boolean.walsh_analyze([1.0 + e, 1.0 - e])
            if boolean.boolean_hyper_check(f, p, q, rho_c).ratio > 1.0 + 1e-12:
                return _result(
                    "boolean-forward", False, e, f"ratio above 1 at rho_c, eps={e}"
                )
        above = min(1.0, 1.02 * rho_c)
        if not any(
            boolean.boolean_hyper_check(
                boolean.walsh_analyze([1.0 + e, 1.0 - e]), p, q, above
            ).ratio
            > 1.0 + 1e-12
            for e in eps
        ):
            return _result(
                "boolean-forward", False, 0.0, f"no failure above rho_c for ({p},{q})"
            )
    return _result("boolean-forward", True, 0.0, "sharp at rho_c for all pairs")


def check_boolean_reverse() -> CheckResult:
    rng = np.random.default_rng(_SEED + 10)
    rho_c = boolean.critical_rho(0.5, 0.25)
    worst = math.inf
    for n in (1, 2, 3):
        for _ in range(200):
            vals = rng.uniform(0.1, 3.0, size=1 << n)
            rep = boolean.boolean_hyper_check(boolean.walsh_analyze(vals), 0.5, 0.25, rho_c)
            worst = min(worst, rep.ratio)
    return _result("boolean-reverse", worst >= 1.0 - 1e-12, worst, "min reverse ratio at rho_c")


def check_tensorization() -> CheckResult:
    f1 = boolean.walsh_analyze([1.3, 0.7])
    rho_c = boolean.critical_rho(2.0, 4.0)
    r1 = boolean.boolean_hyper_check(f1, 2.0, 4.0, rho_c).ratio
    worst = 0.0
    for n in range(2, 7):
        fn = boolean.tensor_power(f1, n)
        rep = boolean.boolean_hyper_check(fn, 2.0, 4.0, rho_c)
        if not rep.passed:
            return _result("tensorization", False, rep.ratio, f"check failed at n={n}")
        worst = max(worst, abs(rep.ratio - r1**n))
    return _result("tensorization", worst <= 1e-12, worst, "max |ratio_n - ratio_1^n|")


ALL_CHECKS = (
    check_rule_invariants,
    check_spectral_roundtrip,
    check_analysis_exactness,
    check_differentiate_fd,
    check_lp_monotone,
    check_semigroup_law,
    check_two_representations,
    check_eigenrelation,
    check_generator_invariance,
    check_integration_by_parts,
    check_diffusion_chain_rule,
    check_gamma_power_identity,
    check_curvature,
    check_gradient_bound,
    check_mehler,
    check_qcurve_forward,
    check_qcurve_reverse,
    check_q_normalization,
    check_closure_forward,
    check_closure_reverse,
    check_criticality,
    check_reverse_ratio,
    check_endpoints,
    check_walsh_roundtrip,
    check_noise_semigroup,
    check_boolean_forward,
    check_boolean_reverse,
    check_tensorization,
)


def run_selftest() -> list[CheckResult]:
    """Run the whole battery; never raises, failures become records."""
    results = []
    for check in ALL_CHECKS:
        try:
            results.append(check())
        except LabError as exc:
            name = check.__name__.removeprefix("check_").replace("_", "-")
            results.append(_result(name, False, math.nan, f"{type(exc).__name__}: {exc}"))
    return results
