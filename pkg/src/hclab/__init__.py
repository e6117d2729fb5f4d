"""Numerical laboratory for Gaussian-measure semigroup smoothing.

Gauss-Hermite quadrature and Hermite spectral transforms underpin an
implementation of the Ornstein-Uhlenbeck semigroup, its carre du champ
calculus, the supersolution-transport transform behind hypercontractivity,
the monotone quantities it generates, and the discrete analogue on the
Boolean hypercube.
"""

from .boolean import (
    BooleanHyperReport,
    WalshFn,
    boolean_hyper_check,
    critical_rho,
    cube_points,
    noise_operator,
    tensor_power,
    walsh_analyze,
    walsh_synthesize,
)
from .errors import (
    ConsistencyError,
    DomainError,
    EvaluationError,
    LabError,
    ParameterError,
)
from .flow import (
    ClosureReport,
    EndpointReport,
    ExponentPair,
    FlowState,
    QCurve,
    Regime,
    ResidualRecord,
    classify,
    closure_check,
    critical_time,
    endpoint_check,
    heat_flow,
    hyper_ratio,
    hyper_transform,
    q_curve,
    ramped_flow,
    supersolution_residual,
)
from .hermite import (
    MAX_ORDER,
    POINTWISE_WINDOW,
    QuadratureRule,
    SpectralFn,
    analyze,
    constant,
    differentiate,
    gauss_hermite_rule,
    integrate_gamma,
    lp_norm_gamma,
    multiply,
    synthesize,
)
from .presets import PRESET_NAMES, Preset, get_preset, positive_battery
from .selftest import CheckResult, run_selftest
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

__all__ = [
    "BooleanHyperReport",
    "CheckResult",
    "ClosureReport",
    "ConsistencyError",
    "DomainError",
    "EndpointReport",
    "EvaluationError",
    "ExponentPair",
    "FlowState",
    "LabError",
    "MAX_ORDER",
    "OuContext",
    "POINTWISE_WINDOW",
    "ParameterError",
    "Preset",
    "PRESET_NAMES",
    "QCurve",
    "QuadratureRule",
    "Regime",
    "ResidualRecord",
    "SpectralFn",
    "WalshFn",
    "analyze",
    "boolean_hyper_check",
    "carre_du_champ",
    "classify",
    "closure_check",
    "constant",
    "critical_rho",
    "critical_time",
    "cube_points",
    "differentiate",
    "endpoint_check",
    "gamma2",
    "gauss_hermite_rule",
    "generator",
    "get_preset",
    "gradient_bound_residual",
    "heat_flow",
    "hyper_ratio",
    "hyper_transform",
    "integrate_gamma",
    "lp_norm_gamma",
    "mehler_density",
    "multiply",
    "noise_operator",
    "positive_battery",
    "q_curve",
    "ramped_flow",
    "run_selftest",
    "semigroup_quadrature",
    "semigroup_spectral",
    "supersolution_residual",
    "synthesize",
    "tensor_power",
    "walsh_analyze",
    "walsh_synthesize",
]

__version__ = "0.1.0"
