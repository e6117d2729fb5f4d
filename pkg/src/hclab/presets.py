"""The fixed catalogue of test functions used by the CLI and the
acceptance battery.

Each preset provides both an exact vectorised callable and, where a
closed form exists, exact orthonormal-Hermite coefficients.  The
catalogue is versioned with the package so reported numbers stay stable:

    const       c
    affine      a + b x           (positive only on a bounded window;
                                   use with integer exponents)
    quadratic   a + b x**2        (strictly positive for a, b > 0)
    bump        floor + (1 - floor) exp(-rate x**2)
                                  (the strictly positive, rapidly
                                   decaying stand-in for a clipped,
                                   compactly supported profile)
    exp         exp(a x)

The bump's additive floor is the smooth substitute for clipping at a
hard threshold; with rate = 1/4 its Hermite coefficients decay like
3^(-k/2), so a degree >= 48 fit is exact to double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ParameterError
from .hermite import SpectralFn


@dataclass(frozen=True)
class Preset:
    """A named test function with optional exact spectral coefficients."""

    name: str
    params: dict
    fn: Callable[[np.ndarray], np.ndarray]
    coefficients: Callable[[int], np.ndarray] | None = None
    polynomial_degree: int | None = None

    def spectral(self, degree: int) -> SpectralFn:
        """Exact Hermite coefficients up to the given degree."""
        if self.coefficients is None:
            raise ParameterError(f"preset {self.name!r} has no closed-form spectrum")
        return SpectralFn(self.coefficients(degree))

    def __call__(self, z):
        return self.fn(z)


def _const(value: float = 1.0) -> Preset:
    def coeffs(degree):
        c = np.zeros(degree + 1)
        c[0] = value
        return c

    return Preset(
        name="const",
        params={"value": value},
        fn=lambda z: np.full_like(np.asarray(z, dtype=float), value),
        coefficients=coeffs,
        polynomial_degree=0,
    )


def _affine(a: float = 2.0, b: float = 1.0) -> Preset:
    def coeffs(degree):
        c = np.zeros(max(degree, 1) + 1)
        c[0], c[1] = a, b
        return c[: degree + 1] if degree >= 1 else np.array([a])

    return Preset(
        name="affine",
        params={"a": a, "b": b},
        fn=lambda z: a + b * np.asarray(z, dtype=float),
        coefficients=coeffs,
        polynomial_degree=1,
    )


def _quadratic(a: float = 1.0, b: float = 0.25) -> Preset:
    # a + b x**2 = (a + b) h_0 + b sqrt(2) h_2
    def coeffs(degree):
        if degree < 2:
            raise ParameterError("quadratic preset needs degree >= 2")
        c = np.zeros(degree + 1)
        c[0] = a + b
        c[2] = b * math.sqrt(2.0)
        return c

    return Preset(
        name="quadratic",
        params={"a": a, "b": b},
        fn=lambda z: a + b * np.asarray(z, dtype=float) ** 2,
        coefficients=coeffs,
        polynomial_degree=2,
    )


def _bump(floor: float = 1e-6, rate: float = 0.25, amplitude: float | None = None) -> Preset:
    amp = (1.0 - floor) if amplitude is None else amplitude

    def fn(z):
        z = np.asarray(z, dtype=float)
        return floor + amp * np.exp(-rate * z**2)

    # Gaussian generating function: the coefficient of h_{2m} in
    # exp(-rate x**2) is (2r+1)^{-1/2} (-r/(2r+1))^m sqrt((2m)!)/m!.
    def coeffs(degree):
        c = np.zeros(degree + 1)
        c[0] = floor
        base = 1.0 / math.sqrt(2.0 * rate + 1.0)
        ratio = -rate / (2.0 * rate + 1.0)
        for m in range(degree // 2 + 1):
            val = (
                base
                * ratio**m
                * math.sqrt(math.factorial(2 * m))
                / math.factorial(m)
            )
            c[2 * m] += amp * val
        return c

    return Preset(
        name="bump",
        params={"floor": floor, "rate": rate, "amplitude": amp},
        fn=fn,
        coefficients=coeffs,
        polynomial_degree=None,
    )


def _exp(a: float = 0.8) -> Preset:
    def coeffs(degree):
        k = np.arange(degree + 1)
        fac = np.array([math.factorial(int(j)) for j in k], dtype=float)
        return math.exp(a * a / 2.0) * a**k / np.sqrt(fac)

    return Preset(
        name="exp",
        params={"a": a},
        fn=lambda z: np.exp(a * np.asarray(z, dtype=float)),
        coefficients=coeffs,
        polynomial_degree=None,
    )


_BUILDERS: dict[str, Callable[..., Preset]] = {
    "const": _const,
    "affine": _affine,
    "quadratic": _quadratic,
    "bump": _bump,
    "exp": _exp,
}

PRESET_NAMES = tuple(sorted(_BUILDERS))


def get_preset(name: str, **params) -> Preset:
    """Build a preset by name with parameter overrides."""
    if name not in _BUILDERS:
        raise ParameterError(
            f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}"
        )
    try:
        return _BUILDERS[name](**params)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for preset {name!r}: {exc}") from exc


def positive_battery() -> list[Preset]:
    """Strictly positive presets for flows and reverse-regime norms.

    const, the unit bowl 1 + x**2/4, the floored bump, and the shifted
    normalised square 2 + x**2/sqrt(3).
    """
    return [
        _const(1.0),
        _quadratic(1.0, 0.25),
        _bump(),
        _quadratic(2.0, 1.0 / math.sqrt(3.0)),
    ]
