"""Gauss-Hermite quadrature and the orthonormal Hermite spectral transform.

Everything in this package integrates against the standard Gaussian
probability measure

    dgamma(x) = exp(-x**2 / 2) dx / sqrt(2 pi)

and expands functions in the probabilists' Hermite polynomials normalised
to be orthonormal in L2(gamma):

    h_0(x) = 1,   h_1(x) = x,
    sqrt(k + 1) h_{k+1}(x) = x h_k(x) - sqrt(k) h_{k-1}(x),

so <h_j, h_k> = delta_jk, h_2(x) = (x**2 - 1)/sqrt(2), and a rule of order
n integrates polynomials of degree <= 2n - 1 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DomainError, ParameterError

MAX_ORDER = 512

# Pointwise inequality checks elsewhere in the package are restricted to
# |x| <= POINTWISE_WINDOW: at outer Gauss-Hermite nodes |h_k(x)| grows like
# exp(x**2/4), which amplifies rounding in high-degree synthesis.  Weighted
# integrals are immune (the Gaussian weight beats the growth) and use all
# nodes.
POINTWISE_WINDOW = 4.0


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights integrating exactly against gamma.

    ``order`` nodes integrate every polynomial of degree <= 2*order - 1;
    the weights are strictly positive and sum to one.
    """

    order: int
    nodes: np.ndarray
    weights: np.ndarray


def _scaled_hermite_pair(x: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """(htil_{order-1}, htil_order) at x, htil_k = h_k * exp(-x**2/4).

    The scaled functions are bounded by about 1.1, so the recurrence
    neither overflows nor underflows anywhere a node can live.
    """
    hkm = np.zeros_like(x)
    hk = np.exp(-0.25 * x * x)
    for k in range(order):
        hkp = (x * hk - math.sqrt(k) * hkm) / math.sqrt(k + 1)
        hkm, hk = hk, hkp
    return hkm, hk


def _christoffel_weights(x: np.ndarray, order: int) -> np.ndarray:
    """Gauss weights w_j = 1 / sum_{k<order} h_k(x_j)**2, in scaled form.

    Evaluated as exp(-x**2/2) / sum htil_k**2; at extreme nodes of very
    high orders the true weight is below the smallest subnormal and
    underflows to exact zero.
    """
    hkm = np.zeros_like(x)
    hk = np.exp(-0.25 * x * x)
    total = hk * hk
    for k in range(order - 1):
        hkp = (x * hk - math.sqrt(k) * hkm) / math.sqrt(k + 1)
        total += hkp * hkp
        hkm, hk = hk, hkp
    return np.exp(-0.5 * x * x) / total


@lru_cache(maxsize=None)
def gauss_hermite_rule(order: int) -> QuadratureRule:
    """Build the Gauss-Hermite rule of the given order for gamma.

    Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix
    (off-diagonal sqrt(k)), polished by two Newton steps on the scaled
    three-term recurrence; weights come from the Christoffel function.

    Parameters
    ----------
    order : int
        Number of nodes, 1 <= order <= 512.

    Returns
    -------
    QuadratureRule
        Strictly increasing nodes symmetric about 0, weights summing
        to 1.
    """
    if not isinstance(order, (int, np.integer)) or isinstance(order, bool):
        raise ParameterError(f"order must be an integer, got {order!r}")
    if not 1 <= order <= MAX_ORDER:
        raise ParameterError(f"order must be in [1, {MAX_ORDER}], got {order}")
    if order == 1:
        nodes = np.array([0.0])
        weights = np.array([1.0])
    else:
        jacobi = np.diag(np.sqrt(np.arange(1.0, order)), 1)
        nodes = np.linalg.eigvalsh(jacobi + jacobi.T)
        # Newton on h_order: the exp(-x**2/4) scaling cancels in the step
        # h_order / h_order' = htil_order / (sqrt(order) htil_{order-1}).
        for _ in range(2):
            below, at = _scaled_hermite_pair(nodes, order)
            nodes = nodes - at / (math.sqrt(order) * below)
        nodes = 0.5 * (nodes - nodes[::-1])
        weights = _christoffel_weights(nodes, order)
        weights = 0.5 * (weights + weights[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(order=order, nodes=nodes, weights=weights)


def hermite_matrix(points: np.ndarray, degree: int) -> np.ndarray:
    """Evaluate h_0 .. h_degree at the given points.

    Returns an array of shape (degree + 1, npoints) filled by the
    three-term recurrence.
    """
    if degree < 0:
        raise ParameterError(f"degree must be >= 0, got {degree}")
    pts = np.asarray(points, dtype=float).ravel()
    H = np.empty((degree + 1, pts.size))
    H[0] = 1.0
    if degree >= 1:
        H[1] = pts
    for k in range(1, degree):
        H[k + 1] = (pts * H[k] - math.sqrt(k) * H[k - 1]) / math.sqrt(k + 1)
    return H


@dataclass(frozen=True, eq=False)
class SpectralFn:
    """A function on R represented by orthonormal Hermite coefficients.

    ``coeffs[k]`` is the L2(gamma) inner product with h_k.  Values are
    immutable; arithmetic returns new instances.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if c.ndim != 1 or c.size == 0:
            raise ParameterError("coeffs must be a nonempty 1-d array")
        if not np.all(np.isfinite(c)):
            raise ParameterError("coeffs must be finite")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        """Largest index with a nonzero coefficient (0 for the zero fn)."""
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if nz.size else 0

    @property
    def size(self) -> int:
        return int(self.coeffs.size)

    def __call__(self, points):
        return synthesize(self, points)

    def __add__(self, other: "SpectralFn") -> "SpectralFn":
        n = max(self.size, other.size)
        c = np.zeros(n)
        c[: self.size] += self.coeffs
        c[: other.size] += other.coeffs
        return SpectralFn(c)

    def __sub__(self, other: "SpectralFn") -> "SpectralFn":
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "SpectralFn":
        return SpectralFn(self.coeffs * float(scalar))

    __rmul__ = __mul__


def constant(value: float) -> SpectralFn:
    return SpectralFn(np.array([float(value)]))


def analyze(values, rule: QuadratureRule, degree: int) -> SpectralFn:
    """Project node samples onto h_0 .. h_degree by quadrature.

    coeffs[k] = sum_j weights[j] * values[j] * h_k(nodes[j]).  Exact for
    polynomial input whenever deg(input) + degree <= 2*order - 1.

    Raises
    ------
    ParameterError
        If degree >= rule.order (the projection would alias).
    """
    if degree >= rule.order:
        raise ParameterError(
            f"analysis degree {degree} requires rule order > {degree} "
            f"(got {rule.order}); higher degrees alias"
        )
    v = np.asarray(values, dtype=float)
    if v.shape != rule.nodes.shape:
        raise ParameterError(
            f"expected {rule.order} node values, got shape {v.shape}"
        )
    H = hermite_matrix(rule.nodes, degree)
    return SpectralFn(H @ (rule.weights * v))


def synthesize(f: SpectralFn, points):
    """Evaluate sum_k coeffs[k] h_k at the given points.

    Accepts scalars or arrays of any shape; the output matches the input
    shape (a Python float for scalar input).
    """
    pts = np.asarray(points, dtype=float)
    scalar = pts.ndim == 0
    H = hermite_matrix(pts, f.size - 1)
    out = f.coeffs @ H
    if scalar:
        return float(out[0])
    return out.reshape(pts.shape)


def differentiate(f: SpectralFn) -> SpectralFn:
    """Spectral derivative: (f')_{k-1} = sqrt(k) * f_k."""
    if f.size == 1:
        return constant(0.0)
    k = np.arange(1, f.size)
    return SpectralFn(np.sqrt(k) * f.coeffs[1:])


def multiply(f: SpectralFn, g: SpectralFn, rule: QuadratureRule) -> SpectralFn:
    """Exact spectral product of two polynomials.

    Requires rule.order > deg f + deg g so the product is representable
    and its projection is quadrature-exact.
    """
    d = (f.size - 1) + (g.size - 1)
    if d >= rule.order:
        raise ParameterError(
            f"product degree {d} exceeds rule capacity (order {rule.order}); "
            f"need order >= {d + 1}"
        )
    vals = synthesize(f, rule.nodes) * synthesize(g, rule.nodes)
    return analyze(vals, rule, d)


def integrate_gamma(values, rule: QuadratureRule) -> float:
    """Quadrature of node samples against gamma."""
    v = np.asarray(values, dtype=float)
    return float(rule.weights @ v)


def lp_norm_gamma(values, rule: QuadratureRule, p: float) -> float:
    """The L^p(gamma) norm of positive node samples.

    Computes (sum_j w_j v_j**p)**(1/p) for p != 0 and the geometric mean
    exp(sum_j w_j log v_j) for p = 0.  Negative and fractional exponents
    require strictly positive samples.

    Raises
    ------
    DomainError
        If a sample is nonpositive where p < 1 requires positivity (the
        message names the offending node), or negative for p >= 1.
    """
    v = np.asarray(values, dtype=float)
    if v.shape != rule.nodes.shape:
        raise ParameterError(
            f"expected {rule.order} node values, got shape {v.shape}"
        )
    p = float(p)
    if p < 1.0:
        bad = np.nonzero(v <= 0.0)[0]
        if bad.size:
            j = int(bad[0])
            raise DomainError(
                f"norm with p={p} requires strictly positive values; "
                f"got {v[j]} at node {j} (x={rule.nodes[j]})"
            )
    else:
        bad = np.nonzero(v < 0.0)[0]
        if bad.size:
            j = int(bad[0])
            raise DomainError(
                f"norm with p={p} requires nonnegative values; "
                f"got {v[j]} at node {j} (x={rule.nodes[j]})"
            )
    if p == 0.0:
        return float(np.exp(rule.weights @ np.log(v)))
    mean = float(rule.weights @ v**p)
    return mean ** (1.0 / p)


def real_roots(f: SpectralFn, tol: float = 1e-8) -> np.ndarray:
    """Real roots of a polynomial given by Hermite coefficients.

    Converts to the monic probabilists' basis He_k = sqrt(k!) h_k and uses
    the companion-matrix eigenvalues.  Intended for locating integrand
    kinks; near-real roots are included.
    """
    n = f.size - 1
    if n > 150:
        raise ParameterError(
            f"root finding limited to degree <= 150, got {n} "
            "(sqrt(k!) scaling overflows beyond that)"
        )
    scale = np.sqrt(
        np.array([math.factorial(k) for k in range(n + 1)], dtype=float)
    )
    ce = f.coeffs / scale
    if not np.any(ce[1:]):
        return np.array([])
    roots = np.polynomial.hermite_e.hermeroots(ce)
    real = roots[np.abs(roots.imag) < tol].real
    return np.sort(real)
