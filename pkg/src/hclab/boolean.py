"""Fourier-Walsh analysis and the noise operator on the hypercube.

Functions on {-1, 1}^n carry the uniform probability measure.  Points are
indexed by bitmask: bit j of index i gives coordinate x_{j+1} = +1 when
the bit is 0 and -1 when it is 1.  Subsets S of {1, .., n} are the same
bitmasks, and the characters are chi_S(i) = (-1)^{popcount(S & i)}.

The noise operator T_rho scales the coefficient of S by rho^{|S|};
equivalently it averages over independent coordinate flips that retain
each coordinate with probability (1 + rho)/2.  Dimension is capped at 12
(4096 points) so every check stays exhaustive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParameterError

MAX_DIM = 12


def _fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised fast Walsh-Hadamard transform (self-inverse up to 2^n)."""
    a = values.astype(float).copy()
    n = a.size
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :] + a[:, 1, :]
        bot = a[:, 0, :] - a[:, 1, :]
        a = np.stack((top, bot), axis=1).reshape(n)
        h *= 2
    return a


def _popcounts(n: int) -> np.ndarray:
    return np.array([bin(i).count("1") for i in range(1 << n)])


def cube_points(n: int) -> np.ndarray:
    """All 2^n points of {-1,1}^n in index order, shape (2^n, n)."""
    idx = np.arange(1 << n)
    bits = (idx[:, None] >> np.arange(n)[None, :]) & 1
    return 1 - 2 * bits


@dataclass(frozen=True, eq=False)
class WalshFn:
    """A function on {-1,1}^n stored by Fourier-Walsh coefficients.

    ``coeffs[S]`` is the coefficient of the character chi_S, indexed by
    the subset bitmask.
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        if not 1 <= self.n <= MAX_DIM:
            raise ParameterError(f"dimension must be in [1, {MAX_DIM}], got {self.n}")
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (1 << self.n,):
            raise ParameterError(
                f"expected {1 << self.n} coefficients for n={self.n}, "
                f"got shape {c.shape}"
            )
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def coeff(self, subset) -> float:
        """Coefficient of a subset of {1, .., n} given as an iterable."""
        mask = 0
        for j in subset:
            if not 1 <= j <= self.n:
                raise ParameterError(f"coordinate {j} outside [1, {self.n}]")
            mask |= 1 << (j - 1)
        return float(self.coeffs[mask])

    def coeff_map(self) -> dict[frozenset, float]:
        """The full coefficient map keyed by subsets of {1, .., n}."""
        out = {}
        for mask in range(1 << self.n):
            s = frozenset(j + 1 for j in range(self.n) if mask >> j & 1)
            out[s] = float(self.coeffs[mask])
        return out


def walsh_analyze(values) -> WalshFn:
    """Fourier-Walsh coefficients of 2^n point samples."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size < 2 or v.size & (v.size - 1):
        raise ParameterError(
            f"need 2^n values with 1 <= n <= {MAX_DIM}, got shape {v.shape}"
        )
    n = v.size.bit_length() - 1
    return WalshFn(n=n, coeffs=_fwht(v) / v.size)


def walsh_synthesize(f: WalshFn) -> np.ndarray:
    """Point samples of a WalshFn, inverse to walsh_analyze."""
    return _fwht(f.coeffs)


def noise_operator(f: WalshFn, rho: float) -> WalshFn:
    """T_rho: coefficient of S is scaled by rho^|S|."""
    rho = float(rho)
    if abs(rho) > 1.0:
        raise ParameterError(f"|rho| must be <= 1, got {rho}")
    return WalshFn(n=f.n, coeffs=f.coeffs * rho ** _popcounts(f.n))


def lp_norm_uniform(values, p: float) -> float:
    """L^p norm under the uniform measure, geometric mean at p = 0."""
    v = np.asarray(values, dtype=float)
    p = float(p)
    if p < 1.0:
        bad = np.nonzero(v <= 0.0)[0]
        if bad.size:
            i = int(bad[0])
            raise DomainError(
                f"norm with p={p} requires strictly positive values; "
                f"got {v[i]} at point index {i}"
            )
    else:
        bad = np.nonzero(v < 0.0)[0]
        if bad.size:
            i = int(bad[0])
            raise DomainError(
                f"norm with p={p} requires nonnegative values; "
                f"got {v[i]} at point index {i}"
            )
    if p == 0.0:
        return float(np.exp(np.mean(np.log(v))))
    return float(np.mean(v**p) ** (1.0 / p))


def critical_rho(p: float, q: float) -> float:
    """The sharp noise rate for the exponent pair.

    sqrt((p-1)/(q-1)) in the forward range 1 < p < q and
    sqrt((1-p)/(1-q)) in the reverse range q < p < 1; both equal
    e^{-critical_time(p, q, 1)}.
    """
    if 1.0 < p < q:
        return math.sqrt((p - 1.0) / (q - 1.0))
    if q < p < 1.0:
        return math.sqrt((1.0 - p) / (1.0 - q))
    raise ParameterError(
        f"(p, q) = ({p}, {q}) admits no critical noise rate "
        "(need 1 < p < q or q < p < 1)"
    )


@dataclass(frozen=True)
class BooleanHyperReport:
    """Outcome of a single noise-contraction norm comparison."""

    n: int
    p: float
    q: float
    rho: float
    mode: str  # "forward" or "reverse"
    norm_in: float
    norm_out: float
    ratio: float
    passed: bool


def boolean_hyper_check(
    f: WalshFn, p: float, q: float, rho: float, tol: float = 1e-12
) -> BooleanHyperReport:
    """Compare ||T_rho f||_q with ||f||_p under the uniform measure.

    Forward mode (1 < p < q) passes when the ratio is <= 1 + tol, reverse
    mode (q < p < 1) when it is >= 1 - tol.  f must be strictly positive
    whenever p < 1 or q <= 0 requires it of the norms.
    """
    if 1.0 < p < q:
        mode = "forward"
    elif q < p < 1.0:
        mode = "reverse"
    else:
        raise ParameterError(
            f"(p, q) = ({p}, {q}) is neither forward (1 < p < q) nor "
            "reverse (q < p < 1)"
        )
    values = walsh_synthesize(f)
    tvalues = walsh_synthesize(noise_operator(f, rho))
    norm_in = lp_norm_uniform(values, p)
    norm_out = lp_norm_uniform(tvalues, q)
    ratio = norm_out / norm_in
    passed = ratio <= 1.0 + tol if mode == "forward" else ratio >= 1.0 - tol
    return BooleanHyperReport(
        n=f.n,
        p=p,
        q=q,
        rho=rho,
        mode=mode,
        norm_in=norm_in,
        norm_out=norm_out,
        ratio=ratio,
        passed=passed,
    )


def tensor_power(f: WalshFn, copies: int) -> WalshFn:
    """The product function f(x_1) .. f(x_copies) on the product cube."""
    if not 1 <= copies * f.n <= MAX_DIM:
        raise ParameterError(
            f"tensor power dimension {copies * f.n} outside [1, {MAX_DIM}]"
        )
    values = walsh_synthesize(f)
    out = values
    for _ in range(copies - 1):
        out = np.kron(values, out)
    return walsh_analyze(out)
