"""Sums of products of one-variable functions.

A SeparableSum represents

    f(x) = sum_k c_k prod_j F_j(x_j)[k]

where each F_j maps a 1-D array of coordinates to an (m, K) array of
factor values.  Product-type operators (such as the heat semigroups for
Z_2^n weights) act factor by factor, so a SeparableSum can be pushed
through them with one-dimensional quadrature and evaluated lazily at any
set of points.

``growth`` bounds the exponential rate |F(y)| <= C exp(growth |y|) and
``feature`` is the shortest oscillation length of the factors; both are
used to size quadrature rules.
"""

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import specfun
from .errors import ParameterError


@dataclass(frozen=True)
class SeparableSum:
    coeffs: np.ndarray
    factors: tuple
    growth: float = 0.0
    feature: float = math.inf

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def terms(self) -> int:
        return self.coeffs.shape[0]

    def factor_values(self, j: int, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        vals = np.asarray(self.factors[j](y), dtype=complex)
        if vals.shape != (y.shape[0], self.terms):
            raise ParameterError(f"factor {j} returned shape {vals.shape}, expected {(y.shape[0], self.terms)}")
        return vals

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.n:
            raise ParameterError(f"points must have shape (P, {self.n})")
        prod = np.broadcast_to(self.coeffs, (pts.shape[0], self.terms)).copy()
        for j in range(self.n):
            uniq, inv = np.unique(pts[:, j], return_inverse=True)
            prod *= self.factor_values(j, uniq)[inv.ravel()]
        return prod.sum(axis=1)

    def scaled(self, a: complex) -> "SeparableSum":
        return SeparableSum(complex(a) * self.coeffs, self.factors, self.growth, self.feature)

    def times(self, other: "SeparableSum") -> "SeparableSum":
        """Pointwise product, with K1 * K2 terms."""
        if other.n != self.n:
            raise ParameterError("dimension mismatch in separable product")
        k1, k2 = self.terms, other.terms

        def make(fa, fb):
            def f(y):
                a = fa(y)
                b = fb(y)
                return (a[:, :, None] * b[:, None, :]).reshape(len(y), k1 * k2)
            return f

        factors = [make(fa, fb) for fa, fb in zip(self.factors, other.factors)]
        coeffs = np.outer(self.coeffs, other.coeffs).ravel()
        return SeparableSum(coeffs, factors, self.growth + other.growth, min(self.feature, other.feature))


def _exp_factor(mu: np.ndarray) -> Callable:
    def f(y):
        return np.exp(1j * np.outer(y, mu))
    return f


def _rank1_factor(kappa: float, mu: np.ndarray) -> Callable:
    def f(y):
        return specfun.rank1_kernel(kappa, 1j * np.outer(y, mu))
    return f


def plane_wave_sum(kappa: Sequence[float], freqs: np.ndarray, coeffs: np.ndarray) -> SeparableSum:
    """sum_k c_k prod_j e_{kappa_j}(i freqs[k, j] y_j); plain exponentials when kappa_j = 0."""
    freqs = np.asarray(freqs, dtype=complex)
    factors = []
    for j, k in enumerate(kappa):
        mu = freqs[:, j].copy()
        factors.append(_exp_factor(mu) if k == 0.0 else _rank1_factor(k, mu))
    growth = float(np.max(np.abs(freqs.imag))) if freqs.size else 0.0
    re = float(np.max(np.abs(freqs.real))) if freqs.size else 0.0
    feature = 2.0 * math.pi / re if re > 0 else math.inf
    return SeparableSum(coeffs, factors, growth, feature)


def gaussian_sum(n: int, a: float, odd_axis: int | None = None) -> SeparableSum:
    """exp(-a |x|^2), optionally times x_j for j = odd_axis (0-based)."""
    if not a > 0:
        raise ParameterError("Gaussian width parameter must be > 0")

    def even(y):
        return np.exp(-a * y * y)[:, None]

    def odd(y):
        return (y * np.exp(-a * y * y))[:, None]

    factors = [odd if j == odd_axis else even for j in range(n)]
    return SeparableSum(np.ones(1), factors, 0.0, math.pi / math.sqrt(a))


def constant_sum(n: int, value: complex = 1.0) -> SeparableSum:
    def one(y):
        return np.ones((len(y), 1), dtype=complex)
    return SeparableSum(np.array([value]), [one] * n, 0.0, math.inf)


@dataclass(frozen=True)
class Quotient:
    """num(x) / den(x) with a separable numerator and a pointwise denominator."""
    num: SeparableSum
    den: Callable

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return self.num(pts) / self.den(pts)

    def scaled(self, a: complex) -> "Quotient":
        return Quotient(self.num.scaled(a), self.den)
