"""Dunkl operators for the reflection group Z_2^n.

The positive roots are the coordinate vectors e_1..e_n, one multiplicity
kappa_j >= 0 per coordinate.  With that choice

    T_j f(x) = d_j f(x) + kappa_j (f(x) - f(sigma_j x)) / x_j,

the weight is h^2(x) = prod_j |x_j|^(2 kappa_j) and the Dunkl kernel
factorizes into rank-one kernels (see ``specfun.rank1_kernel``).

Coordinate indices in this module are 1-based, following the usual
mathematical labelling of the roots.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import specfun
from .errors import DomainError, ParameterError, PoleError


@dataclass(frozen=True)
class MultiplicitySetup:
    n: int
    kappa: tuple = field(default=())

    def __post_init__(self):
        n = int(self.n)
        if n < 1 or n != self.n:
            raise ParameterError(f"dimension n must be an integer >= 1, got {self.n!r}")
        kap = self.kappa
        if kap == () or kap is None:
            kap = (0.0,) * n
        elif np.isscalar(kap):
            kap = (float(kap),) * n
        kap = tuple(float(k) for k in kap)
        if len(kap) != n:
            raise ParameterError(f"need {n} multiplicities, got {len(kap)}")
        for k in kap:
            if not math.isfinite(k) or k < 0:
                raise ParameterError(f"multiplicities must be finite and >= 0, got {k}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "kappa", kap)

    @property
    def gamma(self) -> float:
        return math.fsum(self.kappa)

    @property
    def big_n(self) -> float:
        return self.n + 2.0 * self.gamma

    @property
    def is_euclidean(self) -> bool:
        return all(k == 0.0 for k in self.kappa)

    def as_dict(self) -> dict:
        return {"n": self.n, "kappa": list(self.kappa), "gamma": self.gamma, "N": self.big_n}


def _point(setup: MultiplicitySetup, x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.shape[-1:] != (setup.n,):
        raise ParameterError(f"point must have {setup.n} coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("point coordinates must be finite")
    return arr


def _index(setup: MultiplicitySetup, j: int) -> int:
    if not isinstance(j, (int, np.integer)) or not 1 <= j <= setup.n:
        raise IndexError(f"coordinate index must be in 1..{setup.n}, got {j!r}")
    return int(j) - 1


def weight_h2(setup: MultiplicitySetup, x) -> np.ndarray:
    """h^2(x) = prod_j |x_j|^(2 kappa_j), with 0^0 = 1; vectorized over leading axes."""
    x = _point(setup, x)
    out = np.ones(x.shape[:-1])
    for j, k in enumerate(setup.kappa):
        if k != 0.0:
            out = out * np.abs(x[..., j]) ** (2.0 * k)
    return out if out.shape else float(out)


def reflect(setup: MultiplicitySetup, j: int, x) -> np.ndarray:
    i = _index(setup, j)
    y = np.array(_point(setup, x), dtype=float)
    y[..., i] = -y[..., i]
    return y


def default_step(xj: float) -> float:
    return 1.0e-3 * (1.0 + abs(xj))


def dunkl_apply(setup: MultiplicitySetup, j: int, f: Callable, x, h_step: float | None = None,
                even_at_zero: bool = False) -> complex:
    """T_j f(x) by a 4th-order central difference plus the exact reflection term.

    At x_j = 0 with kappa_j > 0 the difference quotient is a removable
    singularity only for smooth f; pass ``even_at_zero=True`` to use its
    limit 2 d_j f(x) (which vanishes when f is even in x_j).
    """
    i = _index(setup, j)
    x = np.array(_point(setup, x), dtype=float)
    xj = x[i]
    h = default_step(xj) if h_step is None else float(h_step)
    if not h > 0:
        raise ParameterError("h_step must be positive")
    kap = setup.kappa[i]
    if kap > 0 and xj != 0.0 and abs(xj) < 4.0 * h:
        h = abs(xj) / 4.0

    def shifted(s):
        y = x.copy()
        y[i] += s
        return complex(f(y))

    deriv = (-shifted(2 * h) + 8.0 * shifted(h) - 8.0 * shifted(-h) + shifted(-2 * h)) / (12.0 * h)
    if kap == 0.0:
        return deriv
    if xj == 0.0:
        if not even_at_zero:
            raise PoleError(f"T_{j} at x_{j} = 0 with kappa_{j} > 0 needs even_at_zero=True")
        return deriv + 2.0 * kap * deriv
    y = x.copy()
    y[i] = -xj
    return deriv + kap * (complex(f(x)) - complex(f(y))) / xj


def dunkl_laplacian_apply(setup: MultiplicitySetup, f: Callable, x, h_step: float | None = None,
                          even_at_zero: bool = False) -> complex:
    """Delta_kappa f(x) = -sum_j T_j (T_j f)(x) by nested difference quotients."""
    x = np.array(_point(setup, x), dtype=float)
    total = 0.0j
    for j in range(1, setup.n + 1):
        h = h_step if h_step is not None else default_step(x[j - 1])

        def inner(y, j=j, h=h):
            return dunkl_apply(setup, j, f, y, h, even_at_zero)

        total += dunkl_apply(setup, j, inner, x, h, even_at_zero)
    return -total


def dunkl_kernel(setup: MultiplicitySetup, x, z) -> complex | np.ndarray:
    """E_kappa(x, z) = prod_j e_{kappa_j}(x_j z_j); x, z broadcast over leading axes."""
    x = np.asarray(x, dtype=complex)
    z = np.asarray(z, dtype=complex)
    w = x * z
    if w.shape[-1:] != (setup.n,):
        raise ParameterError(f"kernel arguments must have {setup.n} coordinates")
    out = np.ones(w.shape[:-1], dtype=complex)
    for j, k in enumerate(setup.kappa):
        out = out * specfun.rank1_kernel(k, w[..., j])
    return out if out.shape else complex(out)


def spherical_closed_form(setup: MultiplicitySetup, lam, x) -> complex:
    """phi_{lambda,kappa}(x) = j_{N/2-1}(lambda |x|), equal to 1 at x = 0."""
    r = float(np.linalg.norm(_point(setup, x)))
    return complex(specfun.spherical_fn(lam, r, setup.big_n / 2.0 - 1.0).value)


def dunkl_sphfn(setup: MultiplicitySetup, lam, x, sphere_quad=None) -> complex:
    """phi_{lambda,kappa}(x) as the sphere average of E_kappa(i x, lambda w) h^2(w).

    ``sphere_quad`` is a rule with ``nodes`` (M, n) and ``weights`` (M,)
    that already include h^2 and sum to 1; by default a 64-point rule
    from the spaces module is used.
    """
    if sphere_quad is None:
        from .spaces import sphere_quadrature

        sphere_quad = sphere_quadrature(setup, 64)
    x = _point(setup, x)
    vals = dunkl_kernel(setup, 1j * x[None, :], complex(lam) * sphere_quad.nodes)
    return complex(np.sum(sphere_quad.weights * vals))

