"""Heat kernels and heat semigroups (Euclidean, Dunkl, conjugated, Bessel).

For Z_2^n weights the Dunkl heat kernel factorizes over coordinates,

    Gamma_kappa(t, x, y) = prod_j k_j(t, x_j, y_j),
    k(t, x, y) = m_kappa t^(-kappa-1/2) exp(-(|x|-|y|)^2 / 4t) * ehat_kappa(x y / 2t),

with ehat_kappa(w) = e_kappa(w) exp(-|w|) the scaled rank-one kernel.  The
constant m_kappa is not taken from a formula: it is fixed numerically by
requiring int k(1, 1, y) |y|^(2 kappa) dy = 1 and then reused for every
(t, x).

Semigroups act on GridFunctions.  When a function carries a separable
source (see ``separable``) the semigroup is applied factor by factor with
one-dimensional quadrature, which stays accurate for long times and
oscillating data; otherwise the kernel is applied as a dense quadrature
matrix on the polar grid.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_genlaguerre, roots_jacobi, roots_legendre

from . import specfun
from .dunkl import MultiplicitySetup
from .errors import ParameterError, UnsupportedError
from .separable import Quotient, SeparableSum, plane_wave_sum
from .spaces import (GridFunction, RadialProfile, WeightedSpaceSpec, grid_points, h_coefficients,
                     omega_total, sphere_quadrature, with_values)

LINE_ORDER = 20
CHUNK = 512


@dataclass(frozen=True)
class SemigroupParams:
    t: float
    c: float = 0.0
    rho: float = 1.0

    def __post_init__(self):
        t, c, rho = float(self.t), float(self.c), float(self.rho)
        if not (math.isfinite(t) and t > 0):
            raise ParameterError(f"t must be finite and > 0, got {self.t!r}")
        if not (math.isfinite(rho) and rho > 0):
            raise ParameterError(f"rho must be finite and > 0, got {self.rho!r}")
        if not math.isfinite(c):
            raise ParameterError("c must be finite")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "rho", rho)


def worker_count() -> int:
    env = os.environ.get("SEMICHAOS_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ParameterError(f"SEMICHAOS_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def _chunked(n_rows: int, fn, out: np.ndarray):
    # fixed chunk boundaries keep the arithmetic independent of the thread count
    starts = list(range(0, n_rows, CHUNK))

    def run(s):
        sl = slice(s, min(s + CHUNK, n_rows))
        out[sl] = fn(sl)

    workers = min(worker_count(), len(starts))
    if workers <= 1:
        for s in starts:
            run(s)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, starts))
    return out


# ------------------------------------------------------------------ kernels

def gaussian_kernel(t: float, x, y):
    """(4 pi t)^(-n/2) exp(-|x - y|^2 / 4t), broadcasting over leading axes."""
    if not t > 0:
        raise ParameterError("t must be > 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    n = d.shape[-1]
    out = (4.0 * math.pi * t) ** (-0.5 * n) * np.exp(-np.sum(d * d, axis=-1) / (4.0 * t))
    return out if np.ndim(out) else float(out)


@lru_cache(maxsize=256)
def _half_line(kappa: float, panels: int, width: float, order: int):
    xg, wg = roots_legendre(order)
    ys = []
    ws = []
    for p in range(panels):
        if p == 0 and kappa > 0:
            xj, wj = roots_jacobi(order, 0.0, 2.0 * kappa)
            ys.append(0.5 * width * (1.0 + xj))
            ws.append(wj * (0.5 * width) ** (2.0 * kappa + 1.0))
        else:
            y = p * width + 0.5 * width * (1.0 + xg)
            ys.append(y)
            ws.append(0.5 * width * wg * y ** (2.0 * kappa))
    return np.concatenate(ys), np.concatenate(ws)


def line_rule(kappa: float, half_width: float, panel_width: float, order: int = LINE_ORDER):
    """Nodes and weights on [-L, L] for integrals of g(y) |y|^(2 kappa) dy."""
    panels = max(1, int(math.ceil(half_width / panel_width - 1e-9)))
    y, w = _half_line(float(kappa), panels, float(panel_width), int(order))
    return np.concatenate([-y[::-1], y]), np.concatenate([w[::-1], w])


def kernel_size(t: float, x_max: float, growth: float = 0.0, feature: float = math.inf):
    """Half-width and panel width of a line rule that resolves the 1-D kernel."""
    half = x_max + 2.0 * t * growth + 8.0 * math.sqrt(4.0 * t) + 1.0
    width = min(math.sqrt(2.0 * t), 0.5 * feature, 4.0)
    return half, width


def _kernel_1d_raw(kappa: float, t: float, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if kappa == 0.0:
        return t ** -0.5 * np.exp(-(x - y) ** 2 / (4.0 * t))
    if x.size * y.size > 1 and max(x.size, y.size) > 4096:
        # tensor grids repeat each coordinate many times
        xb, yb = np.broadcast_arrays(x, y)
        ux, ix = np.unique(xb.ravel(), return_inverse=True)
        uy, iy = np.unique(yb.ravel(), return_inverse=True)
        if ux.size * uy.size < 0.5 * xb.size:
            table = _kernel_1d_raw(kappa, t, ux[:, None], uy[None, :])
            return table[ix.ravel(), iy.ravel()].reshape(xb.shape)
    ax, ay = np.abs(x), np.abs(y)
    w = x * y / (2.0 * t)
    gauss = np.exp(-(ax - ay) ** 2 / (4.0 * t))
    return t ** (-kappa - 0.5) * gauss * specfun.rank1_kernel_scaled(kappa, w)


@lru_cache(maxsize=64)
def line_mass(kappa: float) -> float:
    """m_kappa from the normalization int k(1, 1, y) |y|^(2 kappa) dy = 1."""
    half, _ = kernel_size(1.0, 1.0)
    y, w = line_rule(kappa, half, 0.25, 24)
    return 1.0 / math.fsum(_kernel_1d_raw(kappa, 1.0, 1.0, y) * w)


def line_mass_closed(kappa: float) -> float:
    """Closed form 1 / (2^(2 kappa + 1) Gamma(kappa + 1/2)), used only as a test oracle."""
    return 1.0 / (2.0 ** (2.0 * kappa + 1.0) * math.gamma(kappa + 0.5))


def heat_mass(setup: MultiplicitySetup) -> float:
    """M_kappa = prod_j m_{kappa_j}, computed numerically."""
    return math.prod(line_mass(k) for k in setup.kappa)


def kernel_1d(kappa: float, t: float, x, y, mass: float | None = None):
    m = line_mass(kappa) if mass is None else mass
    return m * _kernel_1d_raw(kappa, t, x, y)


def dunkl_heat_kernel(setup: MultiplicitySetup, t: float, x, y, mass_scale: float = 1.0):
    """Gamma_kappa(t, x, y), broadcasting over leading axes of x and y."""
    if not t > 0:
        raise ParameterError("t must be > 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != setup.n or y.shape[-1] != setup.n:
        raise ParameterError(f"points must have {setup.n} coordinates")
    out = mass_scale
    for j, k in enumerate(setup.kappa):
        out = out * kernel_1d(k, t, x[..., j], y[..., j])
    return out if np.ndim(out) else float(out)


def tensor_rule(setup: MultiplicitySetup, t: float, x_max: float, growth: float = 0.0):
    """Product line rule on R^n for integrals against h^2(y) dy; returns (points, weights)."""
    rules = []
    for k in setup.kappa:
        half, width = kernel_size(t, x_max, growth)
        rules.append(line_rule(k, half, width))
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrid = np.ones_like(grids[0])
    for j, r in enumerate(rules):
        shape = [1] * setup.n
        shape[j] = -1
        wgrid = wgrid * r[1].reshape(shape)
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    return pts, wgrid.ravel()


# -------------------------------------------------------- separable route

def _evolved_factor(kappa: float, t: float, factor, growth: float, feature: float, terms: int):
    mass = line_mass(kappa)

    def g(y):
        y = np.asarray(y, dtype=float)
        x_max = float(np.max(np.abs(y))) if y.size else 0.0
        half, width = kernel_size(t, x_max, growth, feature)
        nodes, wts = line_rule(kappa, half, width)
        fv = np.asarray(factor(nodes), dtype=complex)
        out = np.empty((y.shape[0], terms), dtype=complex)

        def block(sl):
            kmat = kernel_1d(kappa, t, y[sl, None], nodes[None, :], mass) * wts[None, :]
            return kmat @ fv

        return _chunked(y.shape[0], block, out)

    return g


def evolve_source(setup: MultiplicitySetup, t: float, source):
    """Push a separable source through the free heat semigroup (no e^(-t rho^2))."""
    if isinstance(source, Quotient):
        return Quotient(evolve_source(setup, t, source.num), source.den)
    if not isinstance(source, SeparableSum):
        raise UnsupportedError(f"cannot evolve a source of type {type(source).__name__}")
    if source.n != setup.n:
        raise ParameterError("source dimension does not match the multiplicity setup")
    factors = [_evolved_factor(k, t, f, source.growth, source.feature, source.terms)
               for k, f in zip(setup.kappa, source.factors)]
    return SeparableSum(source.coeffs, factors, source.growth, source.feature)


# ------------------------------------------------------------ dense route

def dense_apply(setup: MultiplicitySetup, t: float, f: GridFunction) -> np.ndarray:
    """sum_l Gamma(t, x_i, y_l) f(y_l) W_l over all polar grid nodes."""
    pts = grid_points(f.radial, f.sphere).reshape(-1, setup.n)
    r = f.radial.nodes
    w = (omega_total(setup) * f.radial.weights * r ** (setup.big_n - 1.0))[:, None] * f.sphere.weights[None, :]
    fw = (f.values * w).ravel()
    masses = [line_mass(k) for k in setup.kappa]
    out = np.empty(pts.shape[0], dtype=complex)

    def block(sl):
        kmat = np.ones((pts[sl].shape[0], pts.shape[0]))
        for j, k in enumerate(setup.kappa):
            kmat *= kernel_1d(k, t, pts[sl, j][:, None], pts[None, :, j], masses[j])
        return kmat @ fw

    _chunked(pts.shape[0], block, out)
    return out.reshape(f.values.shape)


# --------------------------------------------------------------- semigroups

def _check_rho(space: WeightedSpaceSpec, params: SemigroupParams):
    if abs(space.rho - params.rho) > 1e-14 * max(1.0, space.rho):
        raise ParameterError(f"space rho {space.rho} and semigroup rho {params.rho} differ")


def apply_Tt(space: WeightedSpaceSpec, params: SemigroupParams, f: GridFunction,
             dense: bool = False) -> GridFunction:
    """T_t f = exp(-t rho^2) H_t f with H_t the (Dunkl) heat semigroup."""
    _check_rho(space, params)
    setup = space.setup
    decay = math.exp(-params.t * params.rho ** 2)
    if f.source is not None and not dense:
        src = evolve_source(setup, params.t, f.source).scaled(decay)
        vals = src(f.points().reshape(-1, setup.n)).reshape(f.values.shape)
        return f.like(vals, src)
    return f.like(decay * dense_apply(setup, params.t, f))


def apply_Ttc(space: WeightedSpaceSpec, params: SemigroupParams, f: GridFunction,
              dense: bool = False) -> GridFunction:
    """T_t^c f = exp(c t) T_t f."""
    out = apply_Tt(space, params, f, dense)
    return out.scaled(math.exp(params.c * params.t))


def phi_i_rho_closed(setup: MultiplicitySetup, rho: float):
    """Vectorized x -> phi_{i rho}(x) = j_{N/2-1}(i rho |x|)."""
    nu = setup.big_n / 2.0 - 1.0
    const = 2.0 ** nu * math.gamma(nu + 1.0)

    def phi(points):
        r = np.linalg.norm(np.asarray(points, dtype=float), axis=-1)
        x = rho * r
        return const * specfun.itilde_scaled(nu, x) * np.exp(x)

    return phi


def phi_plane_waves(setup: MultiplicitySetup, lam: complex, x=None, angular: int = 64) -> SeparableSum:
    """tau_x phi_lambda as a plane-wave superposition over sphere nodes.

    tau_x phi_lambda(y) = int E(i x, lambda w) E(i y, lambda w) h^2(w) dsigma(w);
    x = None means x = 0, i.e. phi_lambda itself.
    """
    sq = sphere_quadrature(setup, angular)
    freqs = complex(lam) * sq.nodes
    coeffs = sq.weights.astype(complex)
    if x is not None:
        from .dunkl import dunkl_kernel

        coeffs = coeffs * np.asarray(dunkl_kernel(setup, 1j * np.asarray(x, float)[None, :], freqs))
    return plane_wave_sum(setup.kappa, freqs, coeffs)


def conjugated_apply(space: WeightedSpaceSpec, params: SemigroupParams, f: GridFunction,
                     dense: bool = False) -> GridFunction:
    """T~_t f = phi_{i rho}^(-1) T_t (f phi_{i rho}); Euclidean (kappa = 0) only."""
    setup = space.setup
    if not setup.is_euclidean:
        raise UnsupportedError("the conjugated semigroup is defined for kappa = 0 only")
    _check_rho(space, params)
    den = phi_i_rho_closed(setup, params.rho)
    pts = f.points().reshape(-1, setup.n)
    if f.source is not None and not dense:
        if isinstance(f.source, Quotient):
            num = f.source.num
        else:
            num = f.source.times(phi_plane_waves(setup, 1j * params.rho))
        src = Quotient(num, den)
        weighted = f.like(num(pts).reshape(f.values.shape), num)
        out = apply_Tt(space, params, weighted)
        new = Quotient(out.source, den)
        return f.like(out.values / den(pts).reshape(f.values.shape), new)
    phi = den(pts).reshape(f.values.shape)
    out = apply_Tt(space, params, f.like(f.values * phi), dense=True)
    return f.like(out.values / phi)


# --------------------------------------------------- modified Laplacian

def _second_diff(g, x: np.ndarray, j: int, h: float) -> complex:
    def at(s):
        y = x.copy()
        y[j] += s
        return complex(g(y))

    return (-at(2 * h) + 16.0 * at(h) - 30.0 * at(0.0) + 16.0 * at(-h) - at(-2 * h)) / (12.0 * h * h)


def _first_diff(g, x: np.ndarray, j: int, h: float) -> complex:
    def at(s):
        y = x.copy()
        y[j] += s
        return complex(g(y))

    return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / (12.0 * h)


def _phi_scalar(space: WeightedSpaceSpec):
    nu = space.n / 2.0 - 1.0

    def phi(y):
        return complex(specfun.spherical_fn(1j * space.rho, float(np.linalg.norm(y)), nu).value)

    return phi


def euclidean_laplacian_apply(f, x, h_step: float | None = None) -> complex:
    """Delta f = -sum_j d_j^2 f by 4th-order central differences."""
    x = np.asarray(x, dtype=float)
    h = 5e-3 * (1.0 + float(np.max(np.abs(x)))) if h_step is None else float(h_step)
    return -sum(_second_diff(f, x, j, h) for j in range(x.shape[0]))


def modified_laplacian_apply(space: WeightedSpaceSpec, f, x, h_step: float | None = None) -> complex:
    """Delta~ f = phi_{i rho}^(-1) Delta (f phi_{i rho}) with Delta = -sum d_j^2."""
    if not space.setup.is_euclidean:
        raise UnsupportedError("the modified Laplacian is defined for kappa = 0 only")
    x = np.asarray(x, dtype=float)
    if x.shape != (space.n,):
        raise ParameterError(f"point must have {space.n} coordinates")
    phi = _phi_scalar(space)
    return euclidean_laplacian_apply(lambda y: f(y) * phi(y), x, h_step) / phi(x)


def modified_laplacian_expanded(space: WeightedSpaceSpec, f, x, zeroth_sign: float = 1.0,
                                h_step: float | None = None) -> complex:
    """(Delta + s rho^2) f - 2 phi^(-1) grad f . grad phi, for s = zeroth_sign.

    With s = +1 this is the expanded form as usually written; the
    conjugation definition corresponds to s = -1 under Delta = -sum d_j^2.
    Kept for the regression test that records the difference.
    """
    x = np.asarray(x, dtype=float)
    h = 5e-3 * (1.0 + float(np.max(np.abs(x)))) if h_step is None else float(h_step)
    phi = _phi_scalar(space)
    lap = euclidean_laplacian_apply(f, x, h)
    grad = sum(_first_diff(f, x, j, h) * _first_diff(phi, x, j, h) for j in range(space.n))
    return lap + zeroth_sign * space.rho ** 2 * complex(f(x)) - 2.0 * grad / phi(x)


# --------------------------------------------------------- Bessel semigroup

def bessel_kernel(alpha: float, t: float, r, s):
    """b_t^alpha(r, s) = (2t)^(-alpha-1) exp(-(r^2+s^2)/4t) Itilde_alpha(r s / 2t), real positive."""
    alpha = specfun.check_order(alpha)
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    w = r * s / (2.0 * t)
    return (2.0 * t) ** (-alpha - 1.0) * np.exp(-(r - s) ** 2 / (4.0 * t)) * specfun.itilde_scaled(alpha, w)


def bessel_semigroup_apply(alpha: float, t: float, f: RadialProfile) -> RadialProfile:
    """B_t^alpha f(r) = int_0^inf f(s) b_t^alpha(r, s) s^(2 alpha + 1) ds on the profile's nodes."""
    if not t > 0:
        raise ParameterError("t must be > 0")
    if f.dr_weights is None:
        raise ParameterError("radial profile lacks plain dr weights")
    s = f.r_nodes
    kmat = bessel_kernel(alpha, t, s[:, None], s[None, :])
    vals = kmat @ (f.values * f.dr_weights * s ** (2.0 * alpha + 1.0))
    return with_values(f, vals)


def coeff_via_bessel(setup: MultiplicitySetup, t: float, rho: float, m: int, j: int,
                     f: GridFunction) -> RadialProfile:
    """exp(-t rho^2) r^m B_t^(N/2+m-1)(r^(-m) f_{m,j})(r) for the built-in basis of degree m."""
    if m not in (0, 1):
        raise UnsupportedError("only degrees m = 0 and m = 1 are supported")
    coeffs = h_coefficients(setup, f, m)
    if not 1 <= j <= len(coeffs):
        raise IndexError(f"harmonic index must be in 1..{len(coeffs)}")
    prof = coeffs[j - 1]
    r = prof.r_nodes
    tilde = with_values(prof, prof.values * r ** (-m))
    out = bessel_semigroup_apply(setup.big_n / 2.0 + m - 1.0, t, tilde)
    return with_values(out, math.exp(-t * rho ** 2) * r ** m * out.values)


# ----------------------------------------------------- spectral representation

def spectral_kernel(setup: MultiplicitySetup, t: float, x, y, order: int = 120) -> float:
    """c_kappa^(-2) int exp(-t |xi|^2) E(i x, xi) E(-i y, xi) h^2(xi) d xi.

    The integrand is a product over coordinates; each 1-D integral is
    folded onto xi > 0 and mapped by u = t xi^2 onto a generalized
    Gauss-Laguerre rule with parameter kappa - 1/2.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = 1.0 + 0.0j
    for j, k in enumerate(setup.kappa):
        u, w = roots_genlaguerre(order, k - 0.5)
        xi = np.sqrt(u / t)
        vals = 0.0j
        for sgn in (1.0, -1.0):
            vals = vals + specfun.rank1_kernel(k, 1j * x[j] * sgn * xi) * specfun.rank1_kernel(k, -1j * y[j] * sgn * xi)
        integral = 0.5 * t ** (-k - 0.5) * np.sum(w * vals)
        c1 = 2.0 ** (k + 0.5) * math.gamma(k + 0.5)
        total *= integral / c1 ** 2
    return float(total.real)


def spectral_kernel_check(setup: MultiplicitySetup, t: float, x, y, order: int = 120) -> float:
    """|spectral representation - closed kernel| / closed kernel."""
    direct = dunkl_heat_kernel(setup, t, np.asarray(x, float), np.asarray(y, float))
    return abs(spectral_kernel(setup, t, x, y, order) - direct) / direct
