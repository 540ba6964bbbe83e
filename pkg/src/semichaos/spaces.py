"""Polar quadrature grids, weighted L^p norms and degree <= 1 h-harmonics.

A point of R^n is written x = r w with r = |x| and w on the unit sphere.
The measure h^2(x) dx splits as

    h^2(x) dx = Omega * r^(N-1) dr * dsigma(w),

where dsigma is the h^2-weighted surface measure normalized to mass 1 and
Omega = 2 prod_j Gamma(kappa_j + 1/2) / Gamma(N/2) is its unnormalized
total.  Sphere rules fold h^2 into their weights.

Sphere rules for Z_2^n weights (n = 2, 3) are products of Gauss-Jacobi
rules in the squared coordinates s_j = w_j^2 on one orthant, mirrored
into all 2^n orthants so that odd monomials integrate to zero exactly.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from . import specfun
from .dunkl import MultiplicitySetup
from .errors import DomainError, EnvelopeError, ParameterError, UnsupportedError

NORM_KINDS = ("weighted_lp", "mixed_p2", "conjugated_lp", "plain_l2", "l_infinity")


# ------------------------------------------------------------------ spaces

def gamma_of(p: float) -> float:
    if p == math.inf:
        return 1.0
    if p == 2.0:
        return 0.0
    return abs(2.0 / p - 1.0)


def conjugate_exponent(p: float) -> float:
    if p == 1.0:
        return math.inf
    if p == math.inf:
        return 1.0
    return p / (p - 1.0)


@dataclass(frozen=True)
class WeightedSpaceSpec:
    setup: MultiplicitySetup
    p: float
    rho: float
    norm_kind: str = "weighted_lp"

    def __post_init__(self):
        p = float(self.p)
        rho = float(self.rho)
        if not (p >= 1.0):
            raise ParameterError(f"p must be in [1, inf], got {self.p!r}")
        if not (math.isfinite(rho) and rho > 0):
            raise ParameterError(f"rho must be finite and > 0, got {self.rho!r}")
        kind = self.norm_kind
        if kind not in NORM_KINDS:
            raise ParameterError(f"unknown norm kind {kind!r}; expected one of {', '.join(NORM_KINDS)}")
        if kind == "l_infinity" and p != math.inf:
            raise ParameterError("l_infinity requires p = inf")
        if kind != "l_infinity" and p == math.inf:
            raise UnsupportedError("p = inf is only available with norm kind l_infinity")
        if kind == "plain_l2" and p != 2.0:
            raise ParameterError("plain_l2 requires p = 2")
        if kind == "conjugated_lp" and (not self.setup.is_euclidean or p <= 2.0):
            raise UnsupportedError("conjugated_lp needs kappa = 0 and p > 2")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rho", rho)

    @property
    def p_conj(self) -> float:
        return conjugate_exponent(self.p)

    @property
    def gamma_p(self) -> float:
        return gamma_of(self.p)

    @property
    def c_p(self) -> float:
        g = self.gamma_p
        return self.rho ** 2 * (1.0 - g * g)

    @property
    def n(self) -> int:
        return self.setup.n

    def with_kind(self, kind: str, p: float | None = None) -> "WeightedSpaceSpec":
        return WeightedSpaceSpec(self.setup, self.p if p is None else p, self.rho, kind)


def omega_total(setup: MultiplicitySetup) -> float:
    """Unnormalized mass of h^2 dsigma on the unit sphere."""
    lg = sum(math.lgamma(k + 0.5) for k in setup.kappa)
    return 2.0 * math.exp(lg - math.lgamma(setup.big_n / 2.0))


# --------------------------------------------------------------- sphere rule

@dataclass(frozen=True)
class SphereRule:
    nodes: np.ndarray
    weights: np.ndarray
    angles: np.ndarray
    resolution: int

    @property
    def size(self) -> int:
        return self.weights.shape[0]


def _jacobi01(m: int, a: float, b: float):
    """Gauss rule on [0, 1] for the weight t^a (1-t)^b, normalized to mass 1."""
    x, w = roots_jacobi(m, b, a)
    t = 0.5 * (1.0 + x)
    return t, w / np.sum(w)


def _mirror(octant: np.ndarray, weights: np.ndarray):
    n = octant.shape[1]
    signs = np.array(np.meshgrid(*([[1.0, -1.0]] * n), indexing="ij")).reshape(n, -1).T
    nodes = (signs[:, None, :] * octant[None, :, :]).reshape(-1, n)
    wts = np.tile(weights, signs.shape[0]) / signs.shape[0]
    return nodes, wts


@lru_cache(maxsize=64)
def _sphere_cached(n: int, kappa: tuple, resolution: int) -> SphereRule:
    if n == 2:
        m = resolution // 4
        t, w = _jacobi01(m, kappa[0] - 0.5, kappa[1] - 0.5)
        octant = np.column_stack([np.sqrt(t), np.sqrt(1.0 - t)])
        nodes, wts = _mirror(octant, w)
        theta = np.mod(np.arctan2(nodes[:, 1], nodes[:, 0]), 2.0 * np.pi)
        order = np.argsort(theta, kind="stable")
        nodes, wts, angles = nodes[order], wts[order], theta[order][:, None]
    elif n == 3:
        m = resolution // 8 + 1
        a1, a2, a3 = (k + 0.5 for k in kappa)
        # s1 = u, s2 = (1-u) v, s3 = (1-u)(1-v): Dirichlet(a1, a2, a3) factorizes
        u, wu = _jacobi01(m, a1 - 1.0, a2 + a3 - 1.0)
        v, wv = _jacobi01(m, a2 - 1.0, a3 - 1.0)
        uu, vv = np.meshgrid(u, v, indexing="ij")
        ww = np.outer(wu, wv).ravel()
        s1 = uu.ravel()
        s2 = ((1.0 - uu) * vv).ravel()
        s3 = ((1.0 - uu) * (1.0 - vv)).ravel()
        octant = np.sqrt(np.column_stack([s1, s2, s3]))
        nodes, wts = _mirror(octant, ww)
        theta = np.arccos(np.clip(nodes[:, 2], -1.0, 1.0))
        phi = np.mod(np.arctan2(nodes[:, 1], nodes[:, 0]), 2.0 * np.pi)
        order = np.lexsort((phi, theta))
        nodes, wts = nodes[order], wts[order]
        angles = np.column_stack([theta[order], phi[order]])
    else:
        raise UnsupportedError(f"sphere quadrature is implemented for n in {{2, 3}}, got n = {n}")
    wts = wts / math.fsum(wts)
    for arr in (nodes, wts, angles):
        arr.setflags(write=False)
    return SphereRule(nodes, wts, angles, resolution)


def sphere_quadrature(setup: MultiplicitySetup, angular_resolution: int = 64) -> SphereRule:
    """Rule for h^2 dsigma (mass 1) exact for spherical polynomials of degree <= resolution/2."""
    res = int(angular_resolution)
    if res < 16:
        raise ParameterError(f"angular resolution must be >= 16, got {angular_resolution}")
    return _sphere_cached(setup.n, setup.kappa, res)


def exactness_degree(setup: MultiplicitySetup, angular_resolution: int) -> int:
    res = int(angular_resolution)
    if setup.n == 2:
        return 4 * (res // 4) - 2
    return 4 * (res // 8 + 1) - 2


def moment_oracle(setup: MultiplicitySetup, powers) -> float:
    """Exact normalized moment of prod_j w_j^(a_j) against h^2 dsigma."""
    powers = [int(a) for a in powers]
    if any(a % 2 for a in powers):
        return 0.0
    a = [k + 0.5 for k in setup.kappa]
    b = [ak + pj / 2 for ak, pj in zip(a, powers)]
    lg = sum(math.lgamma(x) for x in b) - math.lgamma(sum(b))
    lg -= sum(math.lgamma(x) for x in a) - math.lgamma(sum(a))
    return math.exp(lg)


# --------------------------------------------------------------- radial grid

@dataclass(frozen=True)
class RadialGrid:
    nodes: np.ndarray
    weights: np.ndarray
    r_max: float

    @property
    def size(self) -> int:
        return self.nodes.shape[0]


@lru_cache(maxsize=64)
def radial_grid(r_max: float, n_nodes: int = 128, order: int = 32) -> RadialGrid:
    """Composite Gauss-Legendre rule on [0, r_max]."""
    if not (r_max > 0 and math.isfinite(r_max)):
        raise ParameterError("r_max must be finite and > 0")
    order = min(int(order), int(n_nodes))
    panels = max(1, int(n_nodes) // order)
    x, w = roots_legendre(order)
    edges = np.linspace(0.0, r_max, panels + 1)
    nodes = []
    wts = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (x + 1.0))
        wts.append(half * w)
    nodes = np.concatenate(nodes)
    wts = np.concatenate(wts)
    nodes.setflags(write=False)
    wts.setflags(write=False)
    return RadialGrid(nodes, wts, float(r_max))


def default_grid(space: WeightedSpaceSpec, n_radial: int = 128, angular: int = 64,
                 r_max: float | None = None):
    rmax = 12.0 / space.rho if r_max is None else float(r_max)
    return radial_grid(rmax, n_radial), sphere_quadrature(space.setup, angular)


# ----------------------------------------------------------------- functions

@dataclass(frozen=True)
class RadialProfile:
    r_nodes: np.ndarray
    values: np.ndarray
    r_weights: np.ndarray
    dr_weights: np.ndarray | None = None

    def __post_init__(self):
        if not (self.r_nodes.shape == self.values.shape == self.r_weights.shape):
            raise ParameterError("radial profile arrays must have equal lengths")
        if np.any(np.diff(self.r_nodes) <= 0) or np.any(self.r_nodes <= 0):
            raise ParameterError("radial nodes must be positive and strictly increasing")


def profile_for(setup: MultiplicitySetup, radial: RadialGrid, values) -> RadialProfile:
    rw = omega_total(setup) * radial.weights * radial.nodes ** (setup.big_n - 1.0)
    return RadialProfile(np.asarray(radial.nodes), np.asarray(values, dtype=complex), rw,
                         np.asarray(radial.weights))


def with_values(prof: RadialProfile, values) -> RadialProfile:
    return RadialProfile(prof.r_nodes, np.asarray(values, dtype=complex), prof.r_weights, prof.dr_weights)


@dataclass
class GridFunction:
    space: WeightedSpaceSpec
    radial: RadialGrid
    sphere: SphereRule
    values: np.ndarray
    source: object = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.radial.size, self.sphere.size):
            raise ParameterError(
                f"values shape {self.values.shape} does not match grid "
                f"({self.radial.size}, {self.sphere.size})")

    def points(self) -> np.ndarray:
        return grid_points(self.radial, self.sphere)

    def like(self, values, source=None) -> "GridFunction":
        return GridFunction(self.space, self.radial, self.sphere, values, source)

    def scaled(self, a: complex) -> "GridFunction":
        src = None if self.source is None else self.source.scaled(a)
        return self.like(a * self.values, src)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        ang = ["theta"] if self.space.n == 2 else ["theta", "phi"]
        w.writerow(["r", *ang, "re", "im"])
        for i, r in enumerate(self.radial.nodes):
            for k in range(self.sphere.size):
                v = self.values[i, k]
                row = [r, *self.sphere.angles[k], v.real, v.imag]
                w.writerow([format(float(q), ".17g") for q in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, space: WeightedSpaceSpec, radial: RadialGrid,
                 sphere: SphereRule) -> "GridFunction":
        rows = list(csv.reader(io.StringIO(text)))
        want = ["r", "theta"] + (["phi"] if space.n == 3 else []) + ["re", "im"]
        if not rows or [h.strip() for h in rows[0]] != want:
            raise ParameterError(f"grid CSV header must be {','.join(want)}")
        data = np.array([[float(q) for q in row] for row in rows[1:] if row], dtype=float)
        expected = radial.size * sphere.size
        if data.shape[0] != expected:
            raise ParameterError(f"grid CSV has {data.shape[0]} rows, grid needs {expected}")
        r = data[:, 0].reshape(radial.size, sphere.size)
        ang = data[:, 1:1 + space.n - 1].reshape(radial.size, sphere.size, -1)
        if not np.allclose(r, radial.nodes[:, None], rtol=1e-12, atol=1e-12):
            raise ParameterError("grid CSV radial nodes do not match the requested grid")
        if not np.allclose(ang, sphere.angles[None, :, :], rtol=1e-12, atol=1e-12):
            raise ParameterError("grid CSV angular nodes do not match the requested grid")
        vals = (data[:, -2] + 1j * data[:, -1]).reshape(radial.size, sphere.size)
        return cls(space, radial, sphere, vals)


def grid_points(radial: RadialGrid, sphere: SphereRule) -> np.ndarray:
    return radial.nodes[:, None, None] * sphere.nodes[None, :, :]


def sample(space: WeightedSpaceSpec, radial: RadialGrid, sphere: SphereRule, fn,
           source=None) -> GridFunction:
    """Evaluate a vectorized callable fn(points[..., n]) on the polar grid."""
    pts = grid_points(radial, sphere)
    vals = np.asarray(fn(pts.reshape(-1, space.n)), dtype=complex).reshape(radial.size, sphere.size)
    return GridFunction(space, radial, sphere, vals, source)


# --------------------------------------------------------------------- norms

def log_tilde_k(nu: float, x: float) -> float:
    lsc, mant, _ = specfun._k_parts(nu, x)
    return nu * math.log(x) + lsc + math.log(mant)


@lru_cache(maxsize=256)
def _log_macdonald(nu: float, rho: float, rs: tuple) -> np.ndarray:
    return np.array([log_tilde_k(nu, rho * r) for r in rs])


def log_phi_i_rho(setup: MultiplicitySetup, rho: float, r) -> np.ndarray:
    """log of phi_{i rho}(r) = j_{N/2-1}(i rho r) = 2^nu Gamma(nu+1) Itilde_nu(rho r)."""
    nu = setup.big_n / 2.0 - 1.0
    r = np.asarray(r, dtype=float)
    x = rho * r
    return (nu * math.log(2.0) + math.lgamma(nu + 1.0)) + np.log(specfun.itilde_scaled(nu, x)) + x


def macdonald_weight(space: WeightedSpaceSpec, r, surrogate: bool = False):
    """(Ktilde_{N/2}(rho r))^(gamma_p p), or the surrogate ((1+r)^((N-1)/2) e^(-rho r))^(gamma_p p)."""
    if space.p == math.inf:
        raise UnsupportedError("the Macdonald weight is not defined for p = inf")
    scalar = np.isscalar(r)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(~np.isfinite(r)) or np.any(r <= 0):
        raise DomainError("macdonald_weight needs finite r > 0")
    expo = space.gamma_p * space.p
    big_n = space.setup.big_n
    if surrogate:
        logw = expo * (0.5 * (big_n - 1.0) * np.log1p(r) - space.rho * r)
    else:
        logw = expo * _log_macdonald(big_n / 2.0, space.rho, tuple(r.tolist()))
    out = np.exp(logw)
    return float(out[0]) if scalar else out


def radial_log_weight(space: WeightedSpaceSpec, r: np.ndarray) -> np.ndarray:
    """log of the radial density multiplying |f|^p r^(N-1) in the space norm."""
    kind = space.norm_kind
    if kind in ("plain_l2",) or space.gamma_p == 0.0:
        return np.zeros_like(r)
    if kind == "conjugated_lp":
        return 2.0 * log_phi_i_rho(space.setup, space.rho, r)
    expo = space.gamma_p * space.p
    return expo * _log_macdonald(space.setup.big_n / 2.0, space.rho, tuple(np.asarray(r).tolist()))


def _log_sum_root(logs: np.ndarray, weights: np.ndarray, p: float) -> float:
    finite = np.isfinite(logs)
    if not finite.any():
        return 0.0
    m = float(np.max(logs[finite]))
    s = float(np.sum(weights[finite] * np.exp(logs[finite] - m)))
    if s <= 0:
        return 0.0
    val = (m + math.log(s)) / p
    if val > 709.0:
        raise EnvelopeError("norm overflows double precision")
    return math.exp(val)


def _check_values(f: GridFunction):
    if np.any(np.isnan(f.values)):
        raise DomainError("grid function contains NaN samples")


def lp_norm(space: WeightedSpaceSpec, f: GridFunction) -> float:
    """Weighted L^p norm of grid samples (grid maximum for l_infinity)."""
    _check_values(f)
    if space.norm_kind == "l_infinity":
        return float(np.max(np.abs(f.values)))
    if space.norm_kind == "mixed_p2":
        return mixed_norm(space, f)
    p = space.p
    r = f.radial.nodes
    with np.errstate(divide="ignore"):
        la = np.log(np.abs(f.values))
    radial = radial_log_weight(space, r) + (space.setup.big_n - 1.0) * np.log(r)
    logs = p * la + radial[:, None]
    w = omega_total(space.setup) * f.radial.weights[:, None] * f.sphere.weights[None, :]
    return _log_sum_root(logs.ravel(), w.ravel(), p)


def mixed_norm(space: WeightedSpaceSpec, f: GridFunction) -> float:
    """Radial L^p (Macdonald weight) of the angular L^2(h^2 dsigma) norm."""
    _check_values(f)
    if space.p == math.inf:
        raise UnsupportedError("the mixed norm is not defined for p = inf")
    p = space.p
    inner = np.sum(np.abs(f.values) ** 2 * f.sphere.weights[None, :], axis=1)
    r = f.radial.nodes
    kind_space = space.with_kind("weighted_lp")
    with np.errstate(divide="ignore"):
        logs = 0.5 * p * np.log(inner) + radial_log_weight(kind_space, r) + (space.setup.big_n - 1.0) * np.log(r)
    w = omega_total(space.setup) * f.radial.weights
    return _log_sum_root(logs, w, p)


def dual_norm(space: WeightedSpaceSpec, g: GridFunction) -> float:
    """L^{p'} norm with the dual weight (phi_{i rho,kappa})^(p' gamma_{p'})."""
    _check_values(g)
    q = space.p_conj
    if q == math.inf:
        return float(np.max(np.abs(g.values)))
    r = g.radial.nodes
    with np.errstate(divide="ignore"):
        la = np.log(np.abs(g.values))
    radial = q * gamma_of(q) * log_phi_i_rho(space.setup, space.rho, r) + (space.setup.big_n - 1.0) * np.log(r)
    logs = q * la + radial[:, None]
    w = omega_total(space.setup) * g.radial.weights[:, None] * g.sphere.weights[None, :]
    return _log_sum_root(logs.ravel(), w.ravel(), q)


def pairing(space: WeightedSpaceSpec, f: GridFunction, g: GridFunction) -> complex:
    """int f g h^2 dx on the grid."""
    r = f.radial.nodes
    w = omega_total(space.setup) * (f.radial.weights * r ** (space.setup.big_n - 1.0))[:, None] * f.sphere.weights[None, :]
    return complex(np.sum(w * f.values * g.values))


# ------------------------------------------------------------- h-harmonics

@dataclass(frozen=True)
class HarmonicBasisElement:
    degree: int
    index: int
    values: np.ndarray


def degree_one_norm(setup: MultiplicitySetup, j: int) -> float:
    """sqrt of int w_j^2 h^2 dsigma (normalized measure) = sqrt((kappa_j+1/2)/(N/2))."""
    return math.sqrt((setup.kappa[j - 1] + 0.5) / (setup.big_n / 2.0))


def harmonic_basis(setup: MultiplicitySetup, sphere: SphereRule, m: int):
    if m == 0:
        return [HarmonicBasisElement(0, 1, np.ones(sphere.size))]
    if m == 1:
        return [HarmonicBasisElement(1, j, sphere.nodes[:, j - 1] / degree_one_norm(setup, j))
                for j in range(1, setup.n + 1)]
    raise UnsupportedError("h-harmonics are built in for degrees 0 and 1 only")


def h_coefficients(setup: MultiplicitySetup, f: GridFunction, m: int):
    """f_{m,j}(r) = int f(r w) Y_{m,j}(w) h^2 dsigma for the built-in basis of degree m."""
    out = []
    for y in harmonic_basis(setup, f.sphere, m):
        vals = f.values @ (y.values * f.sphere.weights)
        out.append(profile_for(setup, f.radial, vals))
    return out
