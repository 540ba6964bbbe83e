"""Spectral regions, eigenvalue roles, chaos witnesses and the verdict table.

For 1 <= p < inf the L^p spectrum of Delta + rho^2 on the weighted spaces
is the parabolic region

    P_p = { lambda^2 + rho^2 : |Im lambda| <= gamma_p rho }
        = { u + iv : u >= v^2 / (4 gamma_p^2 rho^2) + c_p },

degenerating to the ray [rho^2, inf) at p = 2.  Eigenfunctions are the
translated spherical functions tau_x phi_lambda with |Im lambda| < gamma_p rho,
and T_t^c tau_x phi_lambda = exp(-t omega_c(lambda)) tau_x phi_lambda with
omega_c(lambda) = lambda^2 + rho^2 - c.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dunkl import MultiplicitySetup
from .errors import ParameterError, UnsupportedError
from .heat import SemigroupParams, apply_Ttc, phi_plane_waves
from .spaces import (GridFunction, WeightedSpaceSpec, conjugate_exponent, default_grid, gamma_of,
                     lp_norm, omega_total, radial_grid, radial_log_weight, sample)
from . import specfun

ROLES = ("A1", "A2", "A3")
VERDICTS = ("Chaotic", "NotChaotic", "NotHypercyclic", "NoPeriodicPoints", "Unknown")
IMAG_TOL = 1e-12


def _check_p(p: float) -> float:
    p = float(p)
    if not (1.0 <= p < math.inf):
        raise ParameterError(f"p must satisfy 1 <= p < inf, got {p!r}")
    return p


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not (math.isfinite(rho) and rho > 0):
        raise ParameterError(f"rho must be finite and > 0, got {rho!r}")
    return rho


def critical_shift(p: float, rho: float) -> float:
    g = gamma_of(p)
    return rho * rho * (1.0 - g * g)


@dataclass(frozen=True)
class ComplexFrequency:
    lam: complex
    rho: float

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "rho", _check_rho(self.rho))

    @property
    def eigenvalue(self) -> complex:
        return self.lam * self.lam + self.rho * self.rho

    def omega(self, c: float) -> complex:
        return self.eigenvalue - c


# --------------------------------------------------------------- geometry

def boundary_u(p: float, rho: float, v) -> np.ndarray:
    """Real part of the boundary of P_p at imaginary part v (p != 2)."""
    p = _check_p(p)
    rho = _check_rho(rho)
    g = gamma_of(p)
    if g == 0.0:
        raise ParameterError("the region degenerates to a ray at p = 2")
    v = np.asarray(v, dtype=float)
    return v * v / (4.0 * g * g * rho * rho) + critical_shift(p, rho)


def region_contains(p: float, rho: float, z: complex) -> bool:
    p = _check_p(p)
    rho = _check_rho(rho)
    z = complex(z)
    if gamma_of(p) == 0.0:
        return z.imag == 0.0 and z.real >= rho * rho
    return bool(z.real >= boundary_u(p, rho, z.imag))


def point_spectrum_contains(setup: MultiplicitySetup, p: float, rho: float, z: complex) -> bool:
    """Membership in the interior of P_p (the point spectrum of Delta_kappa + rho^2)."""
    p = _check_p(p)
    rho = _check_rho(rho)
    z = complex(z)
    if gamma_of(p) == 0.0:
        return False
    return bool(z.real > boundary_u(p, rho, z.imag))


def ir_axis_intersection(p: float, rho: float, c: float) -> dict:
    """(P_p - c) meets the imaginary axis in {iv : v^2 <= 4 gamma_p^2 rho^2 (c - c_p)}."""
    p = _check_p(p)
    rho = _check_rho(rho)
    c = float(c)
    g = gamma_of(p)
    if g == 0.0:
        # the ray [rho^2 - c, inf) meets iR only at 0
        if c >= rho * rho:
            return {"count": 1, "v_max": 0.0}
        return {"count": 0, "v_max": None}
    cp = critical_shift(p, rho)
    if c < cp:
        return {"count": 0, "v_max": None}
    if c == cp:
        return {"count": 1, "v_max": 0.0}
    return {"count": "infinite", "v_max": 2.0 * g * rho * math.sqrt(c - cp)}


def strip_image_samples(p: float, rho: float, count: int, seed: int = 0, re_max: float = 4.0) -> np.ndarray:
    """lambda^2 + rho^2 for lambda drawn uniformly from the closed strip |Im lambda| <= gamma_p rho."""
    p = _check_p(p)
    rho = _check_rho(rho)
    rng = np.random.default_rng(seed)
    g = gamma_of(p)
    lam = rng.uniform(-re_max, re_max, count) + 1j * rng.uniform(-g * rho, g * rho, count)
    return lam * lam + rho * rho


def classify_lambda(lam: complex, p: float, rho: float, c: float) -> str | None:
    """Role of tau_x phi_lambda: A1 (decay), A2 (growth), A3 (periodic), or None outside the open strip."""
    p = _check_p(p)
    freq = ComplexFrequency(lam, rho)
    if not abs(freq.lam.imag) < gamma_of(p) * freq.rho:
        return None
    re = freq.omega(c).real
    if abs(re) <= IMAG_TOL:
        return "A3"
    return "A1" if re > 0 else "A2"


# ------------------------------------------------------------ eigenfunctions

def translated_sphfn(space: WeightedSpaceSpec, x, lam: complex, grid=None) -> GridFunction:
    """tau_x phi_lambda sampled on a polar grid, carrying its plane-wave source."""
    setup = space.setup
    x = np.asarray(x, dtype=float)
    if x.shape != (setup.n,):
        raise ParameterError(f"translation point must have {setup.n} coordinates")
    radial, sphere = default_grid(space) if grid is None else grid
    src = phi_plane_waves(setup, complex(lam), None if not np.any(x) else x)
    return sample(space, radial, sphere, src, source=src)


def truncated_norms(space: WeightedSpaceSpec, lam: complex, cutoffs, nodes_per_unit: int = 16) -> list[float]:
    """Space norms of phi_lambda restricted to |x| <= R for each cutoff R (radial 1-D quadrature)."""
    setup = space.setup
    nu = setup.big_n / 2.0 - 1.0
    out = []
    for cut in cutoffs:
        n_nodes = 32 * max(1, int(math.ceil(nodes_per_unit * cut / 32.0)))
        rg = radial_grid(float(cut), n_nodes, 32)
        r = rg.nodes
        vals = np.array([abs(specfun.spherical_fn(lam, float(s), nu).value) for s in r])
        logs = space.p * np.log(vals) + radial_log_weight(space, r) + (setup.big_n - 1.0) * np.log(r)
        m = float(np.max(logs))
        total = omega_total(setup) * float(np.sum(rg.weights * np.exp(logs - m)))
        out.append(math.exp((m + math.log(total)) / space.p))
    return out


def membership_report(space: WeightedSpaceSpec, lam: complex, cutoffs=None) -> dict:
    """Convergence or growth of truncated norms over nested radial cutoffs."""
    rho = space.rho
    cutoffs = [12.0 / rho, 24.0 / rho, 36.0 / rho] if cutoffs is None else list(cutoffs)
    norms = truncated_norms(space, lam, cutoffs)
    ratios = [b / a for a, b in zip(norms, norms[1:])]
    monotone = all(b > a for a, b in zip(norms, norms[1:]))
    return {"cutoffs": cutoffs, "norms": norms, "ratios": ratios, "monotone": monotone,
            "growth": norms[-1] / norms[0]}


# ----------------------------------------------------------------- witnesses

@dataclass
class ChaosWitness:
    space: WeightedSpaceSpec
    c: float
    freq: ComplexFrequency
    x: np.ndarray
    role: str
    period: float | None = None
    residuals: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    @property
    def theorem_tag(self) -> str:
        return "Prop2.9" if self.space.setup.is_euclidean else "Prop3.11"

    def as_dict(self) -> dict:
        sp = self.space
        return {
            "space": sp.norm_kind,
            "p": sp.p,
            "c": self.c,
            "rho": sp.rho,
            "kappa": list(sp.setup.kappa),
            "role": self.role,
            "lambda_re": self.freq.lam.real,
            "lambda_im": self.freq.lam.imag,
            "period": self.period,
            "residuals": dict(self.residuals),
            "theorem_tag": self.theorem_tag,
        }


def _witness_space_check(space: WeightedSpaceSpec, c: float) -> float:
    if space.norm_kind not in ("weighted_lp", "mixed_p2"):
        raise UnsupportedError(f"witnesses are built on weighted_lp or mixed_p2 spaces, not {space.norm_kind}")
    if space.p == 2.0 or space.p == math.inf:
        raise ParameterError("witnesses need p != 2 and p < inf")
    c = float(c)
    if not c > space.c_p:
        raise ParameterError(f"c = {c} must exceed c_p = {space.c_p}: the imaginary axis meets the shifted region "
                             "in at most one point")
    return c


def default_translation(setup: MultiplicitySetup) -> np.ndarray:
    x = np.zeros(setup.n)
    x[0] = 0.5
    return x


def _witness_grid(space: WeightedSpaceSpec, grid):
    return default_grid(space, n_radial=64, angular=32) if grid is None else grid


def make_periodic_witness(space: WeightedSpaceSpec, c: float, b: float | None = None,
                          x=None, grid=None) -> ChaosWitness:
    """lambda = a + ib with a^2 = c - rho^2 + b^2, so omega_c = 2iab and T^c has period pi/(ab)."""
    c = _witness_space_check(space, c)
    rho = space.rho
    lo = math.sqrt(max(0.0, rho * rho - c)) * (1.0 + 1e-3)
    hi = space.gamma_p * rho * (1.0 - 1e-3)
    if b is None:
        b = 0.5 * (lo + hi)
    if not lo <= b <= hi:
        raise ParameterError(f"b must lie in [{lo}, {hi}]")
    a = math.sqrt(c - rho * rho + b * b)
    freq = ComplexFrequency(complex(a, b), rho)
    omega = freq.omega(c)
    period = 2.0 * math.pi / abs(omega.imag)
    x = default_translation(space.setup) if x is None else np.asarray(x, float)
    f = translated_sphfn(space, x, freq.lam, _witness_grid(space, grid))
    back = apply_Ttc(space, SemigroupParams(period, c, rho), f)
    nf = lp_norm(space, f)
    res = lp_norm(space, back.like(back.values - f.values)) / nf
    role = classify_lambda(freq.lam, space.p, rho, c)
    return ChaosWitness(space, c, freq, x, role, period,
                        {"return": res, "re_omega": abs(omega.real)}, {"f": f, "evolved": back})


def make_binf_witness(space: WeightedSpaceSpec, c: float, eps: float = 1e-3, b: float | None = None,
                      x=None, grid=None) -> ChaosWitness:
    """f_t = exp(t omega_c) g with g = tau_x phi_{ib}, Re omega_c < 0; T_t^c f_t = g and ||f_t|| <= eps."""
    c = _witness_space_check(space, c)
    if not (0 < eps < 1):
        raise ParameterError("eps must lie in (0, 1)")
    rho = space.rho
    lo = math.sqrt(max(0.0, rho * rho - c))
    hi = space.gamma_p * rho
    if b is None:
        # upper part of the admissible interval: faster decay, shorter evolution
        b = lo + 0.8 * (hi - lo)
    if not lo < b < hi:
        raise ParameterError(f"b must lie in ({lo}, {hi})")
    freq = ComplexFrequency(1j * b, rho)
    omega = freq.omega(c)
    x = default_translation(space.setup) if x is None else np.asarray(x, float)
    g = translated_sphfn(space, x, freq.lam, _witness_grid(space, grid))
    ng = lp_norm(space, g)
    t = (math.log(ng / eps) + math.log(2.0)) / abs(omega.real)
    ft = g.scaled(np.exp(t * omega))
    back = apply_Ttc(space, SemigroupParams(t, c, rho), ft)
    res = lp_norm(space, back.like(back.values - g.values)) / ng
    role = classify_lambda(freq.lam, space.p, rho, c)
    return ChaosWitness(space, c, freq, x, role, None,
                        {"f_t_norm": lp_norm(space, ft), "return": res, "t": t},
                        {"f_t": ft, "g": g, "evolved": back})


def make_b0_witness(space: WeightedSpaceSpec, c: float, a: float | None = None,
                    x=None, grid=None, times=(1.0, 2.0, 4.0)) -> ChaosWitness:
    """Real lambda = a with omega_c = a^2 + rho^2 - c > 0; norms must decay like exp(-omega_c t)."""
    c = _witness_space_check(space, c)
    rho = space.rho
    if a is None:
        a = math.sqrt(max(0.0, c - rho * rho)) + 0.5 * rho
    freq = ComplexFrequency(complex(a, 0.0), rho)
    omega = freq.omega(c).real
    if not omega > 0:
        raise ParameterError("lambda must give Re omega_c > 0")
    x = default_translation(space.setup) if x is None else np.asarray(x, float)
    f = translated_sphfn(space, x, freq.lam, _witness_grid(space, grid))
    norms = [lp_norm(space, apply_Ttc(space, SemigroupParams(t, c, rho), f)) for t in times]
    dev = max(abs(n2 / n1 - math.exp(-omega * (t2 - t1)))
              for (t1, n1), (t2, n2) in zip(zip(times, norms), zip(times[1:], norms[1:])))
    decreasing = all(b < a for a, b in zip(norms, norms[1:]))
    role = classify_lambda(freq.lam, space.p, rho, c)
    return ChaosWitness(space, c, freq, x, role, None,
                        {"ratio": dev, "decreasing": float(decreasing)},
                        {"f": f, "norms": norms, "times": list(times)})


# ------------------------------------------------------------------- verdicts

@dataclass(frozen=True)
class Verdict:
    value: str
    theorem_tag: str

    def as_dict(self) -> dict:
        return {"verdict": self.value, "theorem_tag": self.theorem_tag}


def chaos_verdict(space_kind: str, p: float, c: float, rho: float, kappa=None) -> Verdict:
    """Decision table for T_t^c; kappa = None or all zeros selects the Euclidean statements."""
    rho = _check_rho(rho)
    c = float(c)
    p = float(p)
    if not p >= 1.0:
        raise ParameterError("p must be >= 1")
    kap = () if kappa is None else tuple(float(k) for k in np.atleast_1d(kappa))
    euclid = all(k == 0.0 for k in kap)
    gamma = math.fsum(kap)

    if space_kind == "l_infinity" or p == math.inf:
        if space_kind == "conjugated_lp":
            return Verdict("NotChaotic", "Thm1.3(b)")
        return Verdict("NotChaotic", "Thm1.4(2)" if euclid else "Thm1.5(2)")

    cp = critical_shift(p, rho)
    if space_kind == "conjugated_lp":
        if not euclid:
            raise UnsupportedError("the conjugated semigroup is defined for kappa = 0 only")
        if p <= 2.0:
            return Verdict("NoPeriodicPoints", "Thm1.3(c)")
        if c > cp:
            return Verdict("Chaotic", "Thm1.3(a)")
        if c == cp:
            return Verdict("NotChaotic", "Thm1.3(a)")
        return Verdict("NotHypercyclic", "Thm1.4(3)")

    if space_kind == "plain_l2":
        if p != 2.0:
            raise ParameterError("plain_l2 requires p = 2")
        return Verdict("NotChaotic", "Thm1.5(3)")

    if space_kind == "mixed_p2":
        if abs(2.0 * gamma - round(2.0 * gamma)) > 1e-12:
            raise UnsupportedError("mixed-norm statements need 2 gamma to be an integer")
        if p == 2.0:
            return Verdict("NotChaotic", "Thm1.5(3)")
        if c > cp:
            return Verdict("Chaotic", "Thm1.8(1)")
        if c < cp:
            return Verdict("NotHypercyclic", "Thm1.8(2)")
        return Verdict("Unknown", "Thm1.8")

    if space_kind != "weighted_lp":
        raise UnsupportedError(f"no statement available for space kind {space_kind!r}")

    if p == 2.0:
        if c < cp:
            return Verdict("NotHypercyclic", "Thm1.4(3)") if euclid else Verdict("NotChaotic", "Thm1.5(3)")
        return Verdict("NotChaotic", "Thm1.5(3)")

    if euclid:
        if c > cp:
            return Verdict("Chaotic", "Thm1.4(1)")
        if c < cp:
            return Verdict("NotHypercyclic", "Thm1.4(3)")
        return Verdict("NotChaotic", "Thm1.4(3)")

    if c > cp:
        return Verdict("Chaotic", "Thm1.5(1)")
    if p < 2.0:
        threshold = 2.0 * rho * rho / conjugate_exponent(p)
        if c < threshold:
            return Verdict("NotHypercyclic", "Thm1.6(1)")
    else:
        threshold = 2.0 * rho * rho / p
        if c < threshold:
            return Verdict("NotHypercyclic", "Thm1.6(2)")
    return Verdict("Unknown", "Rem1.7")


def verdict_for(space: WeightedSpaceSpec, c: float) -> Verdict:
    return chaos_verdict(space.norm_kind, space.p, c, space.rho, space.setup.kappa)
