"""Identity checks, norm-decay experiments and machine-readable reports.

Every check is registered under a fixed id together with the statement it
exercises (its theorem tag); ``run_suite`` runs them in registry order and
never aborts on a failing or crashing check.
"""

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import chaos, heat, specfun
from .dunkl import MultiplicitySetup, dunkl_kernel, dunkl_laplacian_apply, dunkl_sphfn, spherical_closed_form
from .errors import ParameterError, SemichaosError
from .separable import SeparableSum, constant_sum, gaussian_sum
from .spaces import (HarmonicBasisElement, WeightedSpaceSpec, default_grid, degree_one_norm, h_coefficients,
                     lp_norm, profile_for, radial_grid, sample, sphere_quadrature, with_values)

PROFILES = ("quick", "full")


@dataclass
class CheckResult:
    check_id: str
    theorem_tag: str
    measured: float
    tolerance: float
    passed: bool
    runtime_ms: int
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class Context:
    full: bool = False
    mass_scale: float = 1.0


# ---------------------------------------------------------------- helpers

def _rel(a, b) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _conj_phi_ratio(setup, lam, rho):
    return lambda y: spherical_closed_form(setup, lam, y) / spherical_closed_form(setup, 1j * rho, y)


# ----------------------------------------------------------------- checks
# each returns (measured, tolerance, detail)

def check_lemma31_1(ctx: Context):
    order = 160 if ctx.full else 120
    worst = 0.0
    cases = [((0.5, 0.5), 1.0, (0.5, 0.5), (0.5, 0.5)),
             ((0.5, 1.0), 0.7, (0.3, -0.5), (0.8, 0.2)),
             ((0.5, 1.0), 1.0, (0.0, 0.0), (0.0, 0.0))]
    for kap, t, x, y in cases:
        worst = max(worst, heat.spectral_kernel_check(MultiplicitySetup(2, kap), t, x, y, order))
    return worst, 1e-4, "spectral representation vs closed kernel"


def check_lemma31_2(ctx: Context):
    setup = MultiplicitySetup(2, (0.5, 1.0))
    worst = 0.0
    for t in (0.1, 1.0):
        for x in ((0.7, 0.4), (-1.2, 0.3), (0.0, 1.5)):
            pts, w = heat.tensor_rule(setup, t, max(abs(v) for v in x))
            k = heat.dunkl_heat_kernel(setup, t, np.array(x), pts, ctx.mass_scale)
            worst = max(worst, abs(math.fsum(k * w) - 1.0))
    return worst, 1e-6, "int Gamma(t,x,y) h^2(y) dy = 1"


def check_lemma31_3(ctx: Context):
    setup = MultiplicitySetup(2, (0.5, 1.0))
    t = s = 0.3
    worst = 0.0
    for x, y in (((0.4, -0.9), (1.1, 0.5)), ((0.0, 0.6), (-0.7, -0.2))):
        x = np.array(x)
        y = np.array(y)
        pts, w = heat.tensor_rule(setup, t, 1.5)
        comp = math.fsum(heat.dunkl_heat_kernel(setup, t, x, pts, ctx.mass_scale)
                         * heat.dunkl_heat_kernel(setup, s, y, pts, ctx.mass_scale) * w)
        direct = heat.dunkl_heat_kernel(setup, t + s, x, y, ctx.mass_scale)
        worst = max(worst, abs(comp - direct) / direct)
    return worst, 1e-5, "Chapman-Kolmogorov at t = s = 0.3"


def check_kappa0_collapse(ctx: Context):
    rng = np.random.default_rng(20261014)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        setup = MultiplicitySetup(n, 0.0)
        t = float(rng.uniform(0.1, 2.0))
        x = rng.uniform(-2, 2, n)
        y = rng.uniform(-2, 2, n)
        worst = max(worst, abs(heat.dunkl_heat_kernel(setup, t, x, y) / heat.gaussian_kernel(t, x, y) - 1.0))
    return worst, 1e-10, "kappa = 0 kernel vs Gaussian on 100 random (t, x, y)"


def _product_j(nu: float, x):
    return specfun.tilde_i(nu, x).value * specfun.tilde_k(nu + 1.0, x).value


def check_ineqJ_bounds(ctx: Context):
    xs = np.logspace(-4, math.log10(50.0), 200 if ctx.full else 60)
    over = 0.0
    for nu in (0.5, 1.0, 1.5, 2.0):
        for x in xs:
            v = _product_j(nu, float(x))
            over = max(over, 0.45 - v, v - 1.05)
    return max(over, 0.0), 0.0, "Itilde_nu Ktilde_{nu+1} within [0.45, 1.05]"


INEQJ_LARGE_X = 500.0


def check_ineqJ_limits(ctx: Context):
    # the large-x value is 1/2 (1 + (2 nu + 1)/(2x) + ...), so a 2% band around 1/2
    # needs x >= 25 (2 nu + 1); at x = 50 the deviation is 2% ... 5% for nu = 1/2 ... 2
    dev = 0.0
    for nu in (0.5, 1.0, 1.5, 2.0):
        dev = max(dev, abs(_product_j(nu, 1e-4) - 1.0), abs(_product_j(nu, INEQJ_LARGE_X) - 0.5) / 0.5)
    return dev, 0.02, f"endpoint limits 1 (x = 1e-4) and 1/2 (x = {INEQJ_LARGE_X:g})"


def _sphere_identity(setup, m, pairs, angular):
    """max relative residual of int E(r w, s eta) Y_m(w) h^2 dsigma vs the Bessel closed form."""
    big_n = setup.big_n
    sq = sphere_quadrature(setup, angular)
    const = 2.0 ** (big_n / 2.0 - 1.0) * math.gamma(big_n / 2.0)
    worst = 0.0
    for r, s, eta in pairs:
        eta = np.asarray(eta, float) / np.linalg.norm(eta)
        vals = np.real(dunkl_kernel(setup, r * sq.nodes, s * eta[None, :]))
        for j in range(1, setup.n + 1) if m == 1 else [0]:
            if m == 0:
                lhs = float(np.sum(sq.weights * vals))
                rhs = const * specfun.tilde_i(big_n / 2.0 - 1.0, r * s).value
            else:
                y = sq.nodes[:, j - 1] / degree_one_norm(setup, j)
                lhs = float(np.sum(sq.weights * vals * y))
                rhs = const * (r * s) * specfun.tilde_i(big_n / 2.0, r * s).value * eta[j - 1] / degree_one_norm(setup, j)
            scale = max(abs(rhs), const * specfun.tilde_i(big_n / 2.0 - 1.0, r * s).value * 1e-3)
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


_SPHERE_PAIRS = [(1.0, 1.0, (0.6, 0.8)), (0.5, 2.0, (1.0, 0.0)), (1.5, 1.3, (-0.3, 0.9)), (2.0, 2.0, (0.7, -0.7))]


def check_eqC(ctx: Context):
    ang = 128 if ctx.full else 64
    worst = 0.0
    for kap in ((0.5, 1.0), (0.0, 0.0), (1.5, 0.25)):
        worst = max(worst, _sphere_identity(MultiplicitySetup(2, kap), 0, _SPHERE_PAIRS, ang))
    worst = max(worst, _sphere_identity(MultiplicitySetup(3, (0.5, 0.5, 1.0)), 0,
                                        [(1.0, 1.0, (0.6, 0.0, 0.8)), (1.2, 1.5, (0.3, -0.5, 0.6))], ang))
    return worst, 1e-6, "sphere average of E(r w, s eta) vs j_{N/2-1}(i r s)"


def check_eqA(ctx: Context):
    ang = 128 if ctx.full else 64
    worst = 0.0
    for kap in ((0.5, 1.0), (0.0, 0.0)):
        worst = max(worst, _sphere_identity(MultiplicitySetup(2, kap), 1, _SPHERE_PAIRS, ang))
    worst = max(worst, _sphere_identity(MultiplicitySetup(3, (0.5, 0.5, 1.0)), 1,
                                        [(1.0, 1.0, (0.6, 0.0, 0.8)), (1.2, 1.5, (0.3, -0.5, 0.6))], ang))
    return worst, 1e-6, "degree-one h-harmonic projection of the Dunkl kernel"


def check_hecke_bochner(ctx: Context):
    setup = MultiplicitySetup(3, 0.0)
    sq = sphere_quadrature(setup, 128 if ctx.full else 64)
    rho = 1.0
    const = 2.0 ** 0.5 * math.gamma(1.5)
    worst = 0.0
    for x in ((2.0, 0.0, 0.0), (1.2, -0.8, 1.31149), (0.3, 0.4, 0.5)):
        x = np.asarray(x)
        r = float(np.linalg.norm(x))
        e = np.exp(rho * sq.nodes @ x)
        for j in range(3):
            lhs = float(np.sum(sq.weights * sq.nodes[:, j] * e))
            rhs = const * x[j] / r * (rho * r) * specfun.tilde_i(1.5, rho * r).value
            worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-3 * const))
    return worst, 1e-6, "int w_j exp(rho x.w) dsigma vs the I_{n/2} closed form"


def check_prop34(ctx: Context):
    setup = MultiplicitySetup(2, (0.5, 1.0))
    space = WeightedSpaceSpec(setup, 2.0, 1.0)
    t = 0.5
    rad = radial_grid(10.0, 128 if ctx.full else 96)
    sph = sphere_quadrature(setup, 64 if ctx.full else 32)
    sl = rad.nodes < 6.0
    worst = 0.0
    for m, odd in ((0, None), (1, 0), (1, 1)):
        g = gaussian_sum(2, 0.6, odd)
        f = sample(space, rad, sph, g, source=g)
        tf = heat.apply_Tt(space, heat.SemigroupParams(t, 0.0, 1.0), f)
        j = 1 if odd is None else odd + 1
        lhs = h_coefficients(setup, tf, m)[j - 1].values
        rhs = heat.coeff_via_bessel(setup, t, 1.0, m, j, f).values
        worst = max(worst, float(np.max(np.abs(lhs - rhs)[sl]) / np.max(np.abs(lhs)[sl])))
    return worst, 1e-4, "harmonic coefficient of T_t f vs r^m B_t (r^-m f_m)"


def check_bessel_mass(ctx: Context):
    rad = radial_grid(14.0, 128)
    worst = 0.0
    for alpha in (0.0, 0.5, 1.5, 2.0):
        prof = profile_for(MultiplicitySetup(1, 0.0), rad, np.ones(rad.size))
        out = heat.bessel_semigroup_apply(alpha, 0.5, prof)
        sl = rad.nodes < 6.0
        worst = max(worst, float(np.max(np.abs(out.values[sl] - 1.0))))
    return worst, 1e-6, "B_t 1 = 1"


def check_bessel_eigen(ctx: Context):
    rad = radial_grid(30.0, 256)
    worst = 0.0
    t = 0.5
    for alpha, lam in ((0.0, 1.3), (1.5, 0.8)):
        vals = np.array([specfun.spherical_fn(lam, float(s), alpha).value.real for s in rad.nodes])
        prof = with_values(profile_for(MultiplicitySetup(1, 0.0), rad, vals), vals)
        out = heat.bessel_semigroup_apply(alpha, t, prof)
        sl = rad.nodes < 5.0
        worst = max(worst, float(np.max(np.abs(out.values[sl] - math.exp(-t * lam * lam) * vals[sl]))))
    return worst, 1e-5, "B_t j_alpha(lambda .) = exp(-t lambda^2) j_alpha(lambda .)"


def check_eigen_dunkl(ctx: Context):
    rng = np.random.default_rng(7)
    setup = MultiplicitySetup(2, (0.5, 1.0))
    lam = 0.7 + 0.2j
    sq = sphere_quadrature(setup, 64)
    f = lambda y: dunkl_sphfn(setup, lam, y, sq)
    worst = 0.0
    for _ in range(20):
        x = rng.uniform(-2, 2, 2)
        fx = f(x)
        worst = max(worst, abs(dunkl_laplacian_apply(setup, f, x) - lam * lam * fx) / max(1.0, abs(fx)))
    return worst, 1e-4, "Delta_kappa phi_lambda = lambda^2 phi_lambda by finite differences"


def check_eigen_modified(ctx: Context):
    rng = np.random.default_rng(8)
    worst = 0.0
    for n in (2, 3):
        setup = MultiplicitySetup(n, 0.0)
        space = WeightedSpaceSpec(setup, 4.0, 1.0)
        lam = 2.0 * (1 + 1j) / 3.0
        g = _conj_phi_ratio(setup, lam, 1.0)
        for _ in range(10):
            x = rng.uniform(-2, 2, n)
            gx = g(x)
            worst = max(worst, abs(heat.modified_laplacian_apply(space, g, x) - lam * lam * gx) / abs(gx))
    return worst, 1e-4, "modified Laplacian eigenrelation for phi_lambda / phi_{i rho}"


def check_conjugated_eigen(ctx: Context):
    setup = MultiplicitySetup(2, 0.0)
    space = WeightedSpaceSpec(setup, 4.0, 1.0, "conjugated_lp")
    rho = 1.0
    worst = 0.0
    for lam, t in ((1.0, 0.5), (0.6 + 0.3j, 1.5)):
        rad, sph = default_grid(space, 64, 32)
        num = heat.phi_plane_waves(setup, lam)
        den = heat.phi_i_rho_closed(setup, rho)
        from .separable import Quotient
        src = Quotient(num, den)
        f = sample(space, rad, sph, src, source=src)
        out = heat.conjugated_apply(space, heat.SemigroupParams(t, 0.0, rho), f)
        expect = np.exp(-t * (lam * lam + rho * rho)) * f.values
        worst = max(worst, lp_norm(space, out.like(out.values - expect)) / lp_norm(space, f.like(expect)))
    return worst, 1e-5, "conjugated semigroup on phi_lambda / phi_{i rho}"


# ----------------------------------------------------------- decay experiments

@dataclass
class DecayExperiment:
    space: WeightedSpaceSpec
    c: float
    f_id: str
    t_grid: np.ndarray
    norms: np.ndarray
    slope: float
    lam: complex = 0j

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "norm", "log_norm"])
        for t, nv in zip(self.t_grid, self.norms):
            w.writerow([format(float(t), ".17g"), format(float(nv), ".17g"), format(math.log(nv), ".17g")])
        return buf.getvalue()


TEST_FUNCTIONS = ("gaussian", "bump", "eigen")


def _bump_factor(y):
    y = np.asarray(y, dtype=float)
    out = np.zeros(y.shape)
    inside = np.abs(y) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - y[inside] ** 2))
    return out[:, None]


def test_function_source(setup: MultiplicitySetup, f_id: str, lam: complex = 0j):
    if f_id == "gaussian":
        return gaussian_sum(setup.n, 1.0)
    if f_id == "bump":
        return SeparableSum(np.ones(1), [_bump_factor] * setup.n, 0.0, 0.25)
    if f_id == "eigen":
        if complex(lam) == 0:
            return constant_sum(setup.n, 1.0)
        return heat.phi_plane_waves(setup, complex(lam))
    raise ParameterError(f"unknown test function {f_id!r}; expected one of {', '.join(TEST_FUNCTIONS)}")


def theorem_rate(space: WeightedSpaceSpec) -> float:
    """Exponential decay rate of the operator norm of T_t."""
    p, rho = space.p, space.rho
    if p == math.inf:
        raise ParameterError("no decay rate at p = inf")
    cp = 4.0 * rho * rho / (p * space.p_conj) if p > 1 else 0.0
    if space.setup.is_euclidean or space.norm_kind == "mixed_p2":
        return cp
    return 2.0 * rho * rho / space.p_conj if p <= 2 else 2.0 * rho * rho / p


def fit_slope(t_grid, norms) -> float:
    t = np.asarray(t_grid, dtype=float)
    v = np.log(np.asarray(norms, dtype=float))
    if t.size < 2:
        raise ParameterError("a slope needs at least two t values")
    half = min(t.size // 2, t.size - 2)
    return float(np.polyfit(t[half:], v[half:], 1)[0])


def decay_experiment(space: WeightedSpaceSpec, c: float, f_id: str, t_grid, lam: complex = 0j,
                     grid=None) -> DecayExperiment:
    """Norms of T_t^c f over a t grid and the least-squares log-slope over its last half."""
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 2 or np.any(np.diff(t_grid) <= 0) or t_grid[0] <= 0:
        raise ParameterError("t grid must be strictly increasing, positive, with >= 2 points")
    setup = space.setup
    src = test_function_source(setup, f_id, lam)
    rad, sph = default_grid(space, 64, 32) if grid is None else grid
    if space.norm_kind == "conjugated_lp":
        from .separable import Quotient

        src = Quotient(src, lambda pts: np.ones(pts.shape[0])) if f_id != "eigen" else \
            Quotient(src, heat.phi_i_rho_closed(setup, space.rho))
    f = sample(space, rad, sph, src, source=src)
    norms = []
    for t in t_grid:
        params = heat.SemigroupParams(float(t), float(c), space.rho)
        if space.norm_kind == "conjugated_lp":
            g = heat.conjugated_apply(space, params, f).scaled(math.exp(c * t))
        else:
            g = heat.apply_Ttc(space, params, f)
        nv = lp_norm(space, g)
        norms.append(max(nv, 1e-300))
    norms = np.asarray(norms)
    return DecayExperiment(space, float(c), f_id, t_grid, norms, fit_slope(t_grid, norms), complex(lam))


def _decay_check(kap, p, f_id, kind="weighted_lp"):
    def run(ctx: Context):
        n = 2
        space = WeightedSpaceSpec(MultiplicitySetup(n, kap), p, 1.0, kind)
        ts = np.linspace(0.5, 8.0, 16 if ctx.full else 8)
        exp = decay_experiment(space, 0.0, f_id, ts)
        rate = theorem_rate(space)
        return exp.slope + rate, 0.1 * space.rho ** 2, f"slope {exp.slope:.6g} vs rate {rate:.6g}"
    return run


def check_decay_eigen(ctx: Context):
    worst = 0.0
    for kap, lam, c in ((0.0, 0j, 0.0), (0.0, 0.3 + 0.2j, 0.5), ((0.5, 1.0), 0.4j, 1.0)):
        space = WeightedSpaceSpec(MultiplicitySetup(2, kap), 4.0, 1.0)
        exp = decay_experiment(space, c, "eigen", np.linspace(0.5, 8.0, 8), lam)
        omega = chaos.ComplexFrequency(lam, 1.0).omega(c).real
        worst = max(worst, abs(exp.slope + omega))
    return worst, 1e-3, "eigenfunction log-norm slope equals -Re omega_c"


# ------------------------------------------------------------- witness checks

def _space(kap, p=4.0):
    return WeightedSpaceSpec(MultiplicitySetup(2, kap), p, 1.0)


def check_witness_periodic_euclid(ctx: Context):
    w = chaos.make_periodic_witness(_space(0.0), 1.0)
    return w.residuals["return"], 1e-6, f"period {w.period:.6g}"


def check_witness_periodic_dunkl(ctx: Context):
    w = chaos.make_periodic_witness(_space((0.5, 1.0)), 1.0)
    return w.residuals["return"], 1e-6, f"period {w.period:.6g}"


def check_witness_binf_norm(ctx: Context):
    w = chaos.make_binf_witness(_space(0.0), 1.0, 1e-3)
    return w.residuals["f_t_norm"], 1e-3, f"t = {w.residuals['t']:.6g}"


def check_witness_binf_return(ctx: Context):
    worst = 0.0
    for kap in (0.0, (0.5, 1.0)):
        w = chaos.make_binf_witness(_space(kap), 1.0, 1e-3)
        worst = max(worst, w.residuals["return"])
    return worst, 1e-5, "T_t^c f_t = g"


def check_witness_b0(ctx: Context):
    w = chaos.make_b0_witness(_space(0.0), 1.0)
    bad = 0.0 if w.residuals["decreasing"] else math.inf
    return max(w.residuals["ratio"], bad), 1e-4, "norm ratios over t in {1, 2, 4}"


def check_witness_refused(ctx: Context):
    refused = 0
    for kap in (0.0, (0.5, 1.0)):
        sp = _space(kap)
        for maker in (chaos.make_periodic_witness, chaos.make_binf_witness, chaos.make_b0_witness):
            try:
                maker(sp, sp.c_p)
            except ParameterError:
                refused += 1
    return float(6 - refused), 0.0, "constructions at c = c_p must raise a parameter error"


# ------------------------------------------------------------ verdict table

VERDICT_CASES = [
    # (space kind, p, c, kappa, expected verdict, expected tag)
    ("weighted_lp", 4.0, 1.0, (0.0, 0.0), "Chaotic", "Thm1.4(1)"),
    ("weighted_lp", 4.0, 0.5, (0.0, 0.0), "NotHypercyclic", "Thm1.4(3)"),
    ("weighted_lp", 4.0, 0.75, (0.0, 0.0), "NotChaotic", "Thm1.4(3)"),
    ("weighted_lp", 1.0, 0.1, (0.0, 0.0), "Chaotic", "Thm1.4(1)"),
    ("l_infinity", math.inf, 5.0, (0.0, 0.0), "NotChaotic", "Thm1.4(2)"),
    ("conjugated_lp", 4.0, 1.0, (0.0, 0.0), "Chaotic", "Thm1.3(a)"),
    ("conjugated_lp", 4.0, 0.75, (0.0, 0.0), "NotChaotic", "Thm1.3(a)"),
    ("conjugated_lp", 1.5, 2.0, (0.0, 0.0), "NoPeriodicPoints", "Thm1.3(c)"),
    ("conjugated_lp", math.inf, 1.0, (0.0, 0.0), "NotChaotic", "Thm1.3(b)"),
    ("weighted_lp", 4.0, 1.0, (0.5, 0.5), "Chaotic", "Thm1.5(1)"),
    ("l_infinity", math.inf, 1.0, (0.5, 0.5), "NotChaotic", "Thm1.5(2)"),
    ("plain_l2", 2.0, 3.0, (0.5, 0.5), "NotChaotic", "Thm1.5(3)"),
    ("weighted_lp", 4.0, 0.4, (0.5, 0.5), "NotHypercyclic", "Thm1.6(2)"),
    ("weighted_lp", 4.0 / 3.0, 0.4, (0.5, 0.5), "NotHypercyclic", "Thm1.6(1)"),
    ("weighted_lp", 4.0, 0.6, (0.5, 0.5), "Unknown", "Rem1.7"),
    ("weighted_lp", 4.0 / 3.0, 0.6, (0.5, 0.5), "Unknown", "Rem1.7"),
    ("mixed_p2", 4.0, 0.75, (0.5, 0.5), "Unknown", "Thm1.8"),
    ("mixed_p2", 4.0, 1.0, (0.5, 0.5), "Chaotic", "Thm1.8(1)"),
    ("mixed_p2", 4.0, 0.5, (0.5, 0.5), "NotHypercyclic", "Thm1.8(2)"),
]


def check_verdict_table(ctx: Context):
    bad = []
    for kind, p, c, kap, want, tag in VERDICT_CASES:
        got = chaos.chaos_verdict(kind, p, c, 1.0, kap)
        if (got.value, got.theorem_tag) != (want, tag):
            bad.append(f"{kind},{p},{c}:{got.value}/{got.theorem_tag}")
    return float(len(bad)), 0.0, "; ".join(bad) or f"{len(VERDICT_CASES)} cells"


def check_verdict_coherence(ctx: Context):
    bad = 0
    for p in (1.0, 4.0 / 3.0, 4.0, 8.0):
        cp = chaos.critical_shift(p, 1.0)
        for c in (0.5 * cp, cp, 1.5 * cp):
            chaotic = chaos.chaos_verdict("weighted_lp", p, c, 1.0).value == "Chaotic"
            infinite = chaos.ir_axis_intersection(p, 1.0, c)["count"] == "infinite"
            bad += chaotic != infinite
    return float(bad), 0.0, "Chaotic iff the imaginary-axis intersection is infinite"


# ---------------------------------------------------------- spectral geometry

def _via_root(p, rho, z) -> bool:
    # z = lambda^2 + rho^2 has roots +-lambda with equal |Im lambda|
    lam = np.sqrt(complex(z) - rho * rho)
    return abs(lam.imag) <= chaos.gamma_of(p) * rho


def check_region_closed_form(ctx: Context):
    rng = np.random.default_rng(11)
    bad = 0
    checked = 0
    for p in (4.0, 4.0 / 3.0, 8.0, 1.0):
        for _ in range(250):
            z = complex(rng.uniform(-1, 4), rng.uniform(-3, 3))
            margin = z.real - float(chaos.boundary_u(p, 1.0, z.imag))
            if abs(margin) < 1e-9:
                continue
            checked += 1
            bad += chaos.region_contains(p, 1.0, z) != _via_root(p, 1.0, z)
    for p, c in ((4.0, 0.5), (4.0, 0.75), (4.0, 1.0), (8.0, 2.0)):
        got = chaos.ir_axis_intersection(p, 1.0, c)
        cp = chaos.critical_shift(p, 1.0)
        vs = np.linspace(-3, 3, 6001)
        inside = [v for v in vs if chaos.region_contains(p, 1.0, complex(c, v))]
        if c < cp:
            bad += got["count"] != 0 or bool(inside)
        elif c == cp:
            bad += got["count"] != 1
        else:
            bad += got["count"] != "infinite" or abs(max(inside) - got["v_max"]) > 1e-3
    return float(bad), 0.0, f"{checked} random points vs square-root route"


def check_region_bruteforce(ctx: Context):
    """Sample lambda in the closed strip; images must lie in the region and reach its boundary."""
    worst = 0.0
    count = 100_000
    for p in (4.0, 4.0 / 3.0, 8.0):
        rng = np.random.default_rng(12)
        g = chaos.gamma_of(p)
        xi = rng.uniform(-2.0, 2.0, count)
        # density growing toward the strip edges so the boundary is well sampled
        eta = g * rng.uniform(0, 1, count) ** 0.125 * rng.choice([-1.0, 1.0], count)
        z = (xi + 1j * eta) ** 2 + 1.0
        outside = float(np.max(chaos.boundary_u(p, 1.0, z.imag) - z.real))
        inside = np.array([chaos.region_contains(p, 1.0, complex(v)) for v in z[:2000]])
        missed = 0.0 if inside.all() else math.inf
        # every band of imaginary parts must contain samples within 1e-3 of the boundary
        margin = z.real - chaos.boundary_u(p, 1.0, z.imag)
        edges = np.linspace(-2.0 * g, 2.0 * g, 41)
        idx = np.digitize(z.imag, edges)
        gap = 0.0
        for b in range(1, edges.size):
            sel = idx == b
            gap = max(gap, float(np.min(margin[sel])) if sel.any() else math.inf)
        worst = max(worst, outside, missed, gap)
    return worst, 1e-3, "strip-image sampler vs closed-form boundary"


def check_point_spectrum(ctx: Context):
    setup = MultiplicitySetup(2, 0.0)
    bad = 0
    bad += chaos.point_spectrum_contains(setup, 4.0, 1.0, 0.75) is not False
    bad += chaos.point_spectrum_contains(setup, 4.0, 1.0, 1.0) is not True
    bad += chaos.point_spectrum_contains(setup, 2.0, 1.0, 2.0) is not False
    bad += chaos.region_contains(4.0, 1.0, 0.75) is not True
    return float(bad), 0.0, "interior vs closed region"


def check_membership_converge(ctx: Context):
    space = WeightedSpaceSpec(MultiplicitySetup(2, 0.0), 8.0, 1.0)
    rep = chaos.membership_report(space, 0.9 * space.gamma_p * space.rho * 1j)
    return abs(rep["ratios"][-1] - 1.0), 1e-3, f"norms {rep['norms']}"


def check_membership_diverge(ctx: Context):
    space = WeightedSpaceSpec(MultiplicitySetup(2, 0.0), 8.0, 1.0)
    rep = chaos.membership_report(space, 1.1 * space.gamma_p * space.rho * 1j)
    measured = 1.5 / rep["growth"] if rep["monotone"] else math.inf
    return measured, 1.0, f"growth {rep['growth']:.6g}"


# --------------------------------------------------------------- registry

REGISTRY = [
    ("lemma31_1", "Lem3.1(1)", check_lemma31_1),
    ("lemma31_2", "Lem3.1(2)", check_lemma31_2),
    ("lemma31_3", "Lem3.1(3)", check_lemma31_3),
    ("kappa0_collapse", "EqB", check_kappa0_collapse),
    ("ineqJ_bounds", "EqJ", check_ineqJ_bounds),
    ("ineqJ_limits", "EqJ", check_ineqJ_limits),
    ("eqC", "EqC", check_eqC),
    ("eqA", "EqA", check_eqA),
    ("hecke_bochner", "HeckeBochner", check_hecke_bochner),
    ("prop34", "Prop3.4", check_prop34),
    ("bessel_mass", "EqD-E", check_bessel_mass),
    ("bessel_eigen", "EqD-E", check_bessel_eigen),
    ("eigen_dunkl", "DunklEigen", check_eigen_dunkl),
    ("eigen_modified", "ModifiedLaplacian", check_eigen_modified),
    ("conjugated_eigen", "Thm1.3", check_conjugated_eigen),
    ("decay_euclid_p4_3", "Thm2.1", _decay_check(0.0, 4.0 / 3.0, "gaussian")),
    ("decay_euclid_p4", "Thm2.1", _decay_check(0.0, 4.0, "bump")),
    ("decay_dunkl_p1", "Thm3.2", _decay_check((0.5, 0.5), 1.0, "gaussian")),
    ("decay_dunkl_p4", "Thm3.2", _decay_check((0.5, 1.0), 4.0, "gaussian")),
    ("decay_mixed_p4", "Thm3.7", _decay_check((0.5, 0.5), 4.0, "gaussian", "mixed_p2")),
    ("decay_conjugated_p4", "Thm1.3", _decay_check(0.0, 4.0, "gaussian", "conjugated_lp")),
    ("decay_eigen", "Thm2.1", check_decay_eigen),
    ("witness_periodic_euclid", "Prop2.9", check_witness_periodic_euclid),
    ("witness_periodic_dunkl", "Prop3.11", check_witness_periodic_dunkl),
    ("witness_binf_norm", "Prop2.9", check_witness_binf_norm),
    ("witness_binf_return", "Prop3.11", check_witness_binf_return),
    ("witness_b0", "Prop2.9", check_witness_b0),
    ("witness_refused", "Thm1.4(3)", check_witness_refused),
    ("verdict_table", "Thm1.3-1.8", check_verdict_table),
    ("verdict_coherence", "Thm1.4", check_verdict_coherence),
    ("region_closed_form", "Thm2.2", check_region_closed_form),
    ("region_bruteforce", "Thm2.2", check_region_bruteforce),
    ("point_spectrum", "Thm3.10", check_point_spectrum),
    ("membership_converge", "Thm3.10", check_membership_converge),
    ("membership_diverge", "Thm3.10", check_membership_diverge),
]

IDENTITY_IDS = ("lemma31_1", "lemma31_2", "lemma31_3", "eqA", "eqC", "prop34", "ineqJ_bounds", "ineqJ_limits",
                "hecke_bochner", "kappa0_collapse", "bessel_mass", "bessel_eigen", "eigen_dunkl",
                "eigen_modified", "conjugated_eigen")

TRACEABILITY = {cid: tag for cid, tag, _ in REGISTRY}


def _run_one(check_id: str, tag: str, fn, ctx: Context) -> CheckResult:
    start = time.perf_counter()
    try:
        measured, tol, detail = fn(ctx)
        measured = float(measured)
        passed = bool(measured <= tol)
    except (SemichaosError, ArithmeticError, ValueError) as exc:
        measured, tol, detail, passed = math.inf, math.nan, f"{type(exc).__name__}: {exc}", False
    ms = int(round(1000 * (time.perf_counter() - start)))
    return CheckResult(check_id, tag, measured, tol, passed, ms, detail)


def identity_report(identity_id: str, full: bool = False) -> CheckResult:
    if identity_id == "ineqJ":
        a = identity_report("ineqJ_bounds", full)
        b = identity_report("ineqJ_limits", full)
        return b if not b.passed or a.passed else a
    for cid, tag, fn in REGISTRY:
        if cid == identity_id and cid in IDENTITY_IDS:
            return _run_one(cid, tag, fn, Context(full=full))
    raise ParameterError(f"unknown identity id {identity_id!r}; known: {', '.join(IDENTITY_IDS + ('ineqJ',))}")


def run_suite(profile: str = "quick", mass_scale: float = 1.0, only=None) -> list[CheckResult]:
    if profile not in PROFILES:
        raise ParameterError(f"profile must be one of {', '.join(PROFILES)}, got {profile!r}")
    ctx = Context(full=profile == "full", mass_scale=float(mass_scale))
    wanted = None if only is None else set(only)
    if wanted is not None:
        unknown = wanted - set(TRACEABILITY)
        if unknown:
            raise ParameterError(f"unknown check ids: {', '.join(sorted(unknown))}")
    return [_run_one(cid, tag, fn, ctx) for cid, tag, fn in REGISTRY if wanted is None or cid in wanted]


def report_json(profile: str, results: list[CheckResult], started_at: str | None = None) -> str:
    if started_at is None:
        started_at = datetime.now(timezone.utc).replace(microsecond=0).isoformat()
    doc = {"profile": profile, "started_at": started_at, "results": [r.as_dict() for r in results]}
    return json.dumps(doc, indent=2, sort_keys=False)
