"""Bessel-family special functions of real order.

Everything is built on the normalized Bessel function

    j_nu(z) = 2^nu Gamma(nu+1) J_nu(z) / z^nu = sum_k (-z^2/4)^k / (k! (nu+1)_k),

which is entire and even in z (so j_nu(0) = 1), and on the Macdonald
function K_nu.

Strategy for j_nu at complex argument z:

    |z| <= 12                        power series
    Hankel terms drop below 1e-16    large-argument asymptotic expansion
    otherwise                        power series or Miller backward
                                     recurrence, whichever reports the
                                     smaller error bound

K_nu uses the matching asymptotic expansion for large x and, elsewhere,
the integral K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt summed by
the trapezoidal rule (the integrand is analytic in a strip, so the rule
converges geometrically in the step).

Scalar routines return an EvalResult whose ``abs_error_est`` is the size
of the first neglected term plus a rounding bound proportional to the
sum of absolute values of the terms.  The vectorized helpers at the end
of the module serve the kernel and grid code and do not carry error
estimates.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EnvelopeError, ParameterError, PoleError

EPS = float(np.finfo(float).eps)
SERIES_RADIUS = 12.0
MAX_ABS_ARG = 1.0e4
EXP_CAP = 700.0
_ASYM_TOL = 1.0e-16


@dataclass(frozen=True)
class EvalResult:
    value: complex
    abs_error_est: float

    @property
    def real(self) -> float:
        return float(np.real(self.value))


def check_order(nu) -> float:
    try:
        nu = float(nu)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"order must be a real number, got {nu!r}") from exc
    if not math.isfinite(nu) or nu < -0.5:
        raise DomainError(f"order must be finite and >= -1/2, got {nu}")
    return nu


def _canonical(z: complex) -> complex:
    # representative of {z, -z}; j_nu is even so this fixes the branch
    if z.real < 0 or (z.real == 0 and z.imag < 0):
        return -z
    return z


def _check_arg(z: complex) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"argument must be finite, got {z}")
    if abs(z) > MAX_ABS_ARG:
        raise EnvelopeError(f"|z| = {abs(z):.3g} exceeds the evaluation envelope {MAX_ABS_ARG:g}")
    if abs(z.imag) > EXP_CAP:
        raise EnvelopeError(f"|Im z| = {abs(z.imag):.3g} overflows double precision")
    return z


# ---------------------------------------------------------------- expansions

def _series_jnorm(nu: float, z: complex):
    """Power series of j_nu; returns (value, abs error)."""
    q = -0.25 * z * z
    aq = abs(q)
    term = 1.0 + 0.0j
    total = term
    size = 1.0
    k = 0
    while True:
        k += 1
        term = term * q / (k * (k + nu))
        total += term
        size += abs(term)
        if k * (k + nu) > aq and abs(term) <= 0.25 * EPS * size:
            break
        if k > 5000:
            raise EnvelopeError("power series failed to converge")
    nxt = abs(term * q / ((k + 1) * (k + 1 + nu)))
    return total, nxt + 2.0 * EPS * size


def _asym_terms(nu: float, z, tol: float = _ASYM_TOL):
    """Terms a_k(nu) / z^k of the Hankel expansion.

    Returns (terms, neglected) where neglected is the magnitude of the
    first term left out, relative to the leading term.  The sum is cut at
    the smallest term when the expansion starts to diverge.
    """
    mu = 4.0 * nu * nu
    terms = [1.0 + 0.0j if isinstance(z, complex) else 1.0]
    term = terms[0]
    k = 0
    while True:
        k += 1
        fac = (mu - (2 * k - 1) ** 2) / (8.0 * k)
        if fac == 0.0:
            return terms, 0.0
        new = term * fac / z
        if abs(new) <= tol:
            return terms, abs(new)
        if abs(new) >= abs(term):
            return terms, abs(term)
        terms.append(new)
        term = new
        if k > 400:
            return terms, abs(term)


def _hankel_jnorm(nu: float, z: complex):
    """Hankel asymptotics for j_nu, Re z >= 0; returns (value, abs err, rel err)."""
    terms, neglected = _asym_terms(nu, z)
    p = 0.0j
    q = 0.0j
    for k, t in enumerate(terms):
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * t
        else:
            q += sign * t
    chi = z - (0.5 * nu + 0.25) * math.pi
    amp = cmath.sqrt(2.0 / (math.pi * z))
    jval = amp * (p * cmath.cos(chi) - q * cmath.sin(chi))
    pref = cmath.exp(math.lgamma(nu + 1.0) + nu * cmath.log(2.0 / z))
    scale = abs(pref * amp) * math.exp(abs(z.imag))
    # the trigonometric factors lose about |z| ulps of phase
    rel = neglected + 8.0 * EPS * len(terms) + EPS * abs(z)
    return pref * jval, scale * rel, rel


def _miller_once(nu: float, z: complex, extra: int):
    """One backward sweep; returns (f_steps, f_0, f_1, neumann_sum, neumann_size)."""
    base = nu - math.floor(nu) if nu >= 0.0 else nu
    steps = int(round(nu - base))
    az = abs(z)
    top = steps + int(az + 30 + 6.0 * math.sqrt(az)) + extra
    f_next = 0.0j
    f_cur = 1.0e-30 + 0.0j
    target = 0.0j
    f1 = 0.0j
    total = 0.0j
    size = 0.0
    lg_base = math.lgamma(base + 1.0)
    for m in range(top, -1, -1):
        if m == steps:
            target = f_cur
        if m == 1:
            f1 = f_cur
        if m % 2 == 0:
            k = m // 2
            if k == 0:
                c = math.exp(lg_base)
            else:
                c = (base + 2 * k) * math.exp(math.lgamma(base + k) - math.lgamma(k + 1.0))
            total += c * f_cur
            size += abs(c * f_cur)
        if m == 0:
            break
        f_prev = (2.0 * (base + m) / z) * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        if abs(f_cur) > 1.0e250:
            f_cur *= 1.0e-250
            f_next *= 1.0e-250
            target *= 1.0e-250
            f1 *= 1.0e-250
            total *= 1.0e-250
            size *= 1.0e-250
    return target, f_cur, f1, total, size


def _hankel_bessel(nu: float, z: complex):
    """J_nu(z) and its absolute error from the Hankel expansion."""
    jv, err, rel = _hankel_jnorm(nu, z)
    pref = cmath.exp(nu * cmath.log(z / 2.0) - math.lgamma(nu + 1.0))
    return pref * jv, abs(pref) * err, rel


def _miller_jnorm(nu: float, z: complex):
    """Backward recurrence for j_nu.

    The unnormalized sweep is scaled either by the Neumann series
    (z/2)^b = sum_k (b + 2k) Gamma(b + k) / k! J_{b+2k}(z) or, when that
    sum cancels, by J_b and J_{b+1} from the Hankel expansion (b is the
    fractional part of nu).
    """
    base = nu - math.floor(nu) if nu >= 0.0 else nu
    steps = int(round(nu - base))
    # j_nu = Gamma(nu+1) (2/z)^nu J_nu  and  J_nu = (z/2)^b * target / sum
    pref_neumann = cmath.exp(math.lgamma(nu + 1.0) + steps * cmath.log(2.0 / z))
    pref_j = cmath.exp(math.lgamma(nu + 1.0) + nu * cmath.log(2.0 / z))
    sweeps = [_miller_once(nu, z, extra) for extra in (0, 25)]
    options = []

    vals = [pref_neumann * t / tot for t, _, _, tot, _ in sweeps]
    t, f0, f1, tot, size = sweeps[1]
    rel_cond = 8.0 * EPS * size / abs(tot) if tot != 0 else math.inf
    if rel_cond <= 1.0e-6:
        options.append((abs(vals[0] - vals[1]) + rel_cond * abs(vals[1]), vals[1]))

    jb, eb, rb = _hankel_bessel(base, z)
    jb1, eb1, rb1 = _hankel_bessel(base + 1.0, z)
    if max(rb, rb1) <= 1.0e-12:
        hv = []
        for t, f0, f1, _, _ in sweeps:
            m = max(abs(f0), abs(f1))
            g0, g1 = f0 / m, f1 / m
            den = abs(g0) ** 2 + abs(g1) ** 2
            scale = (jb * g0.conjugate() + jb1 * g1.conjugate()) / den
            hv.append(pref_j * scale * (t / m))
        jscale = math.hypot(abs(jb), abs(jb1))
        rel = (eb + eb1) / jscale if jscale > 0 else math.inf
        options.append((abs(hv[0] - hv[1]) + (rel + 16.0 * EPS) * abs(hv[1]), hv[1]))
    if not options:
        return vals[1], math.inf
    err, val = min(options, key=lambda o: o[0])
    return val, err + EPS * (abs(z) + 16.0) * abs(val)


def _jnorm_scalar(nu: float, z: complex):
    z = _check_arg(z)
    w = _canonical(z)
    if w == 0:
        return 1.0 + 0.0j, 0.0
    if w.real == 0.0:
        # purely imaginary argument: positive series or the I-asymptotics
        val, rel = _itilde_scaled_scalar(nu, w.imag)
        logv = w.imag + nu * math.log(2.0) + math.lgamma(nu + 1.0) + math.log(val)
        if logv > 709.0:
            raise EnvelopeError("normalized Bessel value overflows")
        mag = math.exp(logv)
        return complex(mag, 0.0), abs(mag) * (rel + EPS * abs(logv))
    if abs(w) <= SERIES_RADIUS:
        v, e = _series_jnorm(nu, w)
        return v, e
    hv, he, hrel = _hankel_jnorm(nu, w)
    if hrel <= 1.0e-13 + EPS * abs(w):
        return hv, he
    options = [(he, hv)]
    if abs(w) - abs(w.imag) <= 40.0:
        sv, se = _series_jnorm(nu, w)
        options.append((se, sv))
    mv, me = _miller_jnorm(nu, w)
    options.append((me, mv))
    err, val = min(options, key=lambda t: t[0])
    return val, err


# ------------------------------------------------------ modified function I

def _itilde_scaled_scalar(nu: float, x: float):
    """Return (Itilde_nu(x) exp(-x), relative error) for x >= 0."""
    if x == 0.0:
        return math.exp(-nu * math.log(2.0) - math.lgamma(nu + 1.0)), EPS
    if x > 20.0:
        # the exp(-x) companion of the expansion is below 1e-17 relative here
        terms, neglected = _asym_terms(nu, x)
        if neglected <= _ASYM_TOL:
            s = sum((-1.0) ** k * t for k, t in enumerate(terms))
            val = math.exp(-nu * math.log(x)) * s / math.sqrt(2.0 * math.pi * x)
            return val, neglected + 8.0 * EPS * len(terms)
    if x > EXP_CAP:
        raise EnvelopeError(f"modified Bessel series at x = {x:.3g} overflows")
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if k * (k + nu) > q and term <= 0.25 * EPS * total:
            break
        if k > 5000:
            raise EnvelopeError("modified Bessel series failed to converge")
    nxt = term * q / ((k + 1) * (k + 1 + nu))
    logpref = -x - nu * math.log(2.0) - math.lgamma(nu + 1.0)
    return math.exp(logpref + math.log(total)), nxt / total + 4.0 * EPS * math.sqrt(k)


def _check_real_arg(x) -> float:
    try:
        x = float(x)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"argument must be real, got {x!r}") from exc
    if not math.isfinite(x):
        raise DomainError(f"argument must be finite, got {x}")
    if x > MAX_ABS_ARG:
        raise EnvelopeError(f"x = {x:.3g} exceeds the evaluation envelope {MAX_ABS_ARG:g}")
    return x


def tilde_i(nu, x) -> EvalResult:
    """Itilde_nu(x) = I_nu(x) / x^nu for x >= 0."""
    nu = check_order(nu)
    x = _check_real_arg(x)
    if x < 0:
        raise DomainError("tilde_i needs x >= 0")
    val, rel = _itilde_scaled_scalar(nu, x)
    if x + math.log(val) > 709.0:
        raise EnvelopeError(f"Itilde at x = {x:.3g} overflows")
    v = val * math.exp(x)
    return EvalResult(v, abs(v) * rel)


def bessel_i(nu, x) -> EvalResult:
    """Modified Bessel function I_nu(x) for real x >= 0."""
    nu = check_order(nu)
    x = _check_real_arg(x)
    if x < 0:
        raise DomainError("bessel_i needs x >= 0")
    if x == 0.0:
        if nu == 0.0:
            return EvalResult(1.0, 0.0)
        if nu > 0.0:
            return EvalResult(0.0, 0.0)
        raise PoleError("I_nu(0) is infinite for negative order")
    val, rel = _itilde_scaled_scalar(nu, x)
    logv = x + math.log(val) + nu * math.log(x)
    if logv > 709.0:
        raise EnvelopeError(f"I_nu({x:.3g}) overflows")
    v = math.exp(logv)
    return EvalResult(v, v * rel)


# ------------------------------------------------------ Macdonald function K

def _k_parts(nu: float, x: float):
    """K_nu(x) = mantissa * exp(logscale); returns (logscale, mantissa, rel err)."""
    nu = abs(nu)
    if x >= SERIES_RADIUS:
        terms, neglected = _asym_terms(nu, x)
        if neglected <= _ASYM_TOL:
            s = math.fsum(terms)
            return -x, math.sqrt(math.pi / (2.0 * x)) * s, neglected + 8.0 * EPS * len(terms)
    tpk = math.asinh(nu / x)

    def logg(t):
        a = nu * t
        return -x * (math.cosh(t) - 1.0) + a + math.log1p(math.exp(-2.0 * a)) - math.log(2.0)

    lpk = logg(tpk)
    curv = x * math.cosh(tpk)
    h = min(0.1, 0.5 / math.sqrt(curv)) if curv > 0 else 0.1
    total = 0.5 * math.exp(logg(0.0) - lpk)
    k = 0
    last = total
    while True:
        k += 1
        t = k * h
        lg = logg(t)
        last = math.exp(lg - lpk)
        total += last
        if t > tpk and lg < lpk - 42.0:
            break
        if k > 200000:
            raise EnvelopeError("Macdonald integral failed to converge")
    rel = last / total + 4.0 * EPS * math.sqrt(k)
    return lpk - x, h * total, rel


def bessel_k(nu, x) -> EvalResult:
    """Macdonald function K_nu(x) for x > 0."""
    nu = check_order(nu)
    x = _check_real_arg(x)
    if x <= 0.0:
        raise DomainError("bessel_k needs x > 0")
    logscale, mant, rel = _k_parts(nu, x)
    logv = logscale + math.log(mant)
    if logv > 709.0:
        raise EnvelopeError(f"K_nu({x:.3g}) overflows")
    if logv < -745.0:
        raise EnvelopeError(f"K_nu({x:.3g}) underflows")
    v = math.exp(logv)
    return EvalResult(v, v * rel)


def tilde_k(nu, x) -> EvalResult:
    """Ktilde_nu(x) = x^nu K_nu(x) for x >= 0, with the limit 2^(nu-1) Gamma(nu) at 0."""
    nu = check_order(nu)
    x = _check_real_arg(x)
    if x < 0.0:
        raise DomainError("tilde_k needs x >= 0")
    if x == 0.0:
        if nu <= 0.0:
            raise DomainError("tilde_k(nu, 0) is infinite for nu <= 0")
        return EvalResult(2.0 ** (nu - 1.0) * math.gamma(nu), 0.0)
    logscale, mant, rel = _k_parts(nu, x)
    logv = logscale + math.log(mant) + nu * math.log(x)
    if logv > 709.0:
        raise EnvelopeError(f"Ktilde at x = {x:.3g} overflows")
    if logv < -745.0:
        raise EnvelopeError(f"Ktilde at x = {x:.3g} underflows")
    v = math.exp(logv)
    return EvalResult(v, v * rel)


# ---------------------------------------------------- Bessel J and spherical

def bessel_j(nu, z) -> EvalResult:
    """Bessel function J_nu(z), principal branch of z^nu."""
    nu = check_order(nu)
    z = _check_arg(z)
    is_real = isinstance(z, complex) and z.imag == 0.0 and z.real >= 0.0
    if z == 0:
        if nu == 0.0:
            return EvalResult(1.0, 0.0)
        if nu > 0.0:
            return EvalResult(0.0, 0.0)
        raise PoleError("J_nu(0) is infinite for negative order")
    jv, err = _jnorm_scalar(nu, z)
    pref = cmath.exp(nu * cmath.log(z / 2.0) - math.lgamma(nu + 1.0))
    value = pref * jv
    abs_err = abs(pref) * err
    if is_real:
        return EvalResult(float(value.real), abs_err)
    return EvalResult(value, abs_err)


def spherical_fn(lam, r, nu) -> EvalResult:
    """Normalized spherical function j_nu(lam * r), equal to 1 at r = 0."""
    nu = check_order(nu)
    r = float(r)
    if not math.isfinite(r) or r < 0.0:
        raise DomainError(f"radius must be finite and >= 0, got {r}")
    z = complex(lam) * r
    if abs(z.imag) > EXP_CAP:
        raise EnvelopeError(f"|Im(lambda)| r = {abs(z.imag):.3g} beyond the overflow envelope")
    v, e = _jnorm_scalar(nu, z)
    return EvalResult(v, e)


def poisson_sphfn(lam, r, nu, quad_points: int = 32) -> EvalResult:
    """j_nu(lam r) from the Poisson integral, via Gauss-Jacobi quadrature.

    j_nu(w) is the average of exp(i u w) against (1 - u^2)^(nu - 1/2) du
    on [-1, 1]; at nu = -1/2 the weight degenerates to the two endpoints.
    """
    from scipy.special import roots_jacobi

    nu = check_order(nu)
    if int(quad_points) < 8:
        raise ParameterError("poisson_sphfn needs at least 8 quadrature points")
    w = complex(lam) * float(r)
    if abs(w.imag) > EXP_CAP:
        raise EnvelopeError("Poisson integrand overflows")
    if nu == -0.5:
        return EvalResult(cmath.cos(w), 4.0 * EPS * math.cosh(w.imag))

    def rule(n):
        u, wt = roots_jacobi(n, nu - 0.5, nu - 0.5)
        return complex(np.sum(wt * np.exp(1j * u * w)) / np.sum(wt))

    n = int(quad_points)
    val = rule(n)
    coarse = rule(max(8, (3 * n) // 4))
    err = abs(val - coarse) + 8.0 * EPS * math.cosh(w.imag) * math.sqrt(n)
    return EvalResult(val, err)


# --------------------------------------------------------- vectorized helpers

def _series_vec(nu: float, z: np.ndarray) -> np.ndarray:
    q = -0.25 * z * z
    aq = float(np.max(np.abs(q))) if q.size else 0.0
    term = np.ones_like(z)
    total = term.copy()
    size = np.ones(z.shape)
    k = 0
    while True:
        k += 1
        term = term * q / (k * (k + nu))
        total += term
        size += np.abs(term)
        if k * (k + nu) > aq and np.all(np.abs(term) <= 0.25 * EPS * size):
            return total
        if k > 5000:
            raise EnvelopeError("vectorized power series failed to converge")


def _positive_series(nu: float, x: np.ndarray) -> np.ndarray:
    """sum_k (x^2/4)^k / (k! (nu+1)_k) for real x; all terms are positive."""
    q = 0.25 * x * x
    aq = float(np.max(q)) if q.size else 0.0
    term = np.ones_like(x)
    total = term.copy()
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if k * (k + nu) > aq and np.all(term <= 0.25 * EPS * total):
            return total
        if k > 5000:
            raise EnvelopeError("vectorized power series failed to converge")


def _hankel_vec(nu: float, z: np.ndarray):
    """Vectorized Hankel sum; returns (values, converged mask)."""
    mu = 4.0 * nu * nu
    term = np.ones_like(z)
    p = term.copy()
    q = np.zeros_like(z)
    active = np.ones(z.shape, dtype=bool)
    ok = np.zeros(z.shape, dtype=bool)
    for k in range(1, 120):
        fac = (mu - (2 * k - 1) ** 2) / (8.0 * k)
        if fac == 0.0:
            ok |= active
            break
        new = term * fac / z
        small = np.abs(new) <= _ASYM_TOL
        grow = np.abs(new) >= np.abs(term)
        ok |= active & small
        active &= ~(small | grow)
        if not active.any():
            break
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p = np.where(active, p + sign * new, p)
        else:
            q = np.where(active, q + sign * new, q)
        term = np.where(active, new, term)
    chi = z - (0.5 * nu + 0.25) * math.pi
    amp = np.sqrt(2.0 / (math.pi * z))
    jval = amp * (p * np.cos(chi) - q * np.sin(chi))
    pref = np.exp(math.lgamma(nu + 1.0) + nu * np.log(2.0 / z))
    return pref * jval, ok


def jnorm(nu: float, z) -> np.ndarray:
    """Vectorized normalized Bessel function j_nu(z) for complex arrays."""
    nu = check_order(nu)
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    z = z.ravel()
    if np.any(np.abs(z.imag) > EXP_CAP):
        raise EnvelopeError("normalized Bessel argument beyond the overflow envelope")
    flip = (z.real < 0) | ((z.real == 0) & (z.imag < 0))
    w = np.where(flip, -z, z)
    a = np.abs(w)
    out = np.empty_like(w)
    ser = (a <= 14.0) | (((a - np.abs(w.imag)) <= 8.0) & (a <= 60.0))
    if ser.any():
        out[ser] = _series_vec(nu, w[ser])
    rest = ~ser
    if rest.any():
        vals, ok = _hankel_vec(nu, w[rest])
        idx = np.flatnonzero(rest)
        out[idx[ok]] = vals[ok]
        for i in idx[~ok]:
            out[i] = _jnorm_scalar(nu, complex(w[i]))[0]
    return out.reshape(shape)


def itilde_scaled(nu: float, x) -> np.ndarray:
    """Vectorized Itilde_nu(x) * exp(-x) for real x >= 0."""
    nu = check_order(nu)
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = x.ravel()
    if np.any(x < 0):
        raise DomainError("itilde_scaled needs x >= 0")
    out = np.empty_like(x)
    logpref = -nu * math.log(2.0) - math.lgamma(nu + 1.0)
    switch = max(30.0, 2.0 * nu * nu)
    ser = x <= switch
    if ser.any():
        xs = x[ser]
        s = _positive_series(nu, xs)
        out[ser] = np.exp(logpref - xs) * s
    big = ~ser
    if big.any():
        xb = x[big]
        mu = 4.0 * nu * nu
        term = np.ones_like(xb)
        total = term.copy()
        for k in range(1, 80):
            fac = (mu - (2 * k - 1) ** 2) / (8.0 * k)
            if fac == 0.0:
                break
            new = -term * fac / xb
            total += new
            term = new
            if np.all(np.abs(term) <= _ASYM_TOL):
                break
        out[big] = np.exp(-nu * np.log(xb)) * total / np.sqrt(2.0 * math.pi * xb)
    return out.reshape(shape)


def _confluent_scaled(kappa: float, x: np.ndarray) -> np.ndarray:
    """exp(-2x) 1F1(kappa; 2 kappa + 1; 2x) for x >= 0 by its positive series.

    This equals e_kappa(-x) exp(-x); the series has no cancellation, unlike
    the Bessel form on the negative axis.  Meant for 2x <= 60 (or kappa = 0,
    where it terminates).
    """
    x = np.asarray(x, dtype=float)
    z = 2.0 * x
    if kappa == 0.0:
        return np.exp(-z)
    term = np.ones_like(z)
    total = np.ones_like(z)
    zmax = float(np.max(z)) if z.size else 0.0
    for k in range(0, 5000):
        term = term * (kappa + k) / ((2.0 * kappa + 1.0 + k) * (k + 1.0)) * z
        total += term
        if k > zmax and np.all(term <= 0.25 * EPS * total):
            break
    return np.exp(-z) * total


_CONFLUENT_MAX = 30.0


def rank1_kernel(kappa: float, w) -> np.ndarray:
    """One-dimensional Dunkl kernel e_kappa(w) for complex w (vectorized).

    e_kappa(w) = j_{kappa-1/2}(i w) + w / (2 kappa + 1) j_{kappa+1/2}(i w);
    for kappa = 0 it reduces to exp(w).  Real negative arguments go through
    the positive confluent series e_kappa(-x) = exp(-x) 1F1(kappa; 2 kappa+1; 2x).
    """
    w = np.asarray(w, dtype=complex)
    if w.ndim == 0:
        return rank1_kernel(kappa, w[None])[0]
    iw = 1j * w
    out = jnorm(kappa - 0.5, iw) + w / (2.0 * kappa + 1.0) * jnorm(kappa + 0.5, iw)
    neg = (w.imag == 0.0) & (w.real < 0.0) & ((-w.real <= _CONFLUENT_MAX) | (kappa == 0.0))
    if np.any(neg):
        x = -w.real[neg]
        out[neg] = np.exp(x) * _confluent_scaled(kappa, x)
    return out


def rank1_kernel_scaled(kappa: float, w) -> np.ndarray:
    """e_kappa(w) * exp(-|w|) for real w, evaluated without overflow."""
    w = np.asarray(w, dtype=float)
    if w.ndim == 0:
        return rank1_kernel_scaled(kappa, w[None])[0]
    aw = np.abs(w)
    c = math.exp((kappa - 0.5) * math.log(2.0) + math.lgamma(kappa + 0.5))
    neg = (w < 0.0) & ((aw <= _CONFLUENT_MAX) | (kappa == 0.0))
    out = np.empty_like(w)
    if np.any(neg):
        out[neg] = _confluent_scaled(kappa, aw[neg])
    pos = ~neg
    if np.any(pos):
        a = aw[pos]
        out[pos] = c * (itilde_scaled(kappa - 0.5, a) + w[pos] * itilde_scaled(kappa + 0.5, a))
    return out


def tilde_k_array(nu: float, x) -> np.ndarray:
    """Ktilde_nu at each entry of x (scalar evaluation per entry)."""
    x = np.asarray(x, dtype=float)
    flat = [tilde_k(nu, float(v)).value for v in x.ravel()]
    return np.asarray(flat, dtype=float).reshape(x.shape)
