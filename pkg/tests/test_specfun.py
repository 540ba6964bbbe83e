import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semichaos import specfun
from semichaos.errors import DomainError, EnvelopeError, PoleError

mp.mp.dps = 40

orders = st.sampled_from([-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.25, 7.0])
moderate_x = st.floats(0.05, 60.0)


def rel(a, b):
    return abs(complex(a) - complex(b)) / max(abs(complex(b)), 1e-300)


# ---------------------------------------------------------------- oracles

@pytest.mark.parametrize("x", [0.01, 0.5, 2.0, 11.9, 12.1, 30.0, 80.0, 400.0])
@pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.0, 2.5, 10.0])
def test_modified_bessel_against_mpmath(nu, x):
    assert rel(specfun.bessel_i(nu, x).value, mp.besseli(nu, x)) < 1e-12
    assert rel(specfun.bessel_k(nu, x).value, mp.besselk(nu, x)) < 1e-12


@pytest.mark.parametrize("z", [0.3, 5.0, 11.5, 13.0, 40.0, 250.0, 3.0 + 4.0j, 20.0 - 7.0j, 1j * 15.0])
@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 3.5])
def test_bessel_j_against_mpmath(nu, z):
    ref = complex(mp.besselj(nu, z))
    got = specfun.bessel_j(nu, z)
    # J oscillates through zero, so measure against the local envelope
    scale = max(abs(ref), abs(complex(mp.besselj(nu + 1, z))), 1e-300)
    assert abs(complex(got.value) - ref) / scale < 1e-11


@pytest.mark.parametrize("lam,r,nu", [(1.0, 3.0, 0.0), (0.7 + 0.2j, 5.0, 1.5), (1j, 4.0, 1.0), (2.0, 25.0, 0.5)])
def test_spherical_fn_matches_hypergeometric_series(lam, r, nu):
    w = complex(lam) * r
    ref = complex(mp.hyp0f1(nu + 1, -(w * w) / 4))
    assert rel(specfun.spherical_fn(lam, r, nu).value, ref) < 1e-11


def test_half_order_macdonald_closed_form():
    x = 2.0
    assert specfun.bessel_k(0.5, x).value == pytest.approx(math.sqrt(math.pi / (2 * x)) * math.exp(-x), rel=1e-14)


def test_tilde_k_at_zero():
    assert specfun.tilde_k(1.0, 0.0).value == 1.0
    assert specfun.tilde_k(2.5, 0.0).value == pytest.approx(2 ** 1.5 * math.gamma(2.5), rel=1e-15)


def test_spherical_fn_is_one_at_origin():
    for nu in (-0.5, 0.0, 2.0):
        assert specfun.spherical_fn(0.3 + 0.1j, 0.0, nu).value == 1


def test_small_order_closed_forms():
    # j_{1/2}(z) = sin z / z and j_{-1/2}(z) = cos z
    for z in (0.2, 3.0, 17.0 + 2.0j):
        assert rel(specfun.spherical_fn(z, 1.0, 0.5).value, cmath.sin(z) / z) < 1e-13
        assert rel(specfun.spherical_fn(z, 1.0, -0.5).value, cmath.cos(z)) < 1e-13


def test_error_estimates_bound_actual_error():
    for nu, x in ((0.5, 3.0), (2.0, 40.0), (1.0, 0.2)):
        got = specfun.bessel_k(nu, x)
        assert abs(got.value - float(mp.besselk(nu, x))) <= max(got.abs_error_est, 1e-15 * got.value) * 10


# ---------------------------------------------------------------- errors

def test_order_below_minus_half_rejected():
    with pytest.raises(DomainError):
        specfun.bessel_i(-0.75, 1.0)


def test_non_numeric_order_rejected():
    with pytest.raises(DomainError):
        specfun.bessel_k("abc", 1.0)


def test_poles_and_domains():
    with pytest.raises(PoleError):
        specfun.bessel_j(-0.5, 0.0)
    with pytest.raises(DomainError):
        specfun.bessel_k(1.0, 0.0)
    with pytest.raises(DomainError):
        specfun.tilde_k(0.0, 0.0)
    with pytest.raises(DomainError):
        specfun.tilde_i(1.0, -1.0)


def test_envelope_errors():
    with pytest.raises(EnvelopeError):
        specfun.bessel_k(0.5, 2e4)
    with pytest.raises(EnvelopeError):
        specfun.spherical_fn(1j, 900.0, 1.0)
    with pytest.raises(EnvelopeError):
        specfun.bessel_i(0.0, 800.0)


# ----------------------------------------------------- vectorized helpers

def test_rank1_kernel_against_confluent_hypergeometric():
    # e_k(w) = e^w 1F1(k; 2k+1; -2w)
    for kappa in (0.0, 0.5, 1.0, 2.25):
        for w in (-40.0, -7.3, -0.5, 0.0, 0.8, 9.0, 45.0, 3.0j, 1.0 + 2.0j):
            ref = complex(mp.exp(w) * mp.hyp1f1(kappa, 2 * kappa + 1, -2 * w))
            got = complex(specfun.rank1_kernel(kappa, w))
            assert rel(got, ref) < 5e-12, (kappa, w)


def test_rank1_kernel_scaled_removes_exponential():
    w = np.array([-35.0, -3.0, 0.0, 2.0, 80.0])
    for kappa in (0.5, 1.5):
        scaled = specfun.rank1_kernel_scaled(kappa, w)
        ref = np.array([float(mp.exp(-abs(v)) * mp.exp(v) * mp.hyp1f1(kappa, 2 * kappa + 1, -2 * v)) for v in w])
        assert np.max(np.abs(scaled / ref - 1)) < 5e-12


def test_itilde_scaled_matches_scalar_route():
    xs = np.array([0.0, 0.3, 5.0, 29.0, 31.0, 150.0, 2000.0])
    for nu in (0.0, 0.5, 2.0, 6.5):
        vec = specfun.itilde_scaled(nu, xs)
        ref = np.array([float(mp.exp(-x) * (mp.besseli(nu, x) / mp.power(x, nu) if x else 1 / (2 ** nu * mp.gamma(nu + 1))))
                        for x in xs])
        assert np.max(np.abs(vec / ref - 1)) < 1e-12


def test_jnorm_vector_agrees_with_scalar():
    z = np.array([0.0, 1.0, 11.0 + 1.0j, 12.5, 60.0 - 3.0j])
    vec = specfun.jnorm(1.5, z)
    for zi, vi in zip(z, vec):
        ref = complex(mp.hyp0f1(2.5, -complex(zi) ** 2 / 4))
        scalar = specfun.spherical_fn(zi, 1.0, 1.5)
        # the series cancels near |z| = 12, so compare absolutely there
        assert abs(vi - ref) <= 1e-13
        assert abs(scalar.value - ref) <= max(2 * scalar.abs_error_est, 1e-15)


def test_poisson_integral_agrees_with_series():
    for nu in (0.0, 0.5, 2.0):
        for lam in (1.0, 0.6 + 0.3j):
            a = specfun.poisson_sphfn(lam, 3.0, nu).value
            b = specfun.spherical_fn(lam, 3.0, nu).value
            assert rel(a, b) < 1e-10


# --------------------------------------------------------- properties

@settings(max_examples=60, deadline=None)
@given(nu=orders, x=moderate_x)
def test_wronskian(nu, x):
    # I_nu K_{nu+1} + I_{nu+1} K_nu = 1/x
    i0, i1 = specfun.bessel_i(nu, x).value, specfun.bessel_i(nu + 1, x).value
    k0, k1 = specfun.bessel_k(nu, x).value, specfun.bessel_k(nu + 1, x).value
    assert (i0 * k1 + i1 * k0) * x == pytest.approx(1.0, rel=1e-11)


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(0.0, 6.0), x=moderate_x)
def test_macdonald_recurrence(nu, x):
    # K_{nu+1} = K_{nu-1} + (2 nu / x) K_nu, with K_{-s} = K_s
    km = specfun.bessel_k(abs(nu - 1.0), x).value
    k0 = specfun.bessel_k(nu, x).value
    kp = specfun.bessel_k(nu + 1.0, x).value
    assert kp == pytest.approx(km + 2 * nu / x * k0, rel=1e-11)


@settings(max_examples=60, deadline=None)
@given(nu=orders, re=st.floats(-30, 30), im=st.floats(-20, 20))
def test_spherical_fn_is_even(nu, re, im):
    a = specfun.spherical_fn(complex(re, im), 1.0, nu).value
    b = specfun.spherical_fn(complex(-re, -im), 1.0, nu).value
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


@settings(max_examples=60, deadline=None)
@given(nu=st.floats(0.0, 5.0), x=st.floats(0.0, 300.0))
def test_tilde_i_positive_and_increasing(nu, x):
    a = specfun.tilde_i(nu, x).value
    b = specfun.tilde_i(nu, x + 0.5).value
    assert 0 < a < b
