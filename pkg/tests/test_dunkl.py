import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semichaos import dunkl
from semichaos.dunkl import MultiplicitySetup
from semichaos.errors import DomainError, ParameterError, PoleError
from semichaos.spaces import sphere_quadrature

kappas = st.lists(st.sampled_from([0.0, 0.25, 0.5, 1.0, 2.0]), min_size=2, max_size=3)
coord = st.floats(0.2, 2.0).flatmap(lambda a: st.sampled_from([a, -a]))


def test_setup_fills_and_validates():
    s = MultiplicitySetup(3, 0.5)
    assert s.kappa == (0.5, 0.5, 0.5)
    assert s.gamma == 1.5 and s.big_n == 6.0
    assert MultiplicitySetup(2).is_euclidean
    with pytest.raises(ParameterError):
        MultiplicitySetup(2, (0.5,))
    with pytest.raises(ParameterError):
        MultiplicitySetup(2, (-0.1, 0.0))
    with pytest.raises(ParameterError):
        MultiplicitySetup(0)


def test_weight_and_reflection():
    s = MultiplicitySetup(2, (0.5, 1.0))
    assert dunkl.weight_h2(s, [2.0, -3.0]) == pytest.approx(2.0 * 9.0)
    assert dunkl.weight_h2(s, [0.0, 1.0]) == 0.0
    assert np.array_equal(dunkl.reflect(s, 2, [1.0, 2.0]), [1.0, -2.0])
    with pytest.raises(IndexError):
        dunkl.reflect(s, 0, [1.0, 2.0])
    with pytest.raises(ParameterError):
        dunkl.weight_h2(s, [1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        dunkl.weight_h2(s, [np.nan, 1.0])


def test_dunkl_operator_on_monomials():
    # T_j x_j = 1 + 2 kappa_j and T_j x_j^2 = 2 x_j
    s = MultiplicitySetup(2, (0.5, 1.5))
    x = np.array([0.7, -1.3])
    assert dunkl.dunkl_apply(s, 1, lambda y: y[0], x) == pytest.approx(2.0, abs=1e-9)
    assert dunkl.dunkl_apply(s, 2, lambda y: y[1], x) == pytest.approx(4.0, abs=1e-9)
    assert dunkl.dunkl_apply(s, 2, lambda y: y[1] ** 2, x) == pytest.approx(-2.6, abs=1e-9)


def test_laplacian_of_square_norm():
    # Delta_kappa |x|^2 = -2N with Delta = -sum T_j^2
    s = MultiplicitySetup(3, (0.5, 0.0, 1.0))
    got = dunkl.dunkl_laplacian_apply(s, lambda y: float(np.dot(y, y)), [0.4, 0.9, -1.1])
    assert got == pytest.approx(-2.0 * s.big_n, abs=1e-6)


def test_origin_needs_even_flag():
    s = MultiplicitySetup(2, (0.5, 0.5))
    f = lambda y: np.cos(y[0]) + y[1]
    with pytest.raises(PoleError):
        dunkl.dunkl_apply(s, 1, f, [0.0, 1.0])
    assert abs(dunkl.dunkl_apply(s, 1, f, [0.0, 1.0], even_at_zero=True)) < 1e-10


def test_kernel_reduces_to_exponential():
    s = MultiplicitySetup(2, 0.0)
    x = np.array([0.3, -1.2])
    z = np.array([0.5 + 1j, 2.0])
    assert dunkl.dunkl_kernel(s, x, z) == pytest.approx(np.exp(np.dot(x, z)), rel=1e-13)


def test_sphere_average_matches_closed_form():
    for kap in ((0.5, 1.0), (0.0, 0.0), (1.5, 0.25)):
        s = MultiplicitySetup(2, kap)
        sq = sphere_quadrature(s, 64)
        for lam, x in ((1.0, (0.6, 0.8)), (0.7 + 0.2j, (-1.5, 0.4)), (2.0, (0.0, 2.0))):
            a = dunkl.dunkl_sphfn(s, lam, x, sq)
            b = dunkl.spherical_closed_form(s, lam, x)
            assert abs(a - b) < 1e-10 * max(1, abs(b))


@settings(max_examples=40, deadline=None)
@given(kap=kappas, data=st.data())
def test_kernel_is_joint_eigenfunction(kap, data):
    s = MultiplicitySetup(len(kap), tuple(kap))
    x = np.array([data.draw(coord) for _ in kap])
    z = np.array([data.draw(st.floats(-1.5, 1.5)) for _ in kap]) + 0.5j
    f = lambda y: dunkl.dunkl_kernel(s, y, z)
    e = f(x)
    for j in range(1, s.n + 1):
        assert abs(dunkl.dunkl_apply(s, j, f, x) - z[j - 1] * e) < 1e-7 * max(1.0, abs(e))


@settings(max_examples=60, deadline=None)
@given(kap=kappas, data=st.data())
def test_kernel_symmetry_and_normalization(kap, data):
    s = MultiplicitySetup(len(kap), tuple(kap))
    x = np.array([data.draw(st.floats(-3, 3)) for _ in kap])
    z = np.array([data.draw(st.floats(-3, 3)) for _ in kap])
    a, b = dunkl.dunkl_kernel(s, x, z), dunkl.dunkl_kernel(s, z, x)
    assert abs(a - b) <= 1e-12 * abs(a)
    assert dunkl.dunkl_kernel(s, np.zeros(s.n), z) == pytest.approx(1.0)
    # E(x, z) is real and positive for real arguments
    assert abs(np.imag(a)) <= 1e-12 * abs(a) and np.real(a) > 0
