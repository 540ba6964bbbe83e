import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semichaos.errors import ParameterError
from semichaos.separable import Quotient, constant_sum, gaussian_sum, plane_wave_sum


def test_gaussian_sum_values():
    g = gaussian_sum(2, 0.5, odd_axis=1)
    pts = np.array([[0.3, -1.0], [1.0, 2.0]])
    expect = pts[:, 1] * np.exp(-0.5 * np.sum(pts * pts, axis=1))
    assert np.allclose(g(pts), expect, rtol=1e-15)
    with pytest.raises(ParameterError):
        gaussian_sum(2, 0.0)
    with pytest.raises(ParameterError):
        g(np.zeros((3, 3)))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=2, max_size=2), st.floats(-3, 3))
def test_plane_waves_reduce_to_exponentials(x, mu):
    s = plane_wave_sum((0.0, 0.0), np.array([[mu, 0.5 * mu], [1.0, -1.0]]), np.array([1.0, 2.0]))
    pts = np.array([x])
    expect = np.exp(1j * (mu * x[0] + 0.5 * mu * x[1])) + 2 * np.exp(1j * (x[0] - x[1]))
    assert s(pts)[0] == pytest.approx(expect, rel=1e-13, abs=1e-13)


def test_products_and_scaling():
    a = gaussian_sum(2, 1.0)
    b = plane_wave_sum((0.5, 0.0), np.array([[1.0, 2.0]]), np.array([3.0]))
    pts = np.array([[0.2, 0.4], [-1.0, 0.5]])
    assert np.allclose(a.times(b)(pts), a(pts) * b(pts), rtol=1e-14)
    assert np.allclose(a.scaled(2j)(pts), 2j * a(pts))
    q = Quotient(b, lambda p: 1.0 + np.sum(p * p, axis=1))
    assert np.allclose(q.scaled(-1)(pts), -b(pts) / (1.0 + np.sum(pts * pts, axis=1)))
    assert np.allclose(constant_sum(2, 4.0)(pts), 4.0)


def test_growth_and_feature():
    s = plane_wave_sum((0.0, 0.0), np.array([[2.0 + 0.5j, 0.0]]), np.array([1.0]))
    assert s.growth == pytest.approx(0.5)
    assert s.feature == pytest.approx(np.pi)
