import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semichaos import chaos, heat, spaces
from semichaos.dunkl import MultiplicitySetup
from semichaos.errors import ParameterError, UnsupportedError
from semichaos.spaces import WeightedSpaceSpec

exponents = st.sampled_from([1.0, 4.0 / 3.0, 1.5, 3.0, 4.0, 8.0])


def space(kappa=(0.0, 0.0), p=4.0, rho=1.0, kind="weighted_lp"):
    return WeightedSpaceSpec(MultiplicitySetup(len(kappa), tuple(kappa)), p, rho, kind)


# ------------------------------------------------------------ geometry

def test_boundary_vertex():
    assert float(chaos.boundary_u(4.0, 1.0, 0.0)) == pytest.approx(0.75)
    assert float(chaos.boundary_u(4.0, 2.0, 0.0)) == pytest.approx(3.0)
    with pytest.raises(ParameterError):
        chaos.boundary_u(2.0, 1.0, 0.0)


def test_degenerate_ray_at_two():
    assert chaos.region_contains(2.0, 1.0, 3.0)
    assert not chaos.region_contains(2.0, 1.0, 0.5)
    assert not chaos.region_contains(2.0, 1.0, 3.0 + 1e-9j)
    assert not chaos.point_spectrum_contains(MultiplicitySetup(2), 2.0, 1.0, 3.0)


def test_imaginary_axis_intersection():
    assert chaos.ir_axis_intersection(4.0, 1.0, 1.0) == {"count": "infinite", "v_max": 0.5}
    assert chaos.ir_axis_intersection(4.0, 1.0, 0.75) == {"count": 1, "v_max": 0.0}
    assert chaos.ir_axis_intersection(4.0, 1.0, 0.5)["count"] == 0


@settings(max_examples=100, deadline=None)
@given(p=exponents, xi=st.floats(-4, 4), frac=st.floats(-1, 1))
def test_strip_images_lie_in_region(p, xi, frac):
    g = spaces.gamma_of(p)
    lam = complex(xi, frac * g)
    z = lam * lam + 1.0
    assert float(chaos.boundary_u(p, 1.0, z.imag)) <= z.real + 1e-12


@settings(max_examples=100, deadline=None)
@given(p=exponents, c=st.floats(0.0, 3.0), v=st.floats(-3, 3))
def test_intersection_agrees_with_membership(p, c, v):
    info = chaos.ir_axis_intersection(p, 1.0, c)
    inside = chaos.region_contains(p, 1.0, complex(c, v))
    if info["count"] == "infinite":
        assert inside == (abs(v) <= info["v_max"] + 1e-12) or abs(abs(v) - info["v_max"]) < 1e-9
    elif info["count"] == 0:
        assert not inside


def test_strip_image_sampler():
    z = chaos.strip_image_samples(4.0, 1.0, 500, seed=3)
    assert np.all(z.real >= chaos.boundary_u(4.0, 1.0, z.imag) - 1e-12)


def test_classification_roles():
    # omega_c = lambda^2 + rho^2 - c
    assert chaos.classify_lambda(2.0, 4.0, 1.0, 1.0) == "A1"
    assert chaos.classify_lambda(0.4j, 4.0, 1.0, 1.0) == "A2"
    b = 0.3
    a = math.sqrt(b * b)
    assert chaos.classify_lambda(complex(a, b), 4.0, 1.0, 1.0) == "A3"
    assert chaos.classify_lambda(0.6j, 4.0, 1.0, 1.0) is None


def test_frequency():
    f = chaos.ComplexFrequency(0.5 + 0.5j, 1.0)
    assert f.eigenvalue == pytest.approx(1.0 + 0.5j)
    assert f.omega(1.0) == pytest.approx(0.5j)
    with pytest.raises(ParameterError):
        chaos.ComplexFrequency(1.0, -1.0)


# ---------------------------------------------------------- witnesses

@pytest.mark.parametrize("kappa", [(0.0, 0.0), (0.5, 1.0)])
def test_periodic_witness_returns(kappa):
    w = chaos.make_periodic_witness(space(kappa), 1.0)
    assert w.role == "A3"
    assert w.residuals["return"] <= 1e-6
    assert w.theorem_tag == ("Prop2.9" if kappa == (0.0, 0.0) else "Prop3.11")
    doc = json.loads(json.dumps(w.as_dict()))
    assert doc["period"] == pytest.approx(w.period)


def test_periodic_witness_is_not_vacuous():
    # the orbit really moves: half a period later the function is far from its start
    sp = space()
    w = chaos.make_periodic_witness(sp, 1.0)
    f = w.extras["f"]
    half = heat.apply_Ttc(sp, heat.SemigroupParams(0.5 * w.period, 1.0, 1.0), f)
    moved = spaces.lp_norm(sp, half.like(half.values - f.values)) / spaces.lp_norm(sp, f)
    assert moved > 0.5


def test_binf_witness():
    w = chaos.make_binf_witness(space(), 1.0, 1e-3)
    assert w.role == "A2"
    assert w.residuals["f_t_norm"] <= 1e-3
    assert w.residuals["return"] <= 1e-5


def test_b0_witness():
    w = chaos.make_b0_witness(space(), 1.0)
    assert w.role == "A1"
    assert w.residuals["ratio"] <= 1e-4
    norms = w.extras["norms"]
    assert norms[0] > norms[1] > norms[2]


@pytest.mark.parametrize("maker", [chaos.make_periodic_witness, chaos.make_binf_witness, chaos.make_b0_witness])
def test_witness_refusals(maker):
    sp = space()
    with pytest.raises(ParameterError):
        maker(sp, sp.c_p)
    with pytest.raises(ParameterError):
        maker(space(p=2.0), 5.0)
    with pytest.raises(UnsupportedError):
        maker(space(p=4.0, kind="conjugated_lp"), 2.0)


def test_periodic_witness_rejects_bad_b():
    with pytest.raises(ParameterError):
        chaos.make_periodic_witness(space(), 1.0, b=0.9)


# ----------------------------------------------------------- verdicts

@pytest.mark.parametrize("args,want", [
    (("weighted_lp", 4.0, 1.0, 1.0, (0.0, 0.0)), ("Chaotic", "Thm1.4(1)")),
    (("weighted_lp", 4.0, 0.4, 1.0, (0.5, 0.5)), ("NotHypercyclic", "Thm1.6(2)")),
    (("weighted_lp", 4.0, 0.6, 1.0, (0.5, 0.5)), ("Unknown", "Rem1.7")),
    (("conjugated_lp", 1.5, 1.0, 1.0, None), ("NoPeriodicPoints", "Thm1.3(c)")),
    (("l_infinity", math.inf, 9.0, 1.0, None), ("NotChaotic", "Thm1.4(2)")),
])
def test_verdict_cells(args, want):
    v = chaos.chaos_verdict(*args)
    assert (v.value, v.theorem_tag) == want
    assert v.value in chaos.VERDICTS


@settings(max_examples=100, deadline=None)
@given(p=exponents, c=st.floats(0.0, 3.0), rho=st.floats(0.5, 2.0))
def test_euclidean_verdict_follows_critical_shift(p, c, rho):
    v = chaos.chaos_verdict("weighted_lp", p, c, rho).value
    cp = chaos.critical_shift(p, rho)
    assert (v == "Chaotic") == (c > cp)
    if c < cp:
        assert v == "NotHypercyclic"


@settings(max_examples=100, deadline=None)
@given(p=exponents, c=st.floats(0.0, 3.0))
def test_dunkl_verdicts_are_monotone_in_shift(p, c):
    order = {"NotHypercyclic": 0, "Unknown": 1, "Chaotic": 2}
    a = chaos.chaos_verdict("weighted_lp", p, c, 1.0, (0.5, 0.5)).value
    b = chaos.chaos_verdict("weighted_lp", p, c + 0.1, 1.0, (0.5, 0.5)).value
    assert order[a] <= order[b]


def test_verdict_errors():
    with pytest.raises(UnsupportedError):
        chaos.chaos_verdict("conjugated_lp", 4.0, 1.0, 1.0, (0.5, 0.5))
    with pytest.raises(UnsupportedError):
        chaos.chaos_verdict("mixed_p2", 4.0, 1.0, 1.0, (0.3, 0.5))
    with pytest.raises(ParameterError):
        chaos.chaos_verdict("weighted_lp", 0.5, 1.0, 1.0)


def test_verdict_for_space():
    v = chaos.verdict_for(space((0.5, 0.5), p=4.0, kind="mixed_p2"), 1.0)
    assert (v.value, v.theorem_tag) == ("Chaotic", "Thm1.8(1)")


# --------------------------------------------------------- membership

def test_membership_dichotomy():
    sp = space(p=8.0)
    g = sp.gamma_p
    inside = chaos.membership_report(sp, 0.9j * g)
    outside = chaos.membership_report(sp, 1.1j * g)
    assert abs(inside["ratios"][-1] - 1.0) < 1e-3
    assert outside["monotone"] and outside["growth"] >= 1.5


def test_translated_eigenfunction_matches_pointwise_translate():
    # Euclidean translate of phi_lambda is phi_lambda(x + y)
    sp = space()
    rad, sph = spaces.default_grid(sp, 32, 16, r_max=4.0)
    x = np.array([0.5, -0.2])
    lam = 0.7 + 0.1j
    f = chaos.translated_sphfn(sp, x, lam, (rad, sph))
    pts = f.points().reshape(-1, 2) + x
    ref = np.array([complex(spaces.specfun.spherical_fn(lam, float(np.linalg.norm(q)), 0.0).value) for q in pts])
    assert np.max(np.abs(f.values.ravel() - ref)) < 1e-8
