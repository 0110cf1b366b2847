"""Unit and property tests for the complex special functions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dkp1d.errors import PoleError
from dkp1d.specfun import (complex_power, gamma_c, hyp2f1,
                           hyp2f1_regularized, negative_axis_branch,
                           rgamma_c)

# high-precision anchors, computed independently at 50 digits
_GAMMA_2_3I = complex(-0.08239527266561188367387031436462597748929073790384,
                      +0.09177428743525931459566741729377691773837791463104)
_F21_MIXED = complex(+0.68739394494158482172505217462766936820919186575854,
                     -0.16884730150139021934811801936988482886280585891637)
_F21_REG_CM1 = 0.35948083696873370592038199279882417992760818725908
_POW_BRANCH = complex(+0.24899066335873975312430984236286045743221136406276,
                      +0.10101193727153747153729370902490233302947663789492)

mpmath = pytest.importorskip("mpmath")


def _mpc(x):
    return mpmath.mpc(complex(x))


def test_gamma_anchor():
    got = gamma_c(2.0 + 3.0j)
    assert abs(got - _GAMMA_2_3I) <= 5e-15 * abs(_GAMMA_2_3I)


def test_gamma_against_mpmath_grid():
    mpmath.mp.dps = 30
    zs = [0.5, 2.0 + 3.0j, -1.5 + 0.25j, 4.75 - 2.0j, -3.2 - 0.7j, 1e-3 + 1j]
    for z in zs:
        ref = complex(mpmath.gamma(_mpc(z)))
        assert abs(gamma_c(z) - ref) <= 1e-12 * abs(ref)


def test_rgamma_zero_at_poles():
    assert rgamma_c(0.0) == 0.0
    assert rgamma_c(-3.0) == 0.0
    # and smooth just next to them
    assert abs(rgamma_c(-3.0 + 1e-8)) < 1e-6


def test_hyp2f1_anchor():
    got = hyp2f1(0.3 + 0.7j, 1.1 - 0.2j, 0.9 + 0.4j, -0.6)
    assert abs(got - _F21_MIXED) <= 1e-13 * abs(_F21_MIXED)


def test_hyp2f1_against_mpmath():
    mpmath.mp.dps = 30
    cases = [
        (0.5, 1.5, 2.5, 0.3),
        (0.25 + 1.0j, -0.75, 1.3 - 0.5j, -2.0),
        (1.1, 0.9 + 0.3j, 2.0 + 1.0j, 0.45),
        (0.5 + 2.0j, 0.5 - 2.0j, 1.5, -0.8),
        (2.0, 3.0, 4.5, 0.85),
        (-1.5 + 0.2j, 2.5, 3.7 - 1.1j, -6.0),
    ]
    for a, b, c, z in cases:
        ref = complex(mpmath.hyp2f1(_mpc(a), _mpc(b), _mpc(c), _mpc(z)))
        got = hyp2f1(a, b, c, z)
        assert abs(got - ref) <= 1e-11 * max(1.0, abs(ref)), (a, b, c, z)


def test_hyp2f1_regularized_anchor():
    got = hyp2f1_regularized(0.5, 1.5, -1.0, 0.3)
    assert abs(got - _F21_REG_CM1) <= 1e-11 * abs(_F21_REG_CM1)


def test_hyp2f1_trivial_values():
    assert hyp2f1(0.7, 1.3, 2.1, 0.0) == 1.0 + 0.0j
    # F(a, b; b; z) = (1 - z)^(-a)
    for z in (-0.7, 0.2, 0.45):
        got = hyp2f1(0.8, 1.9, 1.9, z)
        assert abs(got - (1.0 - z) ** -0.8) <= 1e-12


def test_hyp2f1_rejects_pole_c():
    with pytest.raises(PoleError):
        hyp2f1(0.5, 1.5, -1.0, 0.3)
    with pytest.raises(PoleError):
        hyp2f1(0.5, 1.5, 0.0, 0.3)


def test_hyp2f1_vectorized_matches_scalar():
    zs = np.linspace(-0.9, 0.45, 7)
    a, b, c = 0.3 + 0.7j, 1.1, 0.9 + 0.4j
    batch = hyp2f1(a, b, c, zs)
    single = np.array([hyp2f1(a, b, c, z) for z in zs])
    assert np.array_equal(batch, single)


def test_one_minus_z_complement_precision():
    """Logistic arguments: the exact complement preserves accuracy."""
    mpmath.mp.dps = 40
    a, b, c = 0.6 + 0.4j, 1.2, 2.3 - 0.2j
    u = 1e-9
    z = 1.0 / (1.0 + u)
    ref = complex(mpmath.hyp2f1(_mpc(a), _mpc(b), _mpc(c),
                                1 / (1 + mpmath.mpf(u))))
    got = hyp2f1(a, b, c, z, one_minus_z=u / (1.0 + u))
    assert abs(got - ref) <= 1e-9 * abs(ref)


def test_power_anchor():
    got = complex_power(-math.exp(-4.0), 0.25 + 0.1j)
    assert abs(got - _POW_BRANCH) <= 1e-13 * abs(_POW_BRANCH)


def test_power_branch_flip_conjugates():
    # for real exponents the two cut conventions give conjugate values
    for t, w in ((2.0, 0.5), (0.3, 1.75), (11.0, -0.4)):
        with negative_axis_branch(+1.0):
            plus = complex_power(-t, w)
        with negative_axis_branch(-1.0):
            minus = complex_power(-t, w)
        assert abs(plus - np.conj(minus)) <= 1e-14 * abs(plus)


_safe_re = st.floats(min_value=0.2, max_value=2.0)
_small_im = st.floats(min_value=-1.0, max_value=1.0)


@st.composite
def _complex_param(draw):
    return complex(draw(_safe_re), draw(_small_im))


@settings(max_examples=80, deadline=None)
@given(z=st.complex_numbers(min_magnitude=0.05, max_magnitude=3.0,
                            allow_infinity=False, allow_nan=False))
def test_gamma_reflection_property(z):
    # Gamma(z) Gamma(1-z) = pi / sin(pi z), away from the real-axis poles
    if abs(z.imag) < 0.05 and abs(z.real - round(z.real)) < 0.05:
        return
    if abs(z.imag) > 2.5:
        return
    lhs = gamma_c(z) * gamma_c(1.0 - z)
    rhs = np.pi / np.sin(np.pi * z)
    assert abs(lhs - rhs) <= 1e-12 * abs(rhs)


@settings(max_examples=60, deadline=None)
@given(a=_complex_param(), b=_complex_param(),
       s=st.floats(min_value=1.2, max_value=1.45))
def test_gauss_summation_property(a, b, s):
    """F(a, b; c; z -> 1) approaches Gamma(c)Gamma(c-a-b)/Gamma(c-a)Gamma(c-b)."""
    c = a + b + s
    eps = 1e-8
    got = hyp2f1(a, b, c, 1.0 - eps, one_minus_z=eps)
    ref = (gamma_c(c) * gamma_c(c - a - b)
           / (gamma_c(c - a) * gamma_c(c - b)))
    assert abs(got - ref) <= 1e-6 * max(1.0, abs(ref))


@settings(max_examples=60, deadline=None)
@given(a=_complex_param(), b=_complex_param(),
       z=st.complex_numbers(max_magnitude=0.4,
                            allow_infinity=False, allow_nan=False))
def test_hyp2f1_derivative_property(a, b, z):
    # d/dz F(a,b;c;z) = (a b / c) F(a+1, b+1; c+1; z)
    c = a + b + 1.5
    h = 1e-5
    num = (hyp2f1(a, b, c, z + h) - hyp2f1(a, b, c, z - h)) / (2.0 * h)
    ana = a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z)
    assert abs(num - ana) <= 1e-6 * max(1.0, abs(ana))


@settings(max_examples=60, deadline=None)
@given(a=st.floats(min_value=0.2, max_value=2.0),
       im_a=st.floats(min_value=0.05, max_value=0.45),
       b=st.floats(min_value=0.2, max_value=2.0),
       im_b=st.floats(min_value=-0.45, max_value=-0.05),
       z=st.floats(min_value=-3.0, max_value=0.45))
def test_pfaff_route_property(a, im_a, b, im_b, z):
    # F(a,b;c;z) = (1-z)^(-a) F(a, c-b; c; z/(z-1)), two evaluation routes;
    # the opposite-sign imaginary parts keep b - a off the integers, where
    # the transformed route's connection formula would be degenerate
    a = complex(a, im_a)
    b = complex(b, im_b)
    c = a + b + 1.5
    lhs = hyp2f1(a, b, c, z)
    rhs = complex_power(1.0 - z, -a) * hyp2f1(a, c - b, c, z / (z - 1.0))
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


@settings(max_examples=40, deadline=None)
@given(delta=st.floats(min_value=-1e-7, max_value=1e-7),
       z=st.floats(min_value=-0.5, max_value=0.45))
def test_regularized_continuity_property(delta, z):
    # the regularized function crosses c = -1 without a jump
    at_pole = hyp2f1_regularized(0.5, 1.5, -1.0, z)
    near = hyp2f1_regularized(0.5, 1.5, -1.0 + delta, z)
    assert abs(near - at_pole) <= 1e-5 * max(1.0, abs(at_pole))


@settings(max_examples=40, deadline=None)
@given(a=_complex_param(), b=_complex_param(),
       z=st.floats(min_value=-0.5, max_value=0.45))
def test_regularized_matches_ratio_property(a, b, z):
    # away from Gamma poles the regularized form is the plain ratio
    c = a + b + 1.5
    lhs = hyp2f1_regularized(a, b, c, z)
    rhs = hyp2f1(a, b, c, z) * rgamma_c(c)
    assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))
