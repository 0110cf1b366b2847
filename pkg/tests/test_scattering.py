"""Tests for the closed-form scattering solver."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dkp1d.errors import DomainError
from dkp1d.potentials import PotentialSpec, Shape
from dkp1d.scattering import (SpinorRegion, find_resonances, h_table,
                              matching_coefficients, probability_current,
                              scattering_params, spinor_eval,
                              square_barrier_transmission, transmission,
                              transmission_grid)
from dkp1d.specfun import negative_axis_branch

# frozen output of this solver at a reference point, cross-checked against
# direct integration to ~1e-10 (see the oracle tests)
_T_REF = 0.05347140667089171

_BARRIER = PotentialSpec(shape=Shape.WoodsSaxonBarrier, a=2.0, L=2.0, V0=5.0)


def test_transmission_frozen_value():
    pt = transmission(2.5, _BARRIER)
    assert abs(pt.T - _T_REF) <= 1e-13
    assert abs(pt.T + pt.R - 1.0) <= 1e-12


def test_transmission_rejects_subcritical_energy():
    with pytest.raises(DomainError):
        transmission(1.0, _BARRIER)
    with pytest.raises(DomainError):
        transmission(0.5, _BARRIER)


def test_transmission_rejects_wells():
    with pytest.raises(DomainError):
        transmission(2.5, _BARRIER.flipped())


def test_resonance_quadruple():
    found = find_resonances(_BARRIER, 1.01, 4.0)
    expected = (1.30086, 1.96049, 2.67321, 3.47053)
    assert len(found) == 4
    assert np.allclose(found, expected, atol=1e-3)
    for e in found:
        assert transmission(e, _BARRIER).T > 1.0 - 1e-8


def test_single_resonance_window():
    spec = PotentialSpec(shape=Shape.WoodsSaxonBarrier, a=3.0, L=0.4, V0=5.0)
    found = find_resonances(spec, 1.01, 4.0)
    assert len(found) == 1
    assert abs(found[0] - 1.57991) <= 1e-3


def test_grid_matches_scalar():
    es = np.linspace(1.05, 3.9, 17)
    T, R = transmission_grid(es, _BARRIER)
    pts = [transmission(float(e), _BARRIER) for e in es]
    assert np.allclose(T, [p.T for p in pts], rtol=0, atol=1e-12)
    assert np.allclose(R, [p.R for p in pts], rtol=0, atol=1e-12)


def test_branch_point_continuity():
    # E = V0 - 1 and E = V0 + 1 are branch points of the interior momentum;
    # the averaged evaluation must join smoothly with its neighborhood
    for e_star in (4.0, 6.0):
        t0 = transmission(e_star, _BARRIER).T
        t_lo = transmission(e_star - 1e-7, _BARRIER).T
        t_hi = transmission(e_star + 1e-7, _BARRIER).T
        assert abs(t0 - 0.5 * (t_lo + t_hi)) <= 1e-6


def test_branch_convention_invariance():
    for e in np.linspace(1.02, 3.98, 9):
        with negative_axis_branch(+1.0):
            p1 = transmission(float(e), _BARRIER)
        with negative_axis_branch(-1.0):
            p2 = transmission(float(e), _BARRIER)
        assert abs(p1.T - p2.T) <= 1e-10
        assert abs(p1.R - p2.R) <= 1e-10


def test_square_barrier_resonance_and_unitarity():
    pt = square_barrier_transmission(2.0, 0.4, 4.0)
    assert abs(pt.T - 1.0) <= 1e-12
    for e in np.linspace(1.01, 6.0, 40):
        p = square_barrier_transmission(float(e), 0.4, 4.0)
        assert abs(p.T + p.R - 1.0) <= 1e-12
        assert 0.0 <= p.T <= 1.0 + 1e-12


def test_square_barrier_free_limit():
    pt = square_barrier_transmission(1.7, 0.4, 0.0)
    assert abs(pt.T - 1.0) <= 1e-14
    assert abs(pt.R) <= 1e-14


def test_scattering_params_identities():
    p = scattering_params(2.5, _BARRIER)
    assert abs(p.k - np.sqrt(2.5 ** 2 - 1.0)) <= 1e-15
    assert abs(p.nu - 1j * p.k / _BARRIER.a) <= 1e-15
    assert abs(p.lam1 - (p.lam - 0.5)) <= 1e-15
    # mu^2 a^2 = 1 - (E - V0)^2 on the chosen branch
    assert abs((p.mu * _BARRIER.a) ** 2 - (1.0 - (2.5 - 5.0) ** 2)) <= 1e-12


def test_current_conservation_and_coefficients():
    e = 2.5
    params = scattering_params(e, _BARRIER)
    table = h_table(params, _BARRIER.a, _BARRIER.L)
    coeffs = matching_coefficients(params, table, _BARRIER.a, _BARRIER.L)
    xs_left = np.linspace(-30.0, -5.0, 9)
    xs_right = np.linspace(0.0, 30.0, 9)
    j_inc = probability_current(
        spinor_eval(SpinorRegion.IncidentLeft, xs_left, coeffs, params,
                    _BARRIER))
    j_ref = probability_current(
        spinor_eval(SpinorRegion.ReflectedLeft, xs_left, coeffs, params,
                    _BARRIER))
    j_tra = probability_current(
        spinor_eval(SpinorRegion.TransmittedRight, xs_right, coeffs, params,
                    _BARRIER))
    # the transmitted current is conserved through the falling wall
    assert np.max(np.abs(j_tra - j_tra[0])) <= 1e-9 * abs(j_tra[0])
    # incident + reflected = transmitted, i.e. |A|^2 - |B|^2 = 1
    assert abs(j_inc[0] + j_ref[0] - j_tra[0]) <= 1e-9 * abs(j_tra[0])
    # and the flux ratios reproduce T and R
    pt = transmission(e, _BARRIER)
    assert abs(j_tra[0] / j_inc[0] - pt.T) <= 1e-12
    assert abs(-j_ref[0] / j_inc[0] - pt.R) <= 1e-12


def test_resonances_sorted_inside_window():
    found = find_resonances(_BARRIER, 1.01, 4.0)
    assert found == sorted(found)
    assert all(1.01 < e < 4.0 for e in found)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(min_value=0.5, max_value=12.0),
       L=st.floats(min_value=0.2, max_value=3.0),
       V0=st.floats(min_value=0.3, max_value=8.0),
       E=st.floats(min_value=1.02, max_value=6.0))
def test_unitarity_property(a, L, V0, E):
    spec = PotentialSpec(shape=Shape.WoodsSaxonBarrier, a=a, L=L, V0=V0)
    pt = transmission(E, spec)
    assert abs(pt.T + pt.R - 1.0) <= 1e-8
    assert -1e-10 <= pt.T <= 1.0 + 1e-10
    assert -1e-10 <= pt.R <= 1.0 + 1e-10


@settings(max_examples=30, deadline=None)
@given(L=st.floats(min_value=0.1, max_value=3.0),
       V0=st.floats(min_value=0.0, max_value=8.0),
       E=st.floats(min_value=1.01, max_value=6.0))
def test_square_unitarity_property(L, V0, E):
    pt = square_barrier_transmission(E, L, V0)
    assert abs(pt.T + pt.R - 1.0) <= 1e-10
