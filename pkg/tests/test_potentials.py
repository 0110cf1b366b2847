"""Tests for the potential shapes and their parameter handling."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dkp1d.errors import DomainError
from dkp1d.potentials import PotentialSpec, Shape, evaluate, symmetry_check

_params = st.floats(min_value=0.05, max_value=50.0)
_xs = st.floats(min_value=-80.0, max_value=80.0)


def _spec(shape, a=1.0, L=1.0, V0=1.0):
    return PotentialSpec(shape=shape, a=a, L=L, V0=V0)


def test_center_values():
    ws = _spec(Shape.WoodsSaxonBarrier, a=2.0, L=2.0, V0=5.0)
    assert math.isclose(evaluate(ws, 0.0), 5.0 / (1.0 + math.exp(-4.0)))
    assert evaluate(_spec(Shape.SquareBarrier, L=0.4, V0=4.0), 0.0) == 4.0
    assert evaluate(_spec(Shape.CuspBarrier, a=1.2, V0=5.0), 0.0) == 5.0
    assert evaluate(_spec(Shape.SquareWell, L=0.4, V0=4.0), 0.0) == -4.0


def test_square_wall_is_closed():
    spec = _spec(Shape.SquareBarrier, L=0.4, V0=4.0)
    assert evaluate(spec, 0.4) == 4.0
    assert evaluate(spec, -0.4) == 4.0
    assert evaluate(spec, 0.4 + 1e-12) == 0.0


def test_far_field_vanishes():
    for shape in Shape:
        spec = _spec(shape, a=2.0, L=1.5, V0=3.0)
        assert abs(evaluate(spec, 60.0)) < 1e-10


def test_woods_saxon_wall_midpoint():
    # at |x| = L the smooth wall sits at half height
    spec = _spec(Shape.WoodsSaxonBarrier, a=7.0, L=1.3, V0=2.0)
    assert math.isclose(evaluate(spec, 1.3), 1.0, rel_tol=1e-12)


def test_cusp_ignores_L_square_ignores_a():
    x = np.linspace(-5.0, 5.0, 41)
    c1 = evaluate(_spec(Shape.CuspBarrier, a=1.2, L=1.0, V0=5.0), x)
    c2 = evaluate(_spec(Shape.CuspBarrier, a=1.2, L=9.0, V0=5.0), x)
    assert np.array_equal(c1, c2)
    s1 = evaluate(_spec(Shape.SquareBarrier, a=1.0, L=2.0, V0=5.0), x)
    s2 = evaluate(_spec(Shape.SquareBarrier, a=64.0, L=2.0, V0=5.0), x)
    assert np.array_equal(s1, s2)


def test_parameter_validation():
    with pytest.raises(DomainError):
        PotentialSpec(shape=Shape.WoodsSaxonBarrier, a=-1.0)
    with pytest.raises(DomainError):
        PotentialSpec(shape=Shape.WoodsSaxonBarrier, L=0.0)
    with pytest.raises(DomainError):
        PotentialSpec(shape=Shape.WoodsSaxonBarrier, a=math.nan)
    # V0 = 0 is the free case and must be allowed
    assert PotentialSpec(shape=Shape.WoodsSaxonBarrier, V0=0.0).V0 == 0.0


def test_flipped_round_trip():
    for shape in Shape:
        spec = _spec(shape, a=3.0, L=0.7, V0=2.5)
        assert spec.flipped().flipped() == spec
        assert spec.flipped().is_well != spec.is_well


def test_json_round_trip():
    spec = _spec(Shape.CuspWell, a=1.2, L=0.9, V0=5.0)
    assert PotentialSpec.from_json(spec.to_json()) == spec
    with pytest.raises(DomainError):
        PotentialSpec.from_json('{"shape": "CuspWell", "a": 1.2}')


def test_vectorized_matches_scalar():
    spec = _spec(Shape.WoodsSaxonBarrier, a=2.0, L=2.0, V0=5.0)
    xs = np.linspace(-6.0, 6.0, 13)
    batch = evaluate(spec, xs)
    assert batch.shape == xs.shape
    assert np.array_equal(batch, [evaluate(spec, x) for x in xs])


@settings(max_examples=100, deadline=None)
@given(shape=st.sampled_from(list(Shape)), a=_params, L=_params, V0=_params,
       x=_xs)
def test_even_symmetry_property(shape, a, L, V0, x):
    spec = _spec(shape, a=a, L=L, V0=V0)
    assert symmetry_check(spec, x) == 0.0


@settings(max_examples=100, deadline=None)
@given(shape=st.sampled_from([Shape.WoodsSaxonBarrier, Shape.SquareBarrier,
                              Shape.CuspBarrier]),
       a=_params, L=_params, V0=_params, x=_xs)
def test_well_mirrors_barrier_property(shape, a, L, V0, x):
    barrier = _spec(shape, a=a, L=L, V0=V0)
    assert evaluate(barrier.flipped(), x) == -evaluate(barrier, x)


@settings(max_examples=100, deadline=None)
@given(shape=st.sampled_from([Shape.WoodsSaxonBarrier, Shape.SquareBarrier,
                              Shape.CuspBarrier]),
       a=_params, L=_params, V0=_params,
       x1=st.floats(min_value=0.0, max_value=40.0),
       dx=st.floats(min_value=0.0, max_value=40.0))
def test_barrier_decreases_outward_property(shape, a, L, V0, x1, dx):
    spec = _spec(shape, a=a, L=L, V0=V0)
    assert evaluate(spec, x1 + dx) <= evaluate(spec, x1) + 1e-15


@settings(max_examples=60, deadline=None)
@given(a=_params, L=_params, V0=_params, x=_xs)
def test_bounded_by_height_property(a, L, V0, x):
    spec = _spec(Shape.WoodsSaxonBarrier, a=a, L=L, V0=V0)
    assert 0.0 <= evaluate(spec, x) <= V0
