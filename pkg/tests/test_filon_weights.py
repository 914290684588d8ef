import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fccs.filon_weights import (
    RegimeError,
    bessel_moment,
    moments,
    oracle_table,
    oracle_weight,
    weights_osc,
    weights_zero,
)


def test_zero_frequency_moments():
    np.testing.assert_allclose(weights_zero(2).weights, [2, 0, -2 / 3])


def test_w0_closed_form():
    assert abs(weights_osc(math.pi, 0).weights[0]) < 1e-15


def test_w1_closed_form():
    assert weights_osc(math.pi, 1).weights[1] == pytest.approx(2j / math.pi, abs=1e-14)


@pytest.mark.parametrize("omega", [1.0, 2.0, 7.3, 40.0, 300.0])
def test_low_moments_closed_forms(omega):
    W = weights_osc(omega, 1).weights
    assert W[0] == pytest.approx(2 * math.sin(omega) / omega, abs=1e-14)
    assert W[1] == pytest.approx(2j * (math.sin(omega) - omega * math.cos(omega)) / omega**2, abs=1e-14)


def test_out_of_regime():
    with pytest.raises(RegimeError):
        weights_osc(0.5, 4)


def test_oracle_at_zero():
    assert oracle_weight(0.0, 0) == pytest.approx(2.0, abs=1e-14)


def test_oracle_at_pi():
    assert abs(oracle_weight(math.pi, 0)) < 1e-13


def test_oracle_matches_recursion():
    assert abs(oracle_weight(7.3, 5) - weights_osc(7.3, 5).weights[5]) < 1e-12


def test_tables_are_read_only():
    with pytest.raises(ValueError):
        weights_osc(3.0, 4).weights[0] = 0


@pytest.mark.parametrize("omega", [1.0, 2.5, 10.0, 101.53])
def test_recursion_against_oracle(omega):
    np.testing.assert_allclose(weights_osc(omega, 128).weights, oracle_table(omega, 128), rtol=0, atol=1e-12)


@pytest.mark.parametrize("omega", [0.3, 0.9])
def test_bessel_series_below_threshold(omega):
    for n in (0, 1, 4, 9):
        assert abs(bessel_moment(omega, n) - oracle_weight(omega, n)) < 1e-13


@settings(max_examples=40, deadline=None)
@given(st.floats(1.0, 500.0), st.integers(0, 40))
def test_conjugate_symmetry(omega, N):
    np.testing.assert_allclose(moments(-omega, N), np.conj(moments(omega, N)), atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.0, 500.0), st.integers(0, 40))
def test_parity_real_and_imaginary(omega, N):
    W = moments(omega, N)
    assert np.all(np.abs(W[0::2].imag) < 1e-15)
    assert np.all(np.abs(W[1::2].real) < 1e-15)


@settings(max_examples=30, deadline=None)
@given(st.floats(1.0, 1000.0), st.integers(0, 60))
def test_moments_bounded(omega, N):
    # |W_n| <= int |T_n| <= 2
    assert np.all(np.abs(moments(omega, N)) <= 2.0 + 1e-12)
