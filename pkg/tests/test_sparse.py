import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fccs.cheb1d import TWO_POINT
from fccs.fcc1d import integrate_1d
from fccs.filon_weights import oracle_weight
from fccs.integrands import get_integrand
from fccs.sparse import (
    NonFiniteSampleError,
    combination_coeffs,
    exact_node_count,
    fccs_integrate,
    lambda_set,
    make_plan,
    mueller_gronbach_estimate,
    phase_split,
    tensor_cc_integrate,
)


def ones(Y):
    return np.ones(len(Y))


def test_lambda_smallest():
    assert lambda_set(3, 3) == [(1, 1, 1)]


def test_lambda_binomial():
    assert len(lambda_set(5, 3)) == 10


def test_lambda_by_hand():
    assert set(lambda_set(4, 2)) == {(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2)}


def test_lambda_empty():
    with pytest.raises(ValueError):
        lambda_set(2, 3)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 6))
def test_lambda_cardinality(d, extra):
    q = d + extra
    assert len(lambda_set(q, d)) == math.comb(q, d)


def test_combination_r2_d2():
    assert dict(combination_coeffs(2, 2)) == {(1, 1): -1, (1, 2): 1, (2, 1): 1}


@pytest.mark.parametrize("d", [1, 2, 5])
def test_combination_r1(d):
    assert combination_coeffs(1, d) == [((1,) * d, 1)]


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(1, 6))
def test_combination_coefficients_sum_to_one(r, d):
    assert sum(c for _, c in combination_coeffs(r, d)) == 1


def test_phase_split_below_threshold():
    s = phase_split(100, [0.005])
    assert s.a_tilde[0] == 0 and s.a_hat[0] == 0.005


def test_phase_split_boundary_included():
    s = phase_split(100, [0.01])
    assert s.a_tilde[0] == 0.01 and s.a_hat[0] == 0


def test_phase_split_mixed():
    s = phase_split(2, [1, 0, -3])
    np.testing.assert_array_equal(s.a_tilde, [1, 0, -3])
    np.testing.assert_array_equal(s.a_hat, 0)


def test_exactness_products_of_squares():
    f = get_integrand("squares")
    a = (1.0, 0.0, 1.0, 0.0)
    k = math.pi / 2
    assert abs(fccs_integrate(f, k, a, 5) - f.exact(k, a)) <= 1e-14


@pytest.mark.parametrize("a", [(1.0, 2.0), (1.0, -1.5, 3.0)])
def test_constant_r1(a):
    k = 7.0
    exact = math.prod(2 * math.sin(k * aj) / (k * aj) for aj in a)
    assert fccs_integrate(ones, k, a, 1) == pytest.approx(exact, abs=1e-14)


def test_cosprod_relative_error_r4():
    f = get_integrand("cosprod:2")
    ref = fccs_integrate(f, 101.53, (1, 1, 1), 10)
    rel = abs(fccs_integrate(f, 101.53, (1, 1, 1), 4) - ref) / abs(ref)
    assert rel == pytest.approx(4.10e-2, rel=0.05)


def test_node_counts_small():
    assert exact_node_count(1, 5) == 1
    assert exact_node_count(3, 2) == 13


@pytest.mark.parametrize("r, d, n", [(4, 4, 137), (5, 4, 401), (6, 4, 1105), (4, 6, 389), (6, 8, 15713)])
def test_node_counts_reference(r, d, n):
    assert exact_node_count(r, d) == n


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_node_count_asymptotics(d):
    ratio = exact_node_count(10, d) / mueller_gronbach_estimate(10, d)
    assert 0.5 < ratio < 2


@pytest.mark.parametrize("r, d", [(3, 2), (4, 3), (5, 2), (3, 4)])
@pytest.mark.parametrize("variant", ["midpoint", "cc2"])
def test_plan_deduplicates_to_exact_count(r, d, variant):
    assert make_plan(3.0, (1.0,) * d, r, variant).num_nodes == exact_node_count(r, d, variant)


def test_tensor_cc_without_oscillation():
    assert tensor_cc_integrate(ones, 0.0, [1.0], 4) == pytest.approx(2.0)


def test_tensor_cc_resolves_with_many_points():
    assert abs(tensor_cc_integrate(ones, 20.0, [1.0], 64) - 2 * math.sin(20) / 20) < 1e-10


def test_tensor_cc_worse_than_fccs():
    a, k = (1.0, 0.0), 20.0
    exact = 2 * 2 * math.sin(20) / 20
    cc = abs(tensor_cc_integrate(ones, k, a, 4) - exact)
    fc = abs(fccs_integrate(ones, k, a, 3) - exact)  # 13 nodes against 25
    assert fc < 1e-12 < cc


@pytest.mark.filterwarnings("ignore:divide by zero")
def test_non_finite_sample_names_node():
    with pytest.raises(NonFiniteSampleError, match="node"):
        fccs_integrate(lambda Y: 1.0 / Y[:, 0], 10.0, (1.0, 1.0), 2)


def _min_level(n):
    return 1 if n == 0 else 2 if n <= 2 else math.ceil(math.log2(n)) + 1


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(1, 5),
    st.lists(st.integers(0, 8), min_size=3, max_size=3),
    st.lists(st.floats(1.0, 60.0), min_size=3, max_size=3),
)
def test_combination_matches_direct_smolyak(d, r, degrees, omegas):
    # the Smolyak rule is exact on tensor Chebyshev polynomials in its space
    degrees, omegas = degrees[:d], omegas[:d]
    if sum(_min_level(n) for n in degrees) > r + d - 1:
        degrees = [0] * d
    k = 1.0
    f = lambda Y: np.prod([np.cos(n * np.arccos(np.clip(Y[:, j], -1, 1))) for j, n in enumerate(degrees)], axis=0)
    direct = math.prod(oracle_weight(w, n) for w, n in zip(omegas, degrees))
    assert abs(fccs_integrate(f, k, omegas, r) - direct) < 1e-10


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.floats(-200.0, 200.0), st.sampled_from(["midpoint", "cc2"]))
def test_one_dimension_reduces_to_fcc(r, omega, variant):
    g = lambda y: np.exp(np.sin(2 * y))
    sparse = fccs_integrate(lambda Y: g(Y[:, 0]), 1.0 if omega else 0.5, [omega or 0.0], r, variant)
    single = integrate_1d(g, omega, r, variant)
    assert abs(sparse - single) < 1e-14


def test_two_point_variant_node_counts():
    assert [exact_node_count(r, 2, TWO_POINT) for r in range(1, 6)] == [4, 8, 17, 37, 81]
