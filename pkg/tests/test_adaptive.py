import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fccs.adaptive import BUDGET, CONVERGED, EXHAUSTED, NodeCache, adaptive_integrate
from fccs.integrands import get_integrand, nhalf_reference
from fccs.sparse import fccs_integrate


def ones(Y):
    return np.ones(len(Y))


def smooth(Y):
    return np.exp(0.3 * Y.sum(axis=1)) / (2.0 + Y[:, 0])


def test_constant_stops_after_root_and_neighbours():
    a, k = (1.0, 2.0, -0.5), 9.0
    res = adaptive_integrate(ones, k, a, 1e-3)
    exact = math.prod(2 * math.sin(k * aj) / (k * aj) for aj in a)
    assert res.status == CONVERGED
    assert abs(res.value - exact) < 1e-13
    assert len(res.indices) == 1 + len(a)


@pytest.mark.parametrize("d, tol, max_evals", [(4, 1e-4, 200), (8, 1e-6, 600)])
def test_field_integrand(d, tol, max_evals):
    f = get_integrand("nhalf:0.5")
    ref = nhalf_reference(0.5, 101.53, d)
    res = adaptive_integrate(f, 101.53, f.default_a(d), tol)
    assert abs(res.value - ref) / abs(ref) <= 1e-6
    assert res.evals <= max_evals


def test_field_integrand_eval_counts():
    f = get_integrand("nhalf:0.5")
    assert adaptive_integrate(f, 101.53, f.default_a(4), 1e-4).evals == 53
    assert adaptive_integrate(f, 101.53, f.default_a(8), 1e-6).evals == 151


@pytest.mark.parametrize("d, r", [(2, 5), (3, 4), (4, 3)])
def test_telescopes_to_standard_rule(d, r):
    a = np.linspace(1.0, 2.0, d)
    res = adaptive_integrate(smooth, 30.0, a, 1e-300, budget=10**9, max_level_sum=r + d - 1)
    assert res.status == EXHAUSTED
    assert abs(res.value - fccs_integrate(smooth, 30.0, a, r)) < 1e-12


def test_budget_status():
    res = adaptive_integrate(smooth, 30.0, (1.0, 1.0, 1.0), 1e-14, budget=20)
    assert res.status == BUDGET
    assert res.evals >= 20


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.floats(1e-8, 1e-2), st.floats(1.0, 80.0))
def test_index_set_is_downward_closed(d, tol, k):
    res = adaptive_integrate(smooth, k, np.ones(d), tol, budget=400)
    idx = set(res.indices)
    for l in idx:
        for j in range(d):
            if l[j] > 1:
                assert l[:j] + (l[j] - 1,) + l[j + 1:] in idx


def test_evals_count_distinct_nodes():
    cache = NodeCache(smooth)
    res = adaptive_integrate(smooth, 20.0, (1.0, 1.0), 1e-8, cache=cache)
    assert res.evals == cache.evals


def test_shared_cache_reuses_samples():
    calls = []

    def f(Y):
        calls.append(len(Y))
        return smooth(Y)

    cache = NodeCache(f)
    adaptive_integrate(f, 20.0, (1.0, 1.0), 1e-6, cache=cache)
    before = sum(calls)
    adaptive_integrate(f, 20.0, (-1.0, -1.0), 1e-6, cache=cache)
    assert sum(calls) - before < before


def test_bad_arguments():
    with pytest.raises(ValueError):
        adaptive_integrate(ones, 1.0, (1.0,), 0.0)
    with pytest.raises(ValueError):
        adaptive_integrate(ones, 1.0, (1.0,), 1e-3, budget=0)
