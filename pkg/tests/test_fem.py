import cmath

import numpy as np
import pytest

from fccs.fem import FemModelSolver, fem_solve
from fccs.fields import builtin_model, constant_field, linear_source, zero_source
from fccs.hna import HelmholtzProblem


def homogeneous(k, source=None):
    return HelmholtzProblem(k, constant_field(), source or zero_source())


def test_plane_wave():
    u = fem_solve(homogeneous(16.0), 2.0**-12).at(1.0)
    assert abs(u - cmath.exp(16j)) < 1e-3


def test_second_order_convergence():
    errs = [abs(fem_solve(homogeneous(16.0), 2.0**-p).at(1.0) - cmath.exp(16j)) for p in (9, 10, 11)]
    for e0, e1 in zip(errs, errs[1:]):
        assert 3.5 < e0 / e1 < 4.5


def test_dirichlet_row_exact():
    assert fem_solve(homogeneous(10.0, linear_source()), 2.0**-8).u[0] == 1.0


def test_strong_residual_consistent():
    k = 16.0
    res = []
    for p in (10, 11):
        s = fem_solve(homogeneous(k, linear_source()), 2.0**-p)
        u, x, h = s.u, s.x, s.h
        r = (u[2:] - 2 * u[1:-1] + u[:-2]) / h**2 + k**2 * u[1:-1] - x[1:-1]
        res.append(np.max(np.abs(r)))
        assert res[-1] <= 20 * h
    assert res[0] / res[1] > 1.9


def test_pollution_warning():
    with pytest.warns(RuntimeWarning, match="pollution"):
        fem_solve(homogeneous(100.0), 2.0**-8)


def test_mesh_must_divide_interval():
    with pytest.raises(ValueError):
        fem_solve(homogeneous(1.0), 0.3)


def test_model_solver_matches_single_solve():
    model = builtin_model(3)
    y = np.array([0.2, -0.4, 0.9])
    h = 2.0**-10
    u = FemModelSolver(model, linear_source(), h)(20.0, y)
    ref = fem_solve(HelmholtzProblem(20.0, model.at(y), linear_source()), h).u
    np.testing.assert_allclose(u, ref, atol=1e-12)
