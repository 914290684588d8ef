import cmath

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from fccs.fields import CallableMode, ConstantMode, Field, PolyMode, PositivityError, builtin_model, constant_field, linear_source, sine_field, zero_source
from fccs.hna import (
    HelmholtzProblem,
    ModelSampler,
    NotStoredError,
    SpatialMesh,
    alpha0_closed_form,
    assemble_u1,
    boundary_residuals,
    f_sequence,
    solve,
    solve_batch,
    solve_order0,
    solve_order1,
    solve_order2,
)


def problem(k=20.0, field=None, source=None, **kw):
    return HelmholtzProblem(k, field or constant_field(), source or zero_source(), **kw)


def bump():
    # n(1) = 1 and n'(1) = 0
    return Field([(1.0, ConstantMode(1.0)), (1.0, PolyMode(Polynomial([0, 0, 0.4, -0.8, 0.4])))])


def test_f_sequence_linear_source():
    fs = f_sequence(problem(k=5.0, source=linear_source()))
    assert fs.F2(0.3) == pytest.approx(0.3)
    assert fs.dF2(0.3) == pytest.approx(1.0)
    assert fs.BR_F2 == pytest.approx(1 - 5j)


def test_f_sequence_zero_source():
    fs = f_sequence(problem())
    assert fs.F2_0 == 0 and fs.BR_F2 == 0


def test_f_sequence_rejects_vanishing_index():
    with pytest.raises(PositivityError):
        f_sequence(problem(field=sine_field(0.5, [-1.0])))


def test_order0_homogeneous():
    o = solve_order0(problem())
    assert o.alpha1 == pytest.approx(1.0, abs=1e-14)
    assert abs(o.alpha2) < 1e-14


def test_order0_flat_at_right_end():
    p = problem(k=30.0, field=bump())
    assert abs(solve_order0(p).alpha2) < 1e-14


def test_order0_closed_form():
    p = problem(k=30.0, field=sine_field(1.0, [0.3]))
    assert solve_order0(p).alpha2 == pytest.approx(alpha0_closed_form(p), abs=1e-14)


def test_order1_vanishes_for_constant_medium():
    o = solve_order1(problem(), SpatialMesh(1, 64, 4))
    assert np.max(np.abs(o.mu1)) < 1e-14 and np.max(np.abs(o.nu1)) < 1e-14


def test_order1_linear_in_perturbation():
    mesh = SpatialMesh(1, 256, 6)
    big = np.max(np.abs(solve_order1(problem(field=sine_field(1.0, [0.02])), mesh).mu1))
    small = np.max(np.abs(solve_order1(problem(field=sine_field(1.0, [0.01])), mesh).mu1))
    assert big / small == pytest.approx(2.0, rel=0.05)


def test_order2_vanishes_without_source():
    o = solve_order2(problem(), SpatialMesh(4, 64, 4))
    assert np.max(np.abs(o.mu2)) < 1e-14 and np.max(np.abs(o.nu2)) < 1e-14


@pytest.mark.parametrize("k", [3.0, 40.0, 300.0])
def test_homogeneous_medium_plane_wave(k):
    sol = solve(problem(k=k), SpatialMesh(4, 64, 4))
    for x in sol.x:
        assert abs(assemble_u1(sol, x) - cmath.exp(1j * k * x)) < 1e-12


@pytest.mark.parametrize("k", [5.0, 64.0])
def test_homogeneous_medium_linear_source_exact(k):
    # u = x/k^2 + A e^{ikx} + B e^{-ikx} solves the problem exactly
    B = (1 - 1j * k) / (2j * k**3) * cmath.exp(1j * k)
    A = 1 - B
    exact = 1 / k**2 + A * cmath.exp(1j * k) + B * cmath.exp(-1j * k)
    sol = solve(problem(k=k, source=linear_source()), SpatialMesh(1, 64, 4))
    assert abs(assemble_u1(sol, 1.0) - exact) < 1e-12


def test_boundary_conditions_hold():
    field = builtin_model(4).at([0.3, -0.7, 1.0, 0.2])
    sol = solve(problem(k=50.0, field=field, source=linear_source()))
    rL, rR = boundary_residuals(sol)
    assert abs(rL) < 1e-12 and abs(rR) < 1e-9


def test_only_stored_nodes():
    sol = solve(problem(), SpatialMesh(2, 16, 2))
    assemble_u1(sol, 0.5)
    with pytest.raises(NotStoredError):
        assemble_u1(sol, 0.3)


def test_batch_agrees_with_single_solves():
    model = builtin_model(3)
    mesh = SpatialMesh(2, 128, 6)
    Y = np.array([[0.0, 0.0, 0.0], [0.5, -0.5, 1.0], [-1.0, 1.0, -1.0]])
    b = solve_batch(40.0, ModelSampler(model, mesh), Y, linear_source())
    for y, u in zip(Y, b.u1()):
        sol = solve(problem(k=40.0, field=model.at(y), source=linear_source()), mesh)
        np.testing.assert_allclose(u, [assemble_u1(sol, x) for x in mesh.coarse], atol=1e-13)


def test_validate():
    problem(field=sine_field(1.0, [0.3])).validate()
    wrong = CallableMode((lambda x: 1 + 0.1 * x, lambda x: 0.2 + 0 * x, lambda x: 0 * x, lambda x: 0 * x),
                         lambda x: x + 0.05 * x**2)
    with pytest.raises(ValueError, match="derivative"):
        problem(field=Field([(1.0, wrong)])).validate()
    with pytest.raises(ValueError):
        problem(k=0.0).validate()


def test_mesh_requires_even_fine_count():
    with pytest.raises(ValueError):
        SpatialMesh(1, 7, 4)
