"""Piecewise-linear finite elements for the 1D Helmholtz problem.

Weak form (test functions with ``v(0) = 0``; the Robin condition
``u'(1) = i k n_inf u(1)`` enters through the boundary term)::

    -int u'v' + k^2 int n^2 u v + i k n_inf u(1) v(1) = int F v

Element integrals use 3-point Gauss; ``u(0) = u_L`` replaces the first row
and is eliminated from the second.
The tridiagonal system is solved directly.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, solve_banded
from scipy.special import roots_legendre

from .fields import AffineModel, Source
from .hna import HelmholtzProblem, ResonanceError

_GX, _GW = roots_legendre(3)


@dataclass(frozen=True)
class FemSolution:
    h: float
    x: np.ndarray
    u: np.ndarray

    def at(self, x: float) -> complex:
        i = int(round(x / self.h))
        if abs(i * self.h - x) > 1e-12:
            raise ValueError(f"x={x} is not a mesh node")
        return complex(self.u[i])


def _elements(n_el: int) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    h = 1.0 / n_el
    left = np.arange(n_el) * h
    t = 0.5 * (_GX + 1.0)
    xg = left[:, None] + h * t[None, :]
    return h, xg, t, 0.5 * h * _GW


def _assemble_solve(k: float, u_L: complex, n_inf: float, n2g: np.ndarray, Fg: np.ndarray,
                    h: float, t: np.ndarray, wg: np.ndarray) -> np.ndarray:
    n_el = n2g.shape[0]
    phi = np.stack([1.0 - t, t])  # local shape functions at Gauss points
    # element mass with n^2 weight: M_ab = sum_g w n^2 phi_a phi_b
    m = np.einsum("eg,ag,bg,g->eab", n2g, phi, phi, wg)
    K = np.array([[1.0, -1.0], [-1.0, 1.0]]) / h
    A_el = -K[None] + k**2 * m
    b_el = np.einsum("eg,ag,g->ea", Fg, phi, wg)

    n = n_el + 1
    diag = np.zeros(n, dtype=complex)
    sup = np.zeros(n - 1, dtype=complex)
    sub = np.zeros(n - 1, dtype=complex)
    rhs = np.zeros(n, dtype=complex)
    np.add.at(diag, np.arange(n_el), A_el[:, 0, 0])
    np.add.at(diag, np.arange(1, n), A_el[:, 1, 1])
    sup += A_el[:, 0, 1]
    sub += A_el[:, 1, 0]
    np.add.at(rhs, np.arange(n_el), b_el[:, 0])
    np.add.at(rhs, np.arange(1, n), b_el[:, 1])
    diag[-1] += 1j * k * n_inf
    # Dirichlet row replaced and its column eliminated, so u[0] == u_L exactly
    rhs[1] -= sub[0] * u_L
    diag[0], sup[0], sub[0], rhs[0] = 1.0, 0.0, 0.0, u_L

    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = sup
    ab[1] = diag
    ab[2, :-1] = sub
    try:
        u = solve_banded((1, 1), ab, rhs)
    except LinAlgError as exc:
        raise ResonanceError(f"singular finite-element system: {exc}", np.inf) from None
    if not np.all(np.isfinite(u)):
        raise ResonanceError("finite-element solve produced non-finite values", np.inf)
    return u


def _num_elements(h: float) -> int:
    n_el = int(round(1.0 / h))
    if n_el < 1 or abs(n_el * h - 1.0) > 1e-9:
        raise ValueError(f"h={h} does not divide [0, 1] into whole elements")
    return n_el


def fem_solve(problem: HelmholtzProblem, h: float) -> FemSolution:
    """Nodal P1 solution on a uniform mesh of width ``h`` (``1/h`` must be an integer)."""
    n_el = _num_elements(h)
    h, xg, t, wg = _elements(n_el)
    if problem.k * h > 0.1:
        warnings.warn(f"k*h = {problem.k * h:.3g} > 0.1: pollution regime", RuntimeWarning, stacklevel=2)
    n2g = problem.field(xg) ** 2
    Fg = problem.source(xg)
    u = _assemble_solve(problem.k, problem.u_L, problem.n_inf, n2g, Fg, h, t, wg)
    return FemSolution(h, np.arange(n_el + 1) * h, u)


class FemModelSolver:
    """Repeated solves for samples of an affine random model on one mesh."""

    def __init__(self, model: AffineModel, source: Source, h: float, u_L: complex = 1.0, n_inf: float = 1.0):
        n_el = _num_elements(h)
        self.h, xg, self._t, self._wg = _elements(n_el)
        self._modes = model.mode_matrix(xg)  # (d+1, n_el, 3)
        self._Fg = source(xg)
        self.u_L, self.n_inf = u_L, n_inf

    def __call__(self, k: float, y) -> np.ndarray:
        c = np.concatenate([[1.0], np.asarray(y, dtype=float).ravel()])
        n = np.tensordot(c, self._modes, axes=(0, 0))
        return _assemble_solve(k, self.u_L, self.n_inf, n**2, self._Fg, self.h, self._t, self._wg)


__all__ = ["FemModelSolver", "FemSolution", "fem_solve"]
