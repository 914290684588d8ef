"""Expectation of the asymptotic Helmholtz solution under an affine random medium.

With ``xi(x, y) = exp(i k N_0(x)) exp(i k a(x).y)`` and ``a_j = N_j``::

    E[u1(x)] = e^{ i k N_0} 2^{-d} int mu~(x, y) e^{ i k a.y} dy
             + e^{-i k N_0} 2^{-d} int nu~(x, y) e^{-i k a.y} dy
             +              2^{-d} int F~(x, y) dy

The first two integrals are oscillatory in ``y``; all three are computed with
the same (standard or adaptive) sparse rule and share one cache of HNA solves.
"""
from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .adaptive import NodeCache, adaptive_integrate
from .cheb1d import MIDPOINT
from .fem import FemModelSolver
from .fields import AffineModel, Source, linear_source
from .hna import ModelSampler, SpatialMesh, solve_batch
from .sparse import make_plan

MAX_REFERENCE_SOLVES = 10**6


class ReferenceBudgetError(ValueError):
    """The brute-force reference would need more solves than allowed."""


@dataclass(frozen=True)
class Standard:
    r: int
    level1_variant: str = MIDPOINT

    def describe(self) -> str:
        return f"standard:{self.r}"


@dataclass(frozen=True)
class Adaptive:
    tol: float
    budget: int = 10_000

    def describe(self) -> str:
        return f"adaptive:{self.tol:g}"


def parse_method(text: str):
    """``"standard:R"`` or ``"adaptive:TAU"``."""
    kind, _, arg = text.partition(":")
    if kind == "standard" and arg:
        return Standard(int(arg))
    if kind == "adaptive" and arg:
        return Adaptive(float(arg))
    raise ValueError(f"method must be standard:R or adaptive:TAU, got {text!r}")


@dataclass
class UQResult:
    value: complex
    parts: tuple[complex, complex, complex]  # mu-, nu- and F-part, phases and 2^-d included
    nodes: tuple[int, int, int]  # N_mu, N_nu, N_F
    method: str
    solves: int  # distinct HNA solves

    @property
    def n_total(self) -> int:
        return sum(self.nodes)


class HNACache:
    """``(mu~, nu~, F~)`` at one coarse node for parameter samples, keyed by exact ``y``."""

    def __init__(
        self,
        k: float,
        model: AffineModel,
        x: float,
        source: Source | None = None,
        mesh: SpatialMesh | None = None,
        u_L: complex = 1.0,
        n_inf: float = 1.0,
        jobs: int = 1,
    ):
        self.k = k
        self.mesh = mesh or SpatialMesh()
        idx = np.flatnonzero(np.abs(self.mesh.coarse - x) <= 1e-14)
        if idx.size == 0:
            raise ValueError(f"x={x} is not a coarse node of the mesh")
        self.node = int(idx[0])
        self.source = source or linear_source()
        self.sampler = ModelSampler(model, self.mesh)
        self.u_L, self.n_inf = u_L, n_inf
        self.jobs = max(1, int(jobs))
        self._store: dict[tuple[float, ...], np.ndarray] = {}
        self._lock = threading.Lock()

    @property
    def solves(self) -> int:
        return len(self._store)

    def _solve(self, Y: np.ndarray) -> np.ndarray:
        b = solve_batch(self.k, self.sampler, Y, self.source, self.u_L, self.n_inf)
        i = self.node
        return np.stack([b.mu_tilde[:, i], b.nu_tilde[:, i], b.F_tilde[:, i]], axis=1)

    def values(self, Y: np.ndarray) -> np.ndarray:
        """``(m, 3)`` array of ``(mu~, nu~, F~)`` at the rows of ``Y``."""
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        keys = [tuple(r) for r in Y.tolist()]
        with self._lock:
            missing = list(dict.fromkeys(k for k in keys if k not in self._store))
        if missing:
            M = np.array(missing)
            chunks = [M[s:s + 256] for s in range(0, len(M), 256)]
            if self.jobs > 1 and len(chunks) > 1:
                with ThreadPoolExecutor(self.jobs) as ex:
                    results = list(ex.map(self._solve, chunks))
            else:
                results = [self._solve(c) for c in chunks]
            with self._lock:
                self._store.update(zip(missing, np.concatenate(results)))
        return np.array([self._store[k] for k in keys])

    def integrand(self, part: int):
        return lambda Y: self.values(Y)[:, part]


def expectation_u1(
    x: float,
    k: float,
    model: AffineModel,
    method,
    source: Source | None = None,
    mesh: SpatialMesh | None = None,
    u_L: complex = 1.0,
    n_inf: float = 1.0,
    jobs: int = 1,
    cache: HNACache | None = None,
) -> UQResult:
    """``E[u1(x)]`` by standard (``Standard(r)``) or adaptive (``Adaptive(tol)``) FCCS."""
    model.check_positive()
    cache = cache or HNACache(k, model, x, source, mesh, u_L, n_inf, jobs)
    d = model.d
    scale = 2.0**-d
    N0 = float(model.n0.antiderivative(np.float64(x)))
    e_plus = np.exp(1j * k * N0)
    if d == 0:
        v = cache.values(np.zeros((1, 0)))[0]
        parts = (e_plus * v[0], v[1] / e_plus, v[2])
        return UQResult(complex(sum(parts)), tuple(map(complex, parts)), (1, 1, 1), method.describe(), cache.solves)
    a = model.phase_vector(x)
    zero = np.zeros(d)

    if isinstance(method, Standard):
        plans = [make_plan(k, s, method.r, method.level1_variant) for s in (a, -a, zero)]
        V = cache.values(plans[0].nodes)
        raw = [plan.integrate_values(V[:, i]) for i, plan in enumerate(plans)]
        counts = (plans[0].num_nodes,) * 3
    elif isinstance(method, Adaptive):
        tols = (method.tol, k * method.tol, method.tol)
        raw, counts = [], []
        for i, (sgn, tol) in enumerate(zip((a, -a, zero), tols)):
            res = adaptive_integrate(cache.integrand(i), k, sgn, tol, method.budget, cache=NodeCache(cache.integrand(i)))
            raw.append(res.value)
            counts.append(res.evals)
        counts = tuple(counts)
    else:
        raise TypeError(f"unknown method {method!r}")

    parts = (scale * e_plus * raw[0], scale * raw[1] / e_plus, scale * raw[2])
    return UQResult(complex(sum(parts)), tuple(complex(p) for p in parts), counts, method.describe(), cache.solves)


def deterministic_u1(x: float, k: float, model: AffineModel, source: Source | None = None,
                     mesh: SpatialMesh | None = None, u_L: complex = 1.0, n_inf: float = 1.0) -> complex:
    """``u1(x)`` of the mean medium ``y = 0``."""
    cache = HNACache(k, model, x, source, mesh, u_L, n_inf)
    v = cache.values(np.zeros((1, model.d)))[0]
    xi = np.exp(1j * k * float(model.n0.antiderivative(np.float64(x))))
    return complex(v[0] * xi + v[1] / xi + v[2])


def reference_expectation(
    x: float,
    k: float,
    model: AffineModel,
    gauss_points_per_dim: int,
    fem_h: float,
    source: Source | None = None,
    u_L: complex = 1.0,
    n_inf: float = 1.0,
    max_solves: int = MAX_REFERENCE_SOLVES,
    jobs: int = 1,
) -> complex:
    """Brute-force ``E[u(x)]``: tensor Gauss-Legendre in ``y``, one FEM solve per node."""
    d = model.d
    total = gauss_points_per_dim**d
    if total > max_solves:
        raise ReferenceBudgetError(
            f"{gauss_points_per_dim}^{d} = {total} finite-element solves exceed the cap of {max_solves}"
        )
    solver = FemModelSolver(model, source or linear_source(), fem_h, u_L, n_inf)
    i = int(round(x / solver.h))
    if abs(i * solver.h - x) > 1e-12:
        raise ValueError(f"x={x} is not a node of the finite-element mesh")
    t, w = roots_legendre(gauss_points_per_dim)
    grids = np.meshgrid(*([t] * d), indexing="ij")
    Y = np.stack([g.ravel() for g in grids], axis=1) if d else np.zeros((1, 0))
    W = np.prod(np.meshgrid(*([w] * d), indexing="ij"), axis=0).ravel() if d else np.ones(1)

    def one(y):
        return solver(k, y)[i]

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            vals = np.array(list(ex.map(one, Y)))
    else:
        vals = np.array([one(y) for y in Y])
    return complex(math.ldexp(1.0, -d) * np.sum(W * vals))


__all__ = [
    "Adaptive",
    "HNACache",
    "MAX_REFERENCE_SOLVES",
    "ReferenceBudgetError",
    "Standard",
    "UQResult",
    "deterministic_u1",
    "expectation_u1",
    "parse_method",
    "reference_expectation",
]
