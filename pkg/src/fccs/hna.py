"""Hybrid numerical-asymptotic approximation of the 1D Helmholtz problem.

Problem::

    u'' + k^2 n^2 u = F on (0, 1),   u(0) = u_L,   u'(1) - i k n_inf u(1) = 0.

With ``xi = exp(i k N(x))``, ``N = int_0^x n`` and ``g = n^{-1/2}``, the
second-order approximation is

    u1 = mu~ xi + nu~ / xi + k^{-2} F / n^2,
    mu~ = mu_0 + mu_1/k + mu_2/k^2,   nu~ likewise,

where ``mu_j = a_j g + (i/2) g int_0^x mu_{j-1}'' g`` and
``nu_j = b_j g - (i/2) g int_0^x nu_{j-1}'' g``.  The coefficients ``(a_j, b_j)``
come from one 2x2 system per order, fixing the boundary data of ``u - u1``.

``mu_1`` is tabulated on the fine grid with a cumulative Gauss rule;
``mu_2`` on the coarse grid with composite Simpson over the fine grid.
All stages are vectorised over a leading batch of parameter samples.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .fields import AffineModel, Field, PositivityError, Source

RESONANCE_COND = 1e12


class ResonanceError(RuntimeError):
    """A boundary-condition system is numerically singular."""

    def __init__(self, message: str, cond: float, sample: int = 0):
        super().__init__(message)
        self.cond = cond
        self.sample = sample


class NotStoredError(ValueError):
    """Requested abscissa is not a stored coarse node."""


@dataclass(frozen=True)
class SpatialMesh:
    M: int = 1
    L: int = 1024
    MG: int = 10

    def __post_init__(self):
        if self.M < 1 or self.L < 2 or self.MG < 1:
            raise ValueError("need M >= 1, L >= 2, MG >= 1")
        if self.L % 2:
            raise ValueError("L must be even (composite Simpson)")

    @property
    def H(self) -> float:
        return 1.0 / self.M

    @property
    def h(self) -> float:
        return 1.0 / (self.L * self.M)

    @property
    def fine(self) -> np.ndarray:
        return np.arange(self.L * self.M + 1) * self.h

    @property
    def coarse(self) -> np.ndarray:
        return np.arange(self.M + 1) * self.H

    def gauss(self) -> tuple[np.ndarray, np.ndarray]:
        """Gauss points (shape ``(LM, MG)``) and weights (shape ``(MG,)``) per fine cell."""
        t, w = roots_legendre(self.MG)
        left = self.fine[:-1]
        return left[:, None] + 0.5 * self.h * (t + 1.0)[None, :], 0.5 * self.h * w


@dataclass
class HelmholtzProblem:
    k: float
    field: Field
    source: Source
    u_L: complex = 1.0
    n_inf: float = 1.0

    def validate(self, samples: int = 10, fd_tol: float = 1e-6) -> None:
        """Check ``k, n_inf > 0``, positivity of ``n`` and derivative consistency."""
        if not self.k > 0:
            raise ValueError("k must be positive")
        if not self.n_inf > 0:
            raise ValueError("n_inf must be positive")
        if not self.field.min_value() > 0:
            raise PositivityError("refractive index is not positive on [0, 1]")
        x = np.linspace(0.1, 0.9, samples)
        eps = 1e-5
        for order in range(3):
            fd = (self.field(x + eps, order) - self.field(x - eps, order)) / (2 * eps)
            exact = self.field(x, order + 1)
            if np.max(np.abs(fd - exact)) > fd_tol * max(1.0, np.max(np.abs(exact))):
                raise ValueError(f"derivative of order {order + 1} inconsistent with n")
        fd = (self.field.N(x + eps) - self.field.N(x - eps)) / (2 * eps)
        if np.max(np.abs(fd - self.field(x))) > fd_tol * max(1.0, np.max(np.abs(self.field(x)))):
            raise ValueError("antiderivative N inconsistent with n")


# -- sampled data ---------------------------------------------------------------


@dataclass
class _Samples:
    """Field data for a batch of ``B`` media on the mesh point sets."""

    n: np.ndarray  # (B, nf, 4): n, n', n'', n''' at fine nodes
    ng: np.ndarray  # (B, LM, MG, 3): n, n', n'' at Gauss points
    N: np.ndarray  # (B, M+1) antiderivative at coarse nodes


def _sample_field(field: Field, mesh: SpatialMesh) -> _Samples:
    xf = mesh.fine
    xg, _ = mesh.gauss()
    n = np.stack([field(xf, o) for o in range(4)], axis=-1)[None]
    ng = np.stack([field(xg, o) for o in range(3)], axis=-1)[None]
    return _Samples(n, ng, field.N(mesh.coarse)[None])


class ModelSampler:
    """Precomputed mode tables so that a batch of ``y`` costs matrix products only."""

    def __init__(self, model: AffineModel, mesh: SpatialMesh):
        self.model = model
        self.mesh = mesh
        xf = mesh.fine
        xg, _ = mesh.gauss()
        self._fine = np.stack([model.mode_matrix(xf, o) for o in range(4)], axis=-1)  # (d+1, nf, 4)
        self._gauss = np.stack([model.mode_matrix(xg, o) for o in range(3)], axis=-1)  # (d+1, LM, MG, 3)
        self._N = model.antiderivative_matrix(mesh.coarse)  # (d+1, M+1)

    def __call__(self, Y: np.ndarray) -> _Samples:
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        c = np.concatenate([np.ones((len(Y), 1)), Y], axis=1)
        return _Samples(
            np.tensordot(c, self._fine, axes=(1, 0)),
            np.tensordot(c, self._gauss, axes=(1, 0)),
            c @ self._N,
        )


def _g_derivs(n: np.ndarray) -> np.ndarray:
    """``g = n^{-1/2}`` and its derivatives from ``n`` and its derivatives (last axis)."""
    n0, n1, n2 = n[..., 0], n[..., 1], n[..., 2]
    s = n0**-0.5
    s3, s5 = s**3, s**5
    out = [s, -0.5 * s3 * n1, 0.75 * s5 * n1**2 - 0.5 * s3 * n2]
    if n.shape[-1] > 3:
        n3 = n[..., 3]
        out.append(-1.875 * s**7 * n1**3 + 2.25 * s5 * n1 * n2 - 0.5 * s3 * n3)
    return np.stack(out, axis=-1)


def _simpson_cumulative(v: np.ndarray, mesh: SpatialMesh) -> np.ndarray:
    """Cumulative composite Simpson integrals at coarse nodes of fine-node values ``v`` (B, nf)."""
    B = v.shape[0]
    L, M = mesh.L, mesh.M
    w = np.ones(L + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    idx = np.arange(M)[:, None] * L + np.arange(L + 1)[None, :]
    per = (v[:, idx] * w).sum(axis=-1) * (mesh.h / 3.0)
    return np.concatenate([np.zeros((B, 1), dtype=per.dtype), np.cumsum(per, axis=1)], axis=1)


class _BCSystem:
    """The 2x2 boundary system shared by all orders for each sample."""

    def __init__(self, k: float, n_inf: float, g: np.ndarray, n_end: np.ndarray, N1: np.ndarray):
        ik = 1j * k
        self.k = k
        self.g0 = g[:, 0, 0]
        self.g1 = g[:, -1, 0]
        self.gp1 = g[:, -1, 1]
        self.xi1 = np.exp(ik * N1)
        self.cR_mu = ik * (n_end - n_inf)  # mu'(1) + cR_mu mu(1)
        self.cR_nu = -ik * (n_end + n_inf)
        self.A = self.xi1 * (self.gp1 + self.cR_mu * self.g1)
        self.Bc = (self.gp1 + self.cR_nu * self.g1) / self.xi1
        self.det = self.g0 * (self.Bc - self.A)
        mats = np.empty((len(self.g0), 2, 2), dtype=complex)
        mats[:, 0, 0] = mats[:, 0, 1] = self.g0
        mats[:, 1, 0] = self.A
        mats[:, 1, 1] = self.Bc
        self.cond = np.linalg.cond(mats)
        worst = int(np.argmax(self.cond))
        if not np.isfinite(self.cond[worst]) or self.cond[worst] > RESONANCE_COND:
            raise ResonanceError(
                f"boundary system near-singular (condition number {self.cond[worst]:.3g}, sample {worst})",
                float(self.cond[worst]),
                worst,
            )

    def right(self, mu1, dmu1, nu1, dnu1):
        """``B_R`` of ``mu xi + nu/xi`` from boundary values at ``x = 1``."""
        return self.xi1 * (dmu1 + self.cR_mu * mu1) + (dnu1 + self.cR_nu * nu1) / self.xi1

    def solve(self, rL, rR):
        a = (rL * self.Bc - self.g0 * rR) / self.det
        b = (self.g0 * rR - self.A * rL) / self.det
        return a, b


@dataclass
class HNABatch:
    """``mu~``, ``nu~`` and ``F~`` at the coarse nodes for a batch of samples."""

    k: float
    mesh: SpatialMesh
    mu_parts: np.ndarray  # (B, 3, M+1): mu_0, mu_1, mu_2
    nu_parts: np.ndarray
    F_tilde: np.ndarray  # (B, M+1)
    alphas: np.ndarray  # (B, 3, 2)
    N: np.ndarray  # (B, M+1)
    cond: np.ndarray  # (B,)
    dmu1: np.ndarray  # (B,) mu~'(1)
    dnu1: np.ndarray
    n1: np.ndarray  # (B,) n(1)
    dF2_1: np.ndarray  # (B,) F_2'(1)

    @property
    def mu_tilde(self) -> np.ndarray:
        s = np.array([1.0, 1.0 / self.k, 1.0 / self.k**2])
        return np.einsum("j,bjm->bm", s, self.mu_parts)

    @property
    def nu_tilde(self) -> np.ndarray:
        s = np.array([1.0, 1.0 / self.k, 1.0 / self.k**2])
        return np.einsum("j,bjm->bm", s, self.nu_parts)

    def u1(self) -> np.ndarray:
        xi = np.exp(1j * self.k * self.N)
        return self.mu_tilde * xi + self.nu_tilde / xi + self.F_tilde


def _hna_core(
    k: float,
    u_L: complex,
    n_inf: float,
    S: _Samples,
    source: Source,
    mesh: SpatialMesh,
    stages: int = 3,
) -> dict:
    if np.any(S.n[..., 0] <= 0) or np.any(S.ng[..., 0] <= 0):
        raise PositivityError("refractive index not positive at a mesh point")
    half_i = 0.5j
    L = mesh.L
    g = _g_derivs(S.n)  # (B, nf, 4)
    B = g.shape[0]
    n_end = S.n[:, -1, 0]
    bc = _BCSystem(k, n_inf, g, n_end, S.N[:, -1])
    out = {"bc": bc, "g": g}

    # order 0
    a0, b0 = bc.solve(np.full(B, complex(u_L)), np.zeros(B, dtype=complex))
    out["alpha0"] = (a0, b0)
    if stages == 1:
        return out

    # order 1: int_0^x mu_0'' g = a0 * J(x),  J = int_0^x g g''
    _, gw = mesh.gauss()
    gg = _g_derivs(S.ng)
    cell = ((gg[..., 0] * gg[..., 2]) * gw).sum(axis=-1)  # (B, LM)
    J = np.concatenate([np.zeros((B, 1)), np.cumsum(cell, axis=1)], axis=1)  # (B, nf)
    J1 = J[:, -1]
    g1, gp1, gpp1 = g[:, -1, 0], g[:, -1, 1], g[:, -1, 2]
    # mu_1^P = (i/2) a0 g J;  (mu_1^P)'(1) = (i/2) a0 (g' J + g^2 g'')(1)
    pmu, dpmu = half_i * a0 * g1 * J1, half_i * a0 * (gp1 * J1 + g1**2 * gpp1)
    pnu, dpnu = -half_i * b0 * g1 * J1, -half_i * b0 * (gp1 * J1 + g1**2 * gpp1)
    a1, b1 = bc.solve(np.zeros(B, dtype=complex), -bc.right(pmu, dpmu, pnu, dpnu))
    gf = g[..., 0]
    out["alpha1"] = (a1, b1)
    out["J"] = J
    out["mu1_fine"] = a1[:, None] * gf + half_i * a0[:, None] * gf * J
    out["nu1_fine"] = b1[:, None] * gf - half_i * b0[:, None] * gf * J
    out["dmu1_1"] = a1 * gp1 + dpmu
    out["dnu1_1"] = b1 * gp1 + dpnu
    if stages == 2:
        return out

    # order 2: (mu_1^P)'' = (i/2) a0 K,  K = g'' J + 3 g g' g'' + g^2 g'''
    K = g[..., 2] * J + 3.0 * g[..., 0] * g[..., 1] * g[..., 2] + g[..., 0] ** 2 * g[..., 3]
    mu1pp = a1[:, None] * g[..., 2] + half_i * a0[:, None] * K
    nu1pp = b1[:, None] * g[..., 2] - half_i * b0[:, None] * K
    I2mu = _simpson_cumulative(mu1pp * gf, mesh)  # (B, M+1)
    I2nu = _simpson_cumulative(nu1pp * gf, mesh)
    gc = gf[:, ::L]
    pmu2 = half_i * gc * I2mu
    pnu2 = -half_i * gc * I2nu
    dpmu2 = half_i * (gp1 * I2mu[:, -1] + g1**2 * mu1pp[:, -1])
    dpnu2 = -half_i * (gp1 * I2nu[:, -1] + g1**2 * nu1pp[:, -1])

    xc = mesh.coarse
    nc = S.n[:, ::L, 0]
    F2c = source(xc)[None, :] / nc**2
    dn1 = S.n[:, -1, 1]
    F1, dF1 = float(source(1.0)), float(source(1.0, 1))
    dF2_1 = dF1 / n_end**2 - 2.0 * F1 * dn1 / n_end**3
    BRF2 = dF2_1 - 1j * k * n_inf * F2c[:, -1]
    rL = -F2c[:, 0] - (pmu2[:, 0] + pnu2[:, 0])
    rR = -BRF2 - bc.right(pmu2[:, -1], dpmu2, pnu2[:, -1], dpnu2)
    a2, b2 = bc.solve(rL, rR)
    out["alpha2"] = (a2, b2)
    out["mu2"] = a2[:, None] * gc + pmu2
    out["nu2"] = b2[:, None] * gc + pnu2
    out["dmu2_1"] = a2 * gp1 + dpmu2
    out["dnu2_1"] = b2 * gp1 + dpnu2
    out["F2c"] = F2c
    out["dF2_1"] = dF2_1
    return out


def _batch_from_core(k: float, mesh: SpatialMesh, S: _Samples, c: dict) -> HNABatch:
    L = mesh.L
    gc = c["g"][:, ::L, 0]
    a0, b0 = c["alpha0"]
    mu_parts = np.stack([a0[:, None] * gc, c["mu1_fine"][:, ::L], c["mu2"]], axis=1)
    nu_parts = np.stack([b0[:, None] * gc, c["nu1_fine"][:, ::L], c["nu2"]], axis=1)
    gp1 = c["g"][:, -1, 1]
    dmu = a0 * gp1 + c["dmu1_1"] / k + c["dmu2_1"] / k**2
    dnu = b0 * gp1 + c["dnu1_1"] / k + c["dnu2_1"] / k**2
    alphas = np.stack([np.stack(c[f"alpha{j}"], axis=-1) for j in range(3)], axis=1)
    return HNABatch(
        k, mesh, mu_parts, nu_parts, c["F2c"] / k**2, alphas, S.N, c["bc"].cond,
        dmu, dnu, S.n[:, -1, 0], c["dF2_1"],
    )


def solve_batch(
    k: float,
    sampler: ModelSampler,
    Y: np.ndarray,
    source: Source,
    u_L: complex = 1.0,
    n_inf: float = 1.0,
    chunk: int = 64,
) -> HNABatch:
    """HNA solves for every row of ``Y`` (parameters of an affine model)."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    parts = []
    for s in range(0, len(Y), chunk):
        S = sampler(Y[s:s + chunk])
        try:
            core = _hna_core(k, u_L, n_inf, S, source, sampler.mesh)
        except ResonanceError as exc:
            y = Y[s + exc.sample].tolist()
            raise ResonanceError(f"{exc} at y={y}", exc.cond, s + exc.sample) from None
        parts.append(_batch_from_core(k, sampler.mesh, S, core))
    if len(parts) == 1:
        return parts[0]
    cat = lambda name: np.concatenate([getattr(p, name) for p in parts], axis=0)
    return HNABatch(
        k, sampler.mesh, cat("mu_parts"), cat("nu_parts"), cat("F_tilde"), cat("alphas"), cat("N"),
        cat("cond"), cat("dmu1"), cat("dnu1"), cat("n1"), cat("dF2_1"),
    )


# -- single-problem interface -------------------------------------------------------


@dataclass(frozen=True)
class FSequence:
    F2: object
    dF2: object
    F2_0: float
    BR_F2: complex


def f_sequence(problem: HelmholtzProblem) -> FSequence:
    """``F_2 = F / n^2``, its derivative and boundary data ``F_2(0)``, ``B_R F_2``."""
    n, F = problem.field, problem.source
    if not n.min_value() > 0:
        raise PositivityError("refractive index vanishes or changes sign")

    def F2(x):
        return F(x) / n(x) ** 2

    def dF2(x):
        nx = n(x)
        return (F(x, 1) * nx**2 - 2.0 * F(x) * nx * n(x, 1)) / nx**4

    br = float(dF2(1.0)) - 1j * problem.k * problem.n_inf * float(F2(1.0))
    return FSequence(F2, dF2, float(F2(0.0)), br)


@dataclass(frozen=True)
class Order0:
    alpha1: complex
    alpha2: complex
    cond: float
    field: Field

    def mu0(self, x):
        return self.alpha1 * self.field(x) ** -0.5

    def nu0(self, x):
        return self.alpha2 * self.field(x) ** -0.5


def solve_order0(problem: HelmholtzProblem) -> Order0:
    """``mu_0 = a g``, ``nu_0 = b g`` with ``B_L r_0 = u_L`` and ``B_R r_0 = 0``."""
    mesh = SpatialMesh(1, 2, 1)
    S = _sample_field(problem.field, mesh)
    c = _hna_core(problem.k, problem.u_L, problem.n_inf, S, problem.source, mesh, stages=1)
    a, b = c["alpha0"]
    return Order0(complex(a[0]), complex(b[0]), float(c["bc"].cond[0]), problem.field)


@dataclass(frozen=True)
class Order1:
    alpha1: complex
    alpha2: complex
    x: np.ndarray
    mu1: np.ndarray
    nu1: np.ndarray
    J: np.ndarray  # int_0^x g g'' at the fine nodes


def solve_order1(problem: HelmholtzProblem, mesh: SpatialMesh | None = None) -> Order1:
    """``mu_1``, ``nu_1`` at every fine node (cumulative Gauss for the particular parts)."""
    mesh = mesh or SpatialMesh()
    S = _sample_field(problem.field, mesh)
    c = _hna_core(problem.k, problem.u_L, problem.n_inf, S, problem.source, mesh, stages=2)
    a, b = c["alpha1"]
    return Order1(complex(a[0]), complex(b[0]), mesh.fine, c["mu1_fine"][0], c["nu1_fine"][0], c["J"][0])


@dataclass(frozen=True)
class Order2:
    alpha1: complex
    alpha2: complex
    x: np.ndarray
    mu2: np.ndarray
    nu2: np.ndarray


def solve_order2(problem: HelmholtzProblem, mesh: SpatialMesh | None = None) -> Order2:
    """``mu_2``, ``nu_2`` at the coarse nodes (composite Simpson for the particular parts)."""
    mesh = mesh or SpatialMesh()
    S = _sample_field(problem.field, mesh)
    c = _hna_core(problem.k, problem.u_L, problem.n_inf, S, problem.source, mesh)
    a, b = c["alpha2"]
    return Order2(complex(a[0]), complex(b[0]), mesh.coarse, c["mu2"][0], c["nu2"][0])


@dataclass
class HNASolution:
    problem: HelmholtzProblem
    mesh: SpatialMesh
    x: np.ndarray  # coarse nodes
    mu_tilde: np.ndarray
    nu_tilde: np.ndarray
    mu_parts: np.ndarray  # (3, M+1)
    nu_parts: np.ndarray
    F_tilde: np.ndarray
    alphas: np.ndarray  # (3, 2): (alpha_j^1, alpha_j^2)
    N: np.ndarray
    cond: float
    dmu1: complex
    dnu1: complex
    dF2_1: float

    @property
    def k(self) -> float:
        return self.problem.k


def solve(problem: HelmholtzProblem, mesh: SpatialMesh | None = None) -> HNASolution:
    """All three orders for one deterministic problem."""
    mesh = mesh or SpatialMesh()
    S = _sample_field(problem.field, mesh)
    c = _hna_core(problem.k, problem.u_L, problem.n_inf, S, problem.source, mesh)
    b = _batch_from_core(problem.k, mesh, S, c)
    return HNASolution(
        problem, mesh, mesh.coarse, b.mu_tilde[0], b.nu_tilde[0], b.mu_parts[0], b.nu_parts[0],
        b.F_tilde[0], b.alphas[0], b.N[0], float(b.cond[0]), complex(b.dmu1[0]), complex(b.dnu1[0]),
        float(b.dF2_1[0]),
    )


def _node_index(sol: HNASolution, x: float) -> int:
    i = int(np.argmin(np.abs(sol.x - x)))
    if abs(sol.x[i] - x) > 1e-14:
        raise NotStoredError(f"x={x} is not a coarse node; stored nodes are {sol.x.tolist()}")
    return i


def assemble_u1(sol: HNASolution, x: float) -> complex:
    """``u1(x) = mu~ xi + nu~ / xi + k^{-2} F / n^2`` at a stored coarse node."""
    i = _node_index(sol, x)
    xi = np.exp(1j * sol.k * sol.N[i])
    return complex(sol.mu_tilde[i] * xi + sol.nu_tilde[i] / xi + sol.F_tilde[i])


def boundary_residuals(sol: HNASolution) -> tuple[complex, complex]:
    """``(B_L u1 - u_L, B_R u1)``; both vanish up to rounding."""
    p = sol.problem
    k = p.k
    u0 = assemble_u1(sol, 0.0)
    u1 = assemble_u1(sol, 1.0)
    n1 = float(p.field(1.0))
    xi = np.exp(1j * k * sol.N[-1])
    du1 = (
        (sol.dmu1 + 1j * k * n1 * sol.mu_tilde[-1]) * xi
        + (sol.dnu1 - 1j * k * n1 * sol.nu_tilde[-1]) / xi
        + sol.dF2_1 / k**2
    )
    return u0 - p.u_L, complex(du1 - 1j * k * p.n_inf * u1)


def alpha0_closed_form(problem: HelmholtzProblem) -> complex:
    """Closed form of ``alpha_0^2`` valid when ``n(1) = n_inf``."""
    k, n = problem.k, problem.field
    N1 = float(n.N(1.0))
    dn1 = float(n(1.0, 1))
    num = problem.u_L * np.sqrt(float(n(0.0))) * dn1 / 2j * np.exp(1j * k * N1)
    return complex(num / (dn1 * np.sin(k * N1) - 2.0 * k * problem.n_inf**2 * np.exp(-1j * k * N1)))


__all__ = [
    "FSequence",
    "HNABatch",
    "HNASolution",
    "HelmholtzProblem",
    "ModelSampler",
    "NotStoredError",
    "Order0",
    "Order1",
    "Order2",
    "ResonanceError",
    "SpatialMesh",
    "alpha0_closed_form",
    "assemble_u1",
    "boundary_residuals",
    "f_sequence",
    "solve",
    "solve_batch",
    "solve_order0",
    "solve_order1",
    "solve_order2",
]
