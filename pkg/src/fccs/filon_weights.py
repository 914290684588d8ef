"""Oscillatory Chebyshev moments ``W_n(w) = int_{-1}^{1} T_n(y) exp(i w y) dy``.

The moments satisfy the inhomogeneous three-term recurrence obtained by
integrating ``2 T_n = T'_{n+1}/(n+1) - T'_{n-1}/(n-1)`` by parts::

    (i w/(n+1)) W_{n+1} + 2 W_n - (i w/(n-1)) W_{n-1}
        = B_{n+1} (1/(n+1) - 1/(n-1)),      B_m = e^{iw} - (-1)^m e^{-iw}

Forward recursion is stable while ``n <= |w|``.  Past that turning point the
dominant homogeneous solution grows factorially, so the remaining moments are
obtained from the recurrence posed as a diagonally dominant tridiagonal
boundary-value problem, closed on the right by one moment evaluated from the
Jacobi-Anger (Bessel) expansion.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import solve_banded
from scipy.special import jv, roots_legendre


class RegimeError(ValueError):
    """Raised when the Filon moments are requested for ``|w| < 1``."""


@dataclass(frozen=True)
class WeightTable:
    omega: float
    max_degree: int
    weights: np.ndarray


def _zero_moments(N: int) -> np.ndarray:
    n = np.arange(N + 1)
    out = np.zeros(N + 1)
    even = n % 2 == 0
    out[even] = 2.0 / (1.0 - n[even] ** 2)
    return out


def weights_zero(N: int) -> WeightTable:
    """Exact moments at ``w = 0``: ``2/(1-n^2)`` for even ``n``, 0 for odd."""
    if N < 0:
        raise ValueError("N must be >= 0")
    w = _zero_moments(N)
    w.setflags(write=False)
    return WeightTable(0.0, N, w)


def bessel_moment(omega: float, n: int) -> complex:
    """One moment from the Jacobi-Anger expansion.

    With ``y = cos(t)``, ``exp(i w cos t) = sum_m eps_m i^m J_m(w) cos(m t)``, so
    ``W_n(w) = sum_m eps_m i^m J_m(w) (W_{n+m}(0) + W_{|n-m|}(0)) / 2``.  The
    Bessel factors decay super-exponentially once ``m > |w|``.
    """
    a = abs(omega)
    mmax = int(a + 12.0 * a ** (1.0 / 3.0) + 60)
    m = np.arange(mmax + 1)
    eps = np.where(m == 0, 1.0, 2.0)
    Jm = jv(m, a)
    phase = (1j) ** (m % 4)
    s = n + m
    d = np.abs(n - m)

    def w0(q):
        out = np.zeros(q.shape)
        even = q % 2 == 0
        out[even] = 2.0 / (1.0 - q[even].astype(float) ** 2)
        return out

    val = np.sum(eps * phase * Jm * 0.5 * (w0(s) + w0(d)))
    return complex(val.conjugate()) if omega < 0 else complex(val)


def _moments_positive(w: float, N: int) -> np.ndarray:
    iw = 1j * w
    B_even = 2j * math.sin(w)  # B_m for even m
    B_odd = 2.0 * math.cos(w)  # B_m for odd m

    W = np.zeros(N + 1, dtype=complex)
    W[0] = 2.0 * math.sin(w) / w
    if N >= 1:
        W[1] = (B_odd - W[0]) / iw
    if N >= 2:
        W[2] = (B_even - 4.0 * W[1]) / iw
    n0 = min(max(math.ceil(w), 2), N)
    for n in range(2, n0):
        B = B_even if (n + 1) % 2 == 0 else B_odd
        rhs = B * (1.0 / (n + 1) - 1.0 / (n - 1))
        W[n + 1] = (n + 1) / iw * (rhs - 2.0 * W[n] + iw * W[n - 1] / (n - 1))
    if n0 >= N:
        return W

    # W_{n0+1..N} from the recurrence rows n = n0+1..N as a boundary-value problem
    rows = np.arange(n0 + 1, N + 1)
    m = len(rows)
    sub = -iw / (rows - 1.0)
    sup = iw / (rows + 1.0)
    B = np.where((rows + 1) % 2 == 0, B_even, B_odd)
    rhs = B * (1.0 / (rows + 1.0) - 1.0 / (rows - 1.0))
    rhs[0] -= sub[0] * W[n0]
    rhs[-1] -= sup[-1] * bessel_moment(w, N + 1)
    ab = np.zeros((3, m), dtype=complex)
    ab[0, 1:] = sup[:-1]
    ab[1] = 2.0
    ab[2, :-1] = sub[1:]
    W[n0 + 1:] = solve_banded((1, 1), ab, rhs)
    return W


_cache_lock = threading.Lock()


@lru_cache(maxsize=1024)
def _cached_moments(omega: float, N: int) -> np.ndarray:
    W = _moments_positive(abs(omega), N)
    if omega < 0:
        W = W.conj()
    W.setflags(write=False)
    return W


def weights_osc(omega: float, N: int) -> WeightTable:
    """Moments ``W_0(w) .. W_N(w)`` for ``|w| >= 1``.

    Tables are cached per ``(w, N)`` (exact float key) and returned read-only.
    """
    omega = float(omega)
    if N < 0:
        raise ValueError("N must be >= 0")
    if not abs(omega) >= 1.0:
        raise RegimeError(f"|omega| = {abs(omega)} < 1; use the Clenshaw-Curtis path")
    with _cache_lock:
        W = _cached_moments(omega, int(N))
    return WeightTable(omega, int(N), W)


def moments(omega: float, N: int) -> np.ndarray:
    """Moments for any real ``w`` (closed form at ``w = 0``)."""
    if omega == 0.0:
        return weights_zero(N).weights.astype(complex)
    if abs(omega) < 1.0:
        # below the regime threshold the Bessel series is cheap and accurate
        return np.array([bessel_moment(omega, n) for n in range(N + 1)])
    return weights_osc(omega, N).weights


# -- independent oracle ------------------------------------------------------

_GL_X, _GL_W = roots_legendre(20)


def _oracle_grid(omega: float, n_max: int):
    rate = n_max + abs(omega) + 1.0
    panels = max(4, math.ceil(math.pi * rate / 2.0))
    edges = np.linspace(0.0, math.pi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    wq = (half[:, None] * _GL_W[None, :]).ravel()
    return t, wq * np.sin(t) * np.exp(1j * omega * np.cos(t))


def oracle_table(omega: float, N: int) -> np.ndarray:
    """Brute-force moments ``W_0 .. W_N`` by composite Gauss-Legendre quadrature.

    Integrates ``cos(n t) exp(i w cos t) sin t`` over ``t in [0, pi]``; the
    substitution ``y = cos t`` removes the endpoint clustering of ``T_n``.
    Panels span at most about two radians of total phase and carry 20 nodes.
    Test-only: cost is ``O(N (N + |w|))``.
    """
    omega = float(omega)
    t, base = _oracle_grid(omega, N)
    return np.array([np.sum(base * np.cos(n * t)) for n in range(N + 1)])


def oracle_weight(omega: float, n: int) -> complex:
    """Single brute-force moment; see :func:`oracle_table`."""
    t, base = _oracle_grid(float(omega), n)
    return complex(np.sum(base * np.cos(n * t)))
