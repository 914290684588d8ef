"""Nested Clenshaw-Curtis grids and Chebyshev interpolation on [-1, 1].

Level ``l >= 2`` uses the ``n_l + 1`` extrema ``cos(j*pi/n_l)`` of ``T_{n_l}``
with ``n_l = 2**(l-1)``.  Level 1 is either the midpoint ``{0}`` (default) or
the two-point rule ``{1, -1}``.

Chebyshev coefficients are stored *raw*: the interpolant is
``sum'' a_n T_n(y)`` where the first and last terms are halved by the consumer.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dct

MIDPOINT = "midpoint"
TWO_POINT = "cc2"
LEVEL1_VARIANTS = (MIDPOINT, TWO_POINT)

# Global resolution used for integer node keys.  A node of level l with local
# index j has key j * 2**(MAX_LEVEL - l); keys stay exact in int64 and float64.
MAX_LEVEL = 40
_FULL = 2 ** (MAX_LEVEL - 1)

_DIRECT_DCT_MAX = 8


class LevelError(ValueError):
    """Raised for a level outside the supported range."""


def _check_variant(variant: str) -> None:
    if variant not in LEVEL1_VARIANTS:
        raise ValueError(f"unknown level-1 variant {variant!r}; expected one of {LEVEL1_VARIANTS}")


def degree(level: int, variant: str = MIDPOINT) -> int:
    """Polynomial degree ``n_l``; ``n_1 = 1`` by convention for both variants."""
    if level < 1:
        raise LevelError(f"level must be >= 1, got {level}")
    return 1 if level == 1 else 2 ** (level - 1)


def num_nodes(level: int, variant: str = MIDPOINT) -> int:
    if level == 1 and variant == MIDPOINT:
        return 1
    return degree(level, variant) + 1


def _cheb_extrema(n: int, j: np.ndarray) -> np.ndarray:
    # sin(pi*(n - 2j)/(2n)) == cos(j*pi/n), but exactly antisymmetric, exactly
    # zero at the centre, and bit-identical under (n, j) -> (2n, 2j).
    return np.sin(np.pi * (n - 2 * j) / (2 * n))


@dataclass(frozen=True)
class ChebLevel:
    """Clenshaw-Curtis grid of one level, nodes in decreasing order."""

    level: int
    degree: int
    nodes: np.ndarray
    variant: str = MIDPOINT

    @property
    def size(self) -> int:
        return len(self.nodes)


def cc_nodes(level: int, variant: str = MIDPOINT) -> ChebLevel:
    """Nodes of the nested Clenshaw-Curtis grid at ``level``."""
    _check_variant(variant)
    n = degree(level, variant)
    if level == 1 and variant == MIDPOINT:
        nodes = np.zeros(1)
    else:
        nodes = _cheb_extrema(n, np.arange(n + 1))
    nodes.setflags(write=False)
    return ChebLevel(level, n, nodes, variant)


def node_keys(level: int, variant: str = MIDPOINT) -> np.ndarray:
    """Integer keys of the level's nodes at the global resolution ``MAX_LEVEL``.

    A key ``J`` denotes the abscissa ``cos(J*pi/2**(MAX_LEVEL-1))``.  Nested
    levels share keys exactly, so keys can be used for deduplication.
    """
    _check_variant(variant)
    if level > MAX_LEVEL:
        raise LevelError(f"level {level} exceeds MAX_LEVEL={MAX_LEVEL}")
    if level == 1 and variant == MIDPOINT:
        return np.array([_FULL // 2], dtype=np.int64)
    n = degree(level, variant)
    return np.arange(n + 1, dtype=np.int64) * (_FULL // n)


def key_to_node(keys) -> np.ndarray:
    """Abscissae for integer node keys (bit-identical to ``cc_nodes``).

    Power-of-two rescaling of numerator and denominator is exact in floating
    point, so evaluating at full resolution reproduces the level-local value.
    """
    keys = np.asarray(keys, dtype=np.int64)
    return _cheb_extrema(_FULL, keys)


@dataclass(frozen=True)
class ChebSeries:
    """Raw Chebyshev coefficients ``a_0 .. a_n`` of an interpolant."""

    level: int
    coeffs: np.ndarray
    variant: str = MIDPOINT


def _dct1_2sum(values: np.ndarray) -> np.ndarray:
    """Return ``2 * sum''_j cos(j n pi / N) v_j`` for n = 0..N (DCT-I)."""
    N = len(values) - 1
    if N <= _DIRECT_DCT_MAX:
        j = np.arange(N + 1)
        h = np.ones(N + 1)
        h[0] = h[-1] = 0.5
        C = np.cos(np.pi * np.outer(j, j) / N)
        return 2.0 * C @ (h * values)
    if np.iscomplexobj(values):
        return dct(values.real, type=1) + 1j * dct(values.imag, type=1)
    return dct(values, type=1)


def dct_coeffs(values, level: int, variant: str = MIDPOINT) -> ChebSeries:
    """Chebyshev coefficients of the interpolant through ``values`` at the level's nodes.

    ``a_n = (2/n_l) sum''_j cos(j n pi / n_l) g(t_j)``; for the one-point
    level the single coefficient is ``g(0)``.
    """
    _check_variant(variant)
    values = np.asarray(values)
    m = num_nodes(level, variant)
    if values.shape != (m,):
        raise ValueError(f"level {level} needs {m} values, got shape {values.shape}")
    if m == 1:
        coeffs = values.copy()
    else:
        n = m - 1
        coeffs = _dct1_2sum(values) / n
    return ChebSeries(level, coeffs, variant)


def eval_series(series: ChebSeries, y):
    """Evaluate ``sum'' a_n T_n(y)`` with Clenshaw's backward recurrence."""
    y_arr = np.asarray(y, dtype=float)
    if np.any(np.abs(y_arr) > 1.0):
        raise ValueError("abscissa outside [-1, 1]")
    a = np.asarray(series.coeffs)
    if len(a) == 1:
        return a[0] * np.ones_like(y_arr) if y_arr.ndim else a[0]
    c = a.astype(complex if np.iscomplexobj(a) else float)
    c[0] *= 0.5
    c[-1] *= 0.5
    b1 = np.zeros_like(y_arr, dtype=c.dtype)
    b2 = np.zeros_like(b1)
    for coef in c[:0:-1]:
        b1, b2 = 2.0 * y_arr * b1 - b2 + coef, b1
    out = y_arr * b1 - b2 + c[0]
    return out if y_arr.ndim else out[()]


def interpolate(g, level: int, variant: str = MIDPOINT) -> ChebSeries:
    """Sample a callable at the level's nodes and return its Chebyshev series."""
    grid = cc_nodes(level, variant)
    return dct_coeffs(np.asarray(g(grid.nodes)), level, variant)
