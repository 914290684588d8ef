"""One-dimensional Filon-Clenshaw-Curtis rule as precomputed node weights.

For ``|w| >= 1`` the rule integrates the Chebyshev interpolant of ``g`` against
``exp(i w y)`` exactly.  Below the threshold the plain Clenshaw-Curtis rule is
applied to ``g(y) exp(i w y)``.  Either way the rule is ``sum_j w_j g(t_j)``.
"""
from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cheb1d import MIDPOINT, TWO_POINT, _check_variant, _dct1_2sum, cc_nodes, degree
from .filon_weights import weights_osc, weights_zero

OSCILLATORY = "oscillatory"
STANDARD = "standard"


@dataclass(frozen=True)
class Rule1D:
    omega: float
    level: int
    regime: str
    nodes: np.ndarray
    node_weights: np.ndarray
    variant: str = MIDPOINT

    def apply(self, values) -> complex:
        return complex(np.dot(self.node_weights, np.asarray(values)))


def regime(omega: float) -> str:
    return OSCILLATORY if abs(omega) >= 1.0 else STANDARD


def _compose(moments: np.ndarray, n: int) -> np.ndarray:
    """Node weights ``(2/n) h_j sum''_m W_m cos(j m pi/n)`` for degree ``n``."""
    w = _dct1_2sum(np.asarray(moments)) / n
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def cc_weights(n: int) -> np.ndarray:
    """Classical ``(n+1)``-point Clenshaw-Curtis weights for any ``n >= 1``."""
    return _compose(weights_zero(n).weights, n).real


_lock = threading.Lock()


@lru_cache(maxsize=4096)
def _rule(omega: float, level: int, variant: str) -> Rule1D:
    grid = cc_nodes(level, variant)
    reg = regime(omega)
    if level == 1 and variant == MIDPOINT:
        w0 = weights_osc(omega, 0).weights[0] if reg == OSCILLATORY else 2.0
        weights = np.array([w0], dtype=complex)
    else:
        n = degree(level, variant)
        if reg == OSCILLATORY:
            weights = _compose(weights_osc(omega, n).weights, n)
        else:
            weights = _compose(weights_zero(n).weights, n) * np.exp(1j * omega * grid.nodes)
    weights = np.asarray(weights, dtype=complex)
    weights.setflags(write=False)
    return Rule1D(float(omega), level, reg, grid.nodes, weights, variant)


def build_rule(omega: float, level: int, level1_variant: str = MIDPOINT) -> Rule1D:
    """Node weights of the 1D rule at frequency ``omega`` and ``level`` (cached)."""
    _check_variant(level1_variant)
    degree(level)  # validates the level
    with _lock:
        return _rule(float(omega), int(level), level1_variant)


def integrate_1d(g, omega: float, level: int, level1_variant: str = MIDPOINT) -> complex:
    """Approximate ``int_{-1}^{1} g(y) exp(i omega y) dy``.

    ``g`` is called once with the array of nodes.  Non-finite samples
    propagate as NaN with a warning.
    """
    rule = build_rule(omega, level, level1_variant)
    values = np.asarray(g(rule.nodes), dtype=complex)
    if values.shape == ():
        values = np.full(rule.nodes.shape, values)
    bad = ~np.isfinite(values)
    if bad.any():
        warnings.warn(
            f"non-finite integrand value at node(s) {rule.nodes[bad].tolist()}",
            RuntimeWarning,
            stacklevel=2,
        )
        return complex(np.nan, np.nan)
    return rule.apply(values)


__all__ = [
    "OSCILLATORY",
    "STANDARD",
    "Rule1D",
    "build_rule",
    "cc_weights",
    "integrate_1d",
    "regime",
    "MIDPOINT",
    "TWO_POINT",
]
