"""Named test integrands ``f(y)`` on ``[-1, 1]^d`` (vectorised over rows of ``Y``).

Selectors are ``name`` or ``name:param``:

``const``             ``1``
``squares``           ``prod_j y_j^2``
``cosprod:m``         ``cos(m y_1 ... y_d)``
``cospairs:m``        ``prod_i cos(m y_{2i-1} y_{2i})``
``cosdecay:m``        ``prod_i cos(10^{-(i-1)} m y_{2i-1} y_{2i})``
``nhalf:x``           ``n(x, y)^{-1/2}`` for the builtin random medium
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

from .fields import builtin_model


class UnknownIntegrandError(ValueError):
    pass


@dataclass(frozen=True)
class Integrand:
    name: str
    f: Callable[[np.ndarray], np.ndarray]
    exact: Callable[[float, np.ndarray], complex] | None = None  # (k, a) -> integral
    default_a: Callable[[int], np.ndarray] | None = None

    def __call__(self, Y):
        return self.f(Y)


def _moment2(w: float) -> float:
    """``int_{-1}^{1} y^2 exp(i w y) dy`` (real by symmetry)."""
    if abs(w) < 1e-3:
        return 2.0 / 3.0 - w**2 / 5.0 + w**4 / 84.0
    return (2.0 * (w * w - 2.0) * math.sin(w) + 4.0 * w * math.cos(w)) / w**3


def _moment0(w: float) -> float:
    return 2.0 if w == 0 else 2.0 * math.sin(w) / w


def _pairs(Y: np.ndarray, weights) -> np.ndarray:
    d = Y.shape[1]
    if d % 2:
        raise ValueError("pair integrands need an even dimension")
    out = np.ones(len(Y))
    for i in range(d // 2):
        out = out * np.cos(weights[i] * Y[:, 2 * i] * Y[:, 2 * i + 1])
    return out


def _nhalf(x: float) -> Integrand:
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")

    def f(Y):
        m = builtin_model(Y.shape[1])
        c = m.mode_matrix(np.float64(x))[1:]
        n = 1.0 + Y @ c
        return n**-0.5

    return Integrand(f"nhalf:{x:g}", f, default_a=lambda d: builtin_model(d).phase_vector(x))


def get_integrand(selector: str) -> Integrand:
    """Resolve a selector; unknown names raise before any computation."""
    name, _, arg = selector.partition(":")
    needs_arg = {"cosprod", "cospairs", "cosdecay", "nhalf"}
    if name in needs_arg:
        if not arg:
            raise UnknownIntegrandError(f"integrand {name!r} needs a parameter, e.g. {name}:2")
        try:
            p = float(arg)
        except ValueError:
            raise UnknownIntegrandError(f"bad parameter {arg!r} for {name!r}") from None
    elif arg:
        raise UnknownIntegrandError(f"integrand {name!r} takes no parameter")

    if name == "const":
        return Integrand("const", lambda Y: np.ones(len(Y)),
                         exact=lambda k, a: complex(np.prod([_moment0(k * aj) for aj in a])))
    if name == "squares":
        return Integrand("squares", lambda Y: np.prod(Y**2, axis=1),
                         exact=lambda k, a: complex(np.prod([_moment2(k * aj) for aj in a])))
    if name == "cosprod":
        return Integrand(selector, lambda Y: np.cos(p * np.prod(Y, axis=1)))
    if name == "cospairs":
        return Integrand(selector, lambda Y: _pairs(Y, [p] * (Y.shape[1] // 2)))
    if name == "cosdecay":
        return Integrand(selector, lambda Y: _pairs(Y, [p * 10.0**-i for i in range(Y.shape[1] // 2)]))
    if name == "nhalf":
        return _nhalf(p)
    raise UnknownIntegrandError(
        f"unknown integrand {name!r}; choose from const, squares, cosprod:m, cospairs:m, cosdecay:m, nhalf:x"
    )


def nhalf_reference(x: float, k: float, d: int, points: int = 40) -> complex:
    """Tensor Gauss-Legendre value of ``int n(x,y)^{-1/2} exp(i k a(x).y) dy``.

    Only modes with ``n_j(x) != 0`` enter the amplitude; the remaining
    dimensions are pure phase factors with closed-form integrals.
    """
    m = builtin_model(d)
    c = m.mode_matrix(np.float64(x))[1:]
    a = m.phase_vector(x)
    live = np.abs(c) >= 1e-15
    t, w = roots_legendre(points)
    q = int(live.sum())
    grids = np.meshgrid(*([t] * q), indexing="ij")
    P = np.stack([g.ravel() for g in grids], axis=1)
    W = np.prod(np.meshgrid(*([w] * q), indexing="ij"), axis=0).ravel()
    val = np.sum(W * (1.0 + P @ c[live]) ** -0.5 * np.exp(1j * k * (P @ a[live])))
    for aj in a[~live]:
        val *= _moment0(k * aj)
    return complex(val)


__all__ = ["Integrand", "UnknownIntegrandError", "get_integrand", "nhalf_reference"]
