"""Refractive-index fields, sources and the affine random model.

A field is a finite linear combination of *modes*; every mode provides its
value, first three derivatives and the antiderivative ``int_0^x``, all in
closed form.  The random model is ``n(x, y) = n_0(x) + sum_j n_j(x) y_j``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

MAX_DERIV = 3


class PositivityError(ValueError):
    """The refractive index is not bounded away from zero."""


class Mode:
    """Smooth function on [0, 1] with closed-form derivatives and antiderivative."""

    def value(self, x: np.ndarray, order: int = 0) -> np.ndarray:
        raise NotImplementedError

    def antiderivative(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def sup_norm(self) -> float:
        xs = np.linspace(0.0, 1.0, 2049)
        return float(np.max(np.abs(self.value(xs))))


@dataclass(frozen=True)
class ConstantMode(Mode):
    c: float

    def value(self, x, order=0):
        x = np.asarray(x, dtype=float)
        return np.full(x.shape, self.c if order == 0 else 0.0)

    def antiderivative(self, x):
        return self.c * np.asarray(x, dtype=float)

    def sup_norm(self):
        return abs(self.c)


@dataclass(frozen=True)
class SineMode(Mode):
    """``c sin(j pi x)``."""

    c: float
    j: int

    def value(self, x, order=0):
        w = self.j * math.pi
        arg = w * np.asarray(x, dtype=float)
        # d^m/dx^m sin(wx) = w^m sin(wx + m pi/2)
        base = (np.sin, np.cos, lambda t: -np.sin(t), lambda t: -np.cos(t))[order % 4]
        return self.c * w**order * base(arg)

    def antiderivative(self, x):
        w = self.j * math.pi
        return self.c * (1.0 - np.cos(w * np.asarray(x, dtype=float))) / w

    def sup_norm(self):
        return abs(self.c)


@dataclass(frozen=True)
class PolyMode(Mode):
    poly: Polynomial

    def value(self, x, order=0):
        return self.poly.deriv(order)(np.asarray(x, dtype=float)) if order else self.poly(np.asarray(x, dtype=float))

    def antiderivative(self, x):
        return self.poly.integ(lbnd=0.0)(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class CallableMode(Mode):
    """Mode from user callables ``(f, f', f'', f''', int_0^x f)``."""

    derivs: tuple
    integral: Callable | None = None

    def value(self, x, order=0):
        return np.asarray(self.derivs[order](np.asarray(x, dtype=float)), dtype=float)

    def antiderivative(self, x):
        if self.integral is None:
            raise NotImplementedError("this mode has no antiderivative")
        return np.asarray(self.integral(np.asarray(x, dtype=float)), dtype=float)


class Field:
    """Deterministic refractive index ``n(x) = sum_i c_i m_i(x)``."""

    def __init__(self, terms: Sequence[tuple[float, Mode]]):
        self.terms = [(float(c), m) for c, m in terms]

    def __call__(self, x, order: int = 0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for c, m in self.terms:
            if c:
                out = out + c * m.value(x, order)
        return out

    def N(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for c, m in self.terms:
            if c:
                out = out + c * m.antiderivative(x)
        return out

    def min_value(self, samples: int = 4097) -> float:
        return float(np.min(self(np.linspace(0.0, 1.0, samples))))


def constant_field(c: float = 1.0) -> Field:
    return Field([(1.0, ConstantMode(c))])


def sine_field(n0: float, amplitudes: Sequence[float]) -> Field:
    """``n0 + sum_j amplitudes[j-1] sin(j pi x)``."""
    return Field([(1.0, ConstantMode(n0))] + [(1.0, SineMode(a, j)) for j, a in enumerate(amplitudes, 1)])


class Source:
    """Source term ``F`` with its first two derivatives."""

    def __init__(self, F: Callable, dF: Callable, d2F: Callable | None = None):
        self._f = (F, dF, d2F)

    def __call__(self, x, order: int = 0) -> np.ndarray:
        fn = self._f[order]
        if fn is None:
            raise NotImplementedError(f"source derivative of order {order} not supplied")
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(fn(x), dtype=float), x.shape)

    @classmethod
    def polynomial(cls, coeffs: Sequence[float]) -> "Source":
        p = Polynomial(coeffs)
        return cls(p, p.deriv(1), p.deriv(2))


def linear_source() -> Source:
    """``F(x) = x``."""
    return Source.polynomial([0.0, 1.0])


def zero_source() -> Source:
    return Source.polynomial([0.0])


class AffineModel:
    """``n(x, y) = n_0(x) + sum_j n_j(x) y_j`` with ``y`` uniform on ``[-1, 1]^d``."""

    def __init__(self, n0: Mode, modes: Sequence[Mode], tag: str = "custom"):
        self.n0 = n0
        self.modes = list(modes)
        self.tag = tag

    @property
    def d(self) -> int:
        return len(self.modes)

    def positivity_margin(self, samples: int = 4097) -> float:
        xs = np.linspace(0.0, 1.0, samples)
        return float(np.min(self.n0.value(xs))) - sum(m.sup_norm() for m in self.modes)

    def check_positive(self) -> float:
        margin = self.positivity_margin()
        if not margin > 0:
            raise PositivityError(f"min n_0 - sum ||n_j|| = {margin:.3g} is not positive")
        return margin

    def at(self, y: Sequence[float]) -> Field:
        y = np.asarray(y, dtype=float).ravel()
        if y.shape != (self.d,):
            raise ValueError(f"expected {self.d} parameters, got {y.size}")
        return Field([(1.0, self.n0)] + list(zip(y.tolist(), self.modes)))

    def mode_matrix(self, x, order: int = 0) -> np.ndarray:
        """Rows ``n_0, n_1, ..., n_d`` (derivative ``order``) sampled at ``x``."""
        x = np.asarray(x, dtype=float)
        return np.stack([self.n0.value(x, order)] + [m.value(x, order) for m in self.modes])

    def antiderivative_matrix(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.stack([self.n0.antiderivative(x)] + [m.antiderivative(x) for m in self.modes])

    def phase_vector(self, x: float) -> np.ndarray:
        """``a_j(x) = N_j(x) = int_0^x n_j``."""
        if not 0.0 <= x <= 1.0:
            raise ValueError("x must lie in [0, 1]")
        return np.array([m.antiderivative(np.float64(x)) for m in self.modes], dtype=float)

    def scaled(self, eps: float) -> "AffineModel":
        return AffineModel(self.n0, [_Scaled(m, eps) for m in self.modes], self.tag)


@dataclass(frozen=True)
class _Scaled(Mode):
    mode: Mode
    eps: float

    def value(self, x, order=0):
        return self.eps * self.mode.value(x, order)

    def antiderivative(self, x):
        return self.eps * self.mode.antiderivative(x)

    def sup_norm(self):
        return abs(self.eps) * self.mode.sup_norm()


def builtin_model(d: int) -> AffineModel:
    """``n_0 = 1`` and ``n_j(x) = exp(-j) sin(j pi x)``, ``j = 1..d``."""
    if d < 0:
        raise ValueError("d must be >= 0")
    return AffineModel(ConstantMode(1.0), [SineMode(math.exp(-j), j) for j in range(1, d + 1)], "builtin")


def model_from_config(path: str | Path, d: int | None = None) -> AffineModel:
    """Load ``{"n0": c0, "coefficients": [c1, ...]}``: ``n_j = c_j sin(j pi x)``.

    ``d`` truncates (or checks) the number of modes.
    """
    cfg = json.loads(Path(path).read_text())
    coeffs = [float(c) for c in cfg["coefficients"]]
    if d is not None:
        if d > len(coeffs):
            raise ValueError(f"config has {len(coeffs)} coefficients, {d} requested")
        coeffs = coeffs[:d]
    model = AffineModel(ConstantMode(float(cfg.get("n0", 1.0))), [SineMode(c, j) for j, c in enumerate(coeffs, 1)], "config")
    model.check_positive()
    return model


__all__ = [
    "AffineModel",
    "CallableMode",
    "ConstantMode",
    "Field",
    "Mode",
    "PolyMode",
    "PositivityError",
    "SineMode",
    "Source",
    "builtin_model",
    "constant_field",
    "linear_source",
    "model_from_config",
    "sine_field",
    "zero_source",
]
