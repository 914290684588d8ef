"""Smolyak combination technique with Filon-Clenshaw-Curtis 1D factors.

The d-dimensional rule is

    sum_{r <= |l| <= r+d-1} (-1)^{r+d-|l|-1} C(d-1, |l|-r) (I^{w_1,l_1} x ... x I^{w_d,l_d}) f

with ``w_j = k a_j``.  Dimensions with ``k |a_j| < 1`` are treated as
non-oscillatory: their phase factor is folded into the integrand and the plain
Clenshaw-Curtis rule is used there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .cheb1d import MIDPOINT, TWO_POINT, _check_variant, key_to_node, node_keys, num_nodes
from .fcc1d import Rule1D, build_rule, cc_weights

Integrand = Callable[[np.ndarray], np.ndarray]


class NonFiniteSampleError(ValueError):
    """The integrand returned NaN or inf at a quadrature node."""


def lambda_set(q: int, d: int) -> list[tuple[int, ...]]:
    """All ``l >= 1`` in ``N^d`` with ``|l| <= q``, in lexicographic order."""
    if d < 1 or q < d:
        raise ValueError(f"Lambda(q={q}, d={d}) is empty: need q >= d >= 1")
    return list(_compositions_upto(q, d))


def _compositions_upto(q: int, d: int) -> Iterator[tuple[int, ...]]:
    if d == 1:
        for l in range(1, q + 1):
            yield (l,)
        return
    for l in range(1, q - (d - 1) + 1):
        for rest in _compositions_upto(q - l, d - 1):
            yield (l,) + rest


def combination_coeffs(r: int, d: int) -> list[tuple[tuple[int, ...], int]]:
    """Multi-indices and signed coefficients of the combination technique."""
    if r < 1 or d < 1:
        raise ValueError("need r >= 1 and d >= 1")
    out = []
    for l in _compositions_upto(r + d - 1, d):
        s = sum(l)
        if s < r:
            continue
        c = (-1) ** (r + d - s - 1) * math.comb(d - 1, s - r)
        if c:
            out.append((l, c))
    return out


@dataclass(frozen=True)
class PhaseSplit:
    k: float
    a: np.ndarray
    a_tilde: np.ndarray
    a_hat: np.ndarray
    omegas: np.ndarray

    @property
    def oscillatory(self) -> np.ndarray:
        return self.a_tilde != 0.0


def phase_split(k: float, a: Sequence[float]) -> PhaseSplit:
    """Split ``a`` into oscillatory (``k|a_j| >= 1``) and residual parts."""
    if not k > 0:
        raise ValueError("k must be positive")
    a = np.atleast_1d(np.asarray(a, dtype=float))
    osc = k * np.abs(a) >= 1.0
    a_tilde = np.where(osc, a, 0.0)
    a_hat = a - a_tilde
    return PhaseSplit(float(k), a, a_tilde, a_hat, k * a)


def _hier_new_points(level: int, variant: str) -> int:
    if level == 1:
        return num_nodes(1, variant)
    return num_nodes(level, variant) - num_nodes(level - 1, variant)


def exact_node_count(r: int, d: int, level1_variant: str = MIDPOINT) -> int:
    """Number of distinct nodes of the level-``r`` sparse grid in ``d`` dimensions."""
    _check_variant(level1_variant)
    new = [0] + [_hier_new_points(l, level1_variant) for l in range(1, r + 1)]
    return sum(math.prod(new[l] for l in idx) for idx in _compositions_upto(r + d - 1, d))


def mueller_gronbach_estimate(r: int, d: int) -> float:
    """Large-``r`` asymptotic node count of the midpoint-based sparse grid."""
    return (1.0 + (d - 1) / r) ** (d - 1) * 2.0**r * r ** (d - 1) / (math.factorial(d - 1) * 2**d)


def _tensor_keys(levels: Sequence[int], variant: str) -> np.ndarray:
    axes = [node_keys(l, variant) for l in levels]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def contract(values: np.ndarray, weights: Sequence[np.ndarray]) -> complex:
    """Apply ``w_1 x ... x w_d`` to a tensor of values (row-major)."""
    out = values
    for w in weights:
        out = np.tensordot(w, out, axes=(0, 0))
    return complex(out)


@dataclass
class SparsePlan:
    """Node table and 1D rules for one ``(k, a, r, d)`` Smolyak-FCC rule."""

    split: PhaseSplit
    r: int
    level1_variant: str
    combination: list
    keys: np.ndarray
    nodes: np.ndarray
    term_index: list
    inverse: np.ndarray
    rules: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return len(self.split.a)

    @property
    def num_nodes(self) -> int:
        return len(self.keys)

    def rule(self, dim: int, level: int) -> Rule1D:
        key = (dim, level)
        if key not in self.rules:
            omega = self.split.k * self.split.a_tilde[dim]
            self.rules[key] = build_rule(omega, level, self.level1_variant)
        return self.rules[key]

    def phase_factor(self) -> np.ndarray:
        """``exp(i k a_hat . y)`` at every node (the folded non-oscillatory phase)."""
        return np.exp(1j * self.split.k * (self.nodes @ self.split.a_hat))

    def integrate_values(self, values: np.ndarray) -> complex:
        """Rule applied to integrand values given at ``self.nodes``.

        ``values`` are samples of ``f`` itself; the residual phase is applied here.
        """
        fhat = np.asarray(values) * self.phase_factor()
        total = 0.0 + 0.0j
        for (levels, coeff), (start, stop, shape) in zip(self.combination, self.term_index):
            # term_index maps the term's tensor grid (row-major) into node rows
            local = fhat[self.inverse[start:stop]].reshape(shape)
            weights = [self.rule(j, l).node_weights for j, l in enumerate(levels)]
            total += coeff * contract(local, weights)
        return total


def make_plan(k: float, a: Sequence[float], r: int, level1_variant: str = MIDPOINT) -> SparsePlan:
    _check_variant(level1_variant)
    split = phase_split(k, a)
    d = len(split.a)
    combination = combination_coeffs(r, d)
    blocks, term_index, start = [], [], 0
    for levels, _ in combination:
        tk = _tensor_keys(levels, level1_variant)
        blocks.append(tk)
        shape = tuple(num_nodes(l, level1_variant) for l in levels)
        term_index.append((start, start + len(tk), shape))
        start += len(tk)
    all_keys = np.concatenate(blocks, axis=0)
    keys, inverse = np.unique(all_keys, axis=0, return_inverse=True)
    return SparsePlan(
        split, r, level1_variant, combination, keys, key_to_node(keys), term_index, inverse.ravel()
    )


def evaluate(f: Integrand, nodes: np.ndarray) -> np.ndarray:
    """Evaluate a vectorised integrand on an ``(m, d)`` node array and check finiteness."""
    values = np.asarray(f(nodes))
    if values.shape == ():
        values = np.full(len(nodes), values)
    values = values.reshape(len(nodes))
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise NonFiniteSampleError(f"non-finite integrand value {values[i]} at node {nodes[i].tolist()}")
    return values


def fccs_integrate(
    f: Integrand,
    k: float,
    a: Sequence[float],
    r: int,
    level1_variant: str = MIDPOINT,
    plan: SparsePlan | None = None,
) -> complex:
    """Approximate ``int_{[-1,1]^d} f(y) exp(i k a.y) dy`` with the level-``r`` FCCS rule.

    ``f`` receives an ``(m, d)`` array of nodes and must return ``m`` values; it
    is called once, on the deduplicated sparse grid.
    """
    if plan is None:
        plan = make_plan(k, a, r, level1_variant)
    return plan.integrate_values(evaluate(f, plan.nodes))


def tensor_cc_integrate(f: Integrand, k: float, a: Sequence[float], n_per_dim: int) -> complex:
    """Full tensor Clenshaw-Curtis rule applied to ``f(y) exp(i k a.y)`` (no Filon step)."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    d = len(a)
    n = int(n_per_dim)
    if n < 1:
        raise ValueError("n_per_dim must be >= 1")
    t = np.sin(np.pi * (n - 2 * np.arange(n + 1)) / (2 * n))
    w = cc_weights(n)
    mesh = np.meshgrid(*([t] * d), indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    vals = evaluate(f, pts) * np.exp(1j * k * (pts @ a))
    return contract(vals.reshape((n + 1,) * d), [w] * d)


__all__ = [
    "MIDPOINT",
    "TWO_POINT",
    "NonFiniteSampleError",
    "PhaseSplit",
    "SparsePlan",
    "combination_coeffs",
    "contract",
    "evaluate",
    "exact_node_count",
    "fccs_integrate",
    "lambda_set",
    "make_plan",
    "mueller_gronbach_estimate",
    "phase_split",
    "tensor_cc_integrate",
]
