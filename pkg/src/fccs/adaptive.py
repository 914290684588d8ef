"""Dimension-adaptive FCCS quadrature driven by relative profit indicators.

Each multi-index ``l`` contributes the hierarchical surplus

    Delta_l = (D^{l_1} x ... x D^{l_d}) f_hat,   D^l = I^{w,l} - I^{w,l-1},

which, the grids being nested, is a single tensor contraction over the level-``l``
grid with difference weights.  The index set grows greedily by largest
``|Delta_l| / |estimate|`` until every active profit is below the tolerance.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .cheb1d import MIDPOINT, _check_variant, key_to_node, node_keys, num_nodes
from .fcc1d import build_rule
from .sparse import contract, evaluate, phase_split

PROFIT_FLOOR = 1e-30
CONVERGED = "converged"
BUDGET = "budget"
EXHAUSTED = "exhausted"  # no admissible index left under max_level_sum


class NodeCache:
    """Integrand values keyed by integer node-key tuples.

    Several integrals over the same nodes (with different phases) can share
    one cache; ``evals`` counts distinct evaluations of ``f``.
    """

    def __init__(self, f: Callable[[np.ndarray], np.ndarray]):
        self.f = f
        self.values: dict[tuple[int, ...], complex] = {}

    @property
    def evals(self) -> int:
        return len(self.values)

    def lookup(self, keys: np.ndarray) -> np.ndarray:
        rows = [tuple(r) for r in keys.tolist()]
        missing = [r for r in dict.fromkeys(rows) if r not in self.values]
        if missing:
            new = evaluate(self.f, key_to_node(np.array(missing, dtype=np.int64)))
            self.values.update(zip(missing, new.tolist()))
        return np.array([self.values[r] for r in rows])


def _embed(w: np.ndarray, level: int, variant: str) -> np.ndarray:
    """Level ``level-1`` weights placed on the level-``level`` node ordering."""
    out = np.zeros(num_nodes(level, variant), dtype=complex)
    if level == 1:
        return out
    if level == 2 and variant == MIDPOINT:
        out[1] = w[0]
    else:
        out[::2] = w
    return out


@dataclass
class AdaptiveState:
    old_set: set = field(default_factory=set)
    active_set: set = field(default_factory=set)
    increments: dict = field(default_factory=dict)
    profits: dict = field(default_factory=dict)
    estimate: complex = 0j
    evals: int = 0


@dataclass
class AdaptiveResult:
    value: complex
    status: str
    evals: int
    max_profit: float
    indices: list
    state: AdaptiveState


class _Surplus:
    def __init__(self, k: float, a: Sequence[float], variant: str, cache: NodeCache):
        self.split = phase_split(k, a)
        self.variant = variant
        self.cache = cache
        self._diff: dict[tuple[int, int], np.ndarray] = {}

    def diff_weights(self, dim: int, level: int) -> np.ndarray:
        key = (dim, level)
        if key not in self._diff:
            omega = self.split.k * self.split.a_tilde[dim]
            w = np.array(build_rule(omega, level, self.variant).node_weights)
            if level > 1:
                w = w - _embed(build_rule(omega, level - 1, self.variant).node_weights, level, self.variant)
            self._diff[key] = w
        return self._diff[key]

    def __call__(self, levels: tuple[int, ...]) -> complex:
        axes = [node_keys(l, self.variant) for l in levels]
        mesh = np.meshgrid(*axes, indexing="ij")
        keys = np.stack([m.ravel() for m in mesh], axis=1)
        vals = self.cache.lookup(keys)
        if self.split.a_hat.any():
            vals = vals * np.exp(1j * self.split.k * (key_to_node(keys) @ self.split.a_hat))
        shape = tuple(len(ax) for ax in axes)
        return contract(vals.reshape(shape), [self.diff_weights(j, l) for j, l in enumerate(levels)])


def adaptive_integrate(
    f: Callable[[np.ndarray], np.ndarray],
    k: float,
    a: Sequence[float],
    tol: float,
    budget: int = 10_000,
    level1_variant: str = MIDPOINT,
    max_level_sum: int | None = None,
    cache: NodeCache | None = None,
) -> AdaptiveResult:
    """Adaptive approximation of ``int_{[-1,1]^d} f(y) exp(i k a.y) dy``.

    Stops when the largest active profit is ``<= tol`` (``status="converged"``)
    or once ``budget`` distinct evaluations have been spent (``status="budget"``).
    ``max_level_sum`` optionally caps ``|l|``.  Pass a shared ``cache`` to reuse
    samples of ``f`` across integrals with different phases.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    _check_variant(level1_variant)
    d = len(np.atleast_1d(a))
    if max_level_sum is not None and max_level_sum < d:
        raise ValueError("max_level_sum must be >= d")
    cache = cache if cache is not None else NodeCache(f)
    surplus = _Surplus(k, a, level1_variant, cache)
    # evals are counted per integral, even when the cache is shared
    used: set = set()

    state = AdaptiveState()
    heap: list = []

    def insert(levels, root=False):
        delta = surplus(levels)
        used.update(_grid_keys(levels, level1_variant))
        state.increments[levels] = delta
        state.estimate += delta
        # the root has nothing to be measured against, so it is always refined
        profit = math.inf if root else abs(delta) / max(abs(state.estimate), PROFIT_FLOOR)
        state.profits[levels] = profit
        state.active_set.add(levels)
        heapq.heappush(heap, (-profit, levels))

    insert((1,) * d, root=True)
    status = EXHAUSTED
    while heap:
        state.evals = len(used)
        neg, best = heap[0]
        if -neg <= tol:
            status = CONVERGED
            break
        if state.evals >= budget:
            status = BUDGET
            break
        heapq.heappop(heap)
        state.active_set.discard(best)
        state.old_set.add(best)
        for j in range(d):
            nb = best[:j] + (best[j] + 1,) + best[j + 1:]
            if nb in state.active_set or nb in state.old_set:
                continue
            if max_level_sum is not None and sum(nb) > max_level_sum:
                continue
            if all(
                nb[:i] + (nb[i] - 1,) + nb[i + 1:] in state.old_set for i in range(d) if nb[i] > 1
            ):
                insert(nb)
    state.evals = len(used)
    max_profit = max((state.profits[l] for l in state.active_set), default=0.0)
    indices = sorted(state.old_set | state.active_set)
    return AdaptiveResult(state.estimate, status, state.evals, max_profit, indices, state)


def _grid_keys(levels: tuple[int, ...], variant: str):
    return itertools.product(*(node_keys(l, variant).tolist() for l in levels))


__all__ = [
    "AdaptiveResult",
    "AdaptiveState",
    "NodeCache",
    "adaptive_integrate",
    "BUDGET",
    "CONVERGED",
    "EXHAUSTED",
]
