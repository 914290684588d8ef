"""Reproduction of the reference numerical tables T1..T15.

Each table recomputes a grid of quantities and compares every cell with a
frozen expected value under an explicit tolerance policy.  Cells with an
informational policy are reported with ``pass`` left empty.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .adaptive import adaptive_integrate
from .cheb1d import MIDPOINT, TWO_POINT
from .fields import builtin_model
from .integrands import get_integrand, nhalf_reference
from .sparse import exact_node_count, fccs_integrate
from .uq import Adaptive, HNACache, Standard, expectation_u1, reference_expectation


# -- tolerance policies -------------------------------------------------------------


@dataclass(frozen=True)
class Policy:
    kind: str
    value: float = 0.0

    def check(self, computed: float, expected: float | None) -> bool | None:
        if self.kind == "info":
            return None
        if self.kind == "at_most":
            return bool(computed <= self.value)
        if self.kind == "rel":
            return bool(abs(computed - expected) <= self.value * abs(expected))
        if self.kind == "factor":
            return bool(expected / self.value <= computed <= expected * self.value)
        if self.kind == "range":
            lo, hi = self.value
            return bool(lo <= computed <= hi)
        if self.kind == "exact":
            return bool(computed == expected)
        raise ValueError(self.kind)

    def __str__(self) -> str:
        if self.kind == "rel":
            return f"within {self.value:.0%}"
        if self.kind == "factor":
            return f"within x{self.value:g}"
        if self.kind == "at_most":
            return f"<= {self.value:g}"
        if self.kind == "range":
            return f"in [{self.value[0]:g}, {self.value[1]:g}]"
        return self.kind


REL5, REL10 = Policy("rel", 0.05), Policy("rel", 0.10)
INFO, EXACT = Policy("info"), Policy("exact")


def factor(f: float) -> Policy:
    return Policy("factor", f)


def at_most(b: float) -> Policy:
    return Policy("at_most", b)


def in_range(lo: float, hi: float) -> Policy:
    return Policy("range", (lo, hi))


@dataclass
class Cell:
    params: dict
    quantity: str
    computed: float
    expected: float | None
    policy: Policy

    @property
    def passed(self) -> bool | None:
        return self.policy.check(self.computed, self.expected)


@dataclass
class TableResult:
    id: str
    caption: str
    cells: list[Cell] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.cells)

    @property
    def failures(self) -> list[Cell]:
        return [c for c in self.cells if c.passed is False]

    def param_names(self) -> list[str]:
        names: list[str] = []
        for c in self.cells:
            for n in c.params:
                if n not in names:
                    names.append(n)
        return names


@dataclass(frozen=True)
class TableSpec:
    id: str
    caption: str
    build: Callable[[int], Iterable[Cell]]
    expensive: bool = False
    cost: str = "seconds"

    def run(self, jobs: int = 1) -> TableResult:
        return TableResult(self.id, self.caption, list(self.build(jobs)))


def _pmap(fn, items, jobs: int) -> list:
    items = list(items)
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(i) for i in items]


# -- quadrature tables ----------------------------------------------------------------

K_SEQ = (13.35, 25.92, 51.05, 101.32, 201.85, 402.91, 805.03)


def _t1(jobs):
    f = get_integrand("squares")
    a = (1.0, 0.0, 1.0, 0.0)
    expected = {math.pi / 2: 2.59e-2, 2 * math.pi: 4.56e-3}
    for k, e in expected.items():
        exact = f.exact(k, a)
        errs = _pmap(lambda r: abs(fccs_integrate(f, k, a, r) - exact), range(1, 8), jobs)
        for r, err in zip(range(1, 8), errs):
            if r <= 4:
                yield Cell({"k": k, "r": r}, "abs_err", err, e, REL5)
            else:
                yield Cell({"k": k, "r": r}, "abs_err", err, None, at_most(1e-14))


T2_EXPECTED = {
    2: (3.22, 4.10e-2, 2.20e-3, 9.47e-5),
    4: (2.67, 1.99e-1, 7.13e-2, 2.25e-3),
    8: (4.32, 3.73e-1, 1.90e-1, 5.87e-2),
    16: (2.10, 1.37e-1, 1.83e-1, 1.62e-1),
}


def _t2(jobs):
    k, a = 101.53, (1.0, 1.0, 1.0)

    def column(m):
        f = get_integrand(f"cosprod:{m}")
        ref = fccs_integrate(f, k, a, 10)
        return [abs(fccs_integrate(f, k, a, r) - ref) / abs(ref) for r in range(3, 7)]

    cols = _pmap(column, T2_EXPECTED, jobs)
    for m, col in zip(T2_EXPECTED, cols):
        for r, err, e in zip(range(3, 7), col, T2_EXPECTED[m]):
            yield Cell({"m": m, "r": r}, "rel_err", err, e, REL5)


# |I|, (e, E) at r=3, (e, E) at r=4
T3_EXPECTED = {
    13.35: (1.06e-3, 2.25e-3, 2.12, 2.35e-4, 2.21e-1),
    25.92: (1.04e-4, 2.66e-4, 2.56, 1.88e-5, 1.81e-1),
    51.05: (1.12e-5, 3.24e-5, 2.90, 1.28e-6, 1.14e-1),
    101.32: (1.28e-6, 4.00e-6, 3.12, 8.22e-8, 6.42e-2),
    201.85: (1.52e-7, 4.96e-7, 3.26, 5.20e-9, 3.41e-2),
    402.91: (1.86e-8, 6.18e-8, 3.33, 3.27e-10, 1.76e-2),
    805.03: (2.29e-9, 7.71e-9, 3.36, 2.05e-11, 8.94e-3),
}
T4_EXPECTED = {
    13.35: (6.65e-5, 6.27e-2, 2.05e-5, 1.93e-2),
    25.92: (2.57e-6, 2.47e-2, 8.37e-7, 8.06e-3),
    51.05: (5.36e-8, 4.79e-3, 2.86e-8, 2.56e-3),
    101.32: (1.03e-9, 8.05e-4, 9.25e-10, 7.23e-4),
    201.85: (2.19e-10, 1.43e-3, 2.93e-11, 1.92e-4),
    402.91: (1.88e-11, 1.01e-3, 9.19e-13, 4.94e-5),
    805.03: (1.34e-12, 5.83e-4, 2.85e-14, 1.24e-5),
}


def _k_sweep(variant: str, jobs: int) -> dict:
    f = get_integrand("cosprod:2")
    a = (1.0, 1.0, 1.0)

    def row(k):
        ref = fccs_integrate(f, k, a, 10, variant)
        out = [abs(ref)]
        for r in (3, 4):
            e = abs(fccs_integrate(f, k, a, r, variant) - ref)
            out += [e, e / abs(ref)]
        return out

    return dict(zip(K_SEQ, _pmap(row, K_SEQ, jobs)))


def _ratio_cells(rows: dict, index: int, quantity: str, policy: Policy, kmin: float = 0.0):
    ks = list(rows)
    for k0, k1 in zip(ks, ks[1:]):
        if k1 >= kmin:
            yield Cell({"k": k1}, quantity, rows[k0][index] / rows[k1][index], None, policy)


def _t3(jobs):
    rows = _k_sweep(MIDPOINT, jobs)
    names = ("abs_I", "abs_err_r3", "rel_err_r3", "abs_err_r4", "rel_err_r4")
    for k, vals in rows.items():
        for name, v, e in zip(names, vals, T3_EXPECTED[k]):
            yield Cell({"k": k}, name, v, e, REL10)
    yield from _ratio_cells(rows, 0, "abs_I_ratio", in_range(7.5, 16.0))
    yield from _ratio_cells(rows, 4, "rel_err_r4_ratio", in_range(1.5, 2.5), kmin=100.0)


def _t4(jobs):
    rows = _k_sweep(TWO_POINT, jobs)
    names = ("abs_err_r3", "rel_err_r3", "abs_err_r4", "rel_err_r4")
    for k, vals in rows.items():
        for name, v, e in zip(names, vals[1:], T4_EXPECTED[k]):
            yield Cell({"k": k}, name, v, e, REL10)
    yield from _ratio_cells({k: v[1:] for k, v in rows.items()}, 3, "rel_err_r4_ratio", in_range(3.0, 4.5), kmin=100.0)


T5_EXPECTED = {
    (0.01, 1.0, 1.0): {
        25.92: (2.30e-3, 1.96e-1, 2.41e-2, 1.37e-4, 1.30e-5, 2.05e-6),
        101.32: (1.68e-4, 1.34e-1, 7.00e-3, 2.70e-4, 2.13e-5, 4.46e-7),
        201.85: (3.96e-5, 5.42e-2, 3.54e-3, 4.57e-6, 1.92e-5, 1.59e-7),
    },
    (0.0, 1.0, 1.0): {
        25.92: (2.30e-3, 1.80e-1, 2.47e-2, 2.11e-4, 1.56e-5, 2.12e-6),
        101.32: (1.70e-4, 1.64e-1, 7.97e-3, 3.88e-4, 1.53e-5, 8.60e-7),
        201.85: (4.38e-5, 1.63e-1, 4.87e-3, 2.21e-4, 1.09e-5, 2.48e-7),
    },
}


def _t5(jobs):
    f = get_integrand("cosprod:2")
    cases = [(a, k) for a in T5_EXPECTED for k in T5_EXPECTED[a]]

    def cell(case):
        a, k = case
        ref = fccs_integrate(f, k, a, 10)
        return [abs(ref)] + [abs(fccs_integrate(f, k, a, r) - ref) / abs(ref) for r in range(4, 9)]

    for (a, k), vals in zip(cases, _pmap(cell, cases, jobs)):
        exp = T5_EXPECTED[a][k]
        p = {"a1": a[0], "k": k}
        yield Cell(p, "abs_I", vals[0], exp[0], REL10)
        for r, v, e in zip(range(4, 9), vals[1:], exp[1:]):
            pol = at_most(5e-6) if r == 8 else factor(3.0)
            yield Cell({**p, "r": r}, "rel_err", v, e, pol)
            if r == 8:
                yield Cell({**p, "r": r}, "rel_err_vs_expected", v, e, factor(3.0))


T6_EXPECTED = {
    "cospairs": {
        1: (7.92e-1, 8.51e-3, 4.47e-5, 3.21e-6),
        2: (3.14e1, 1.49, 8.51e-2, 3.62e-4),
        3: (7.78, 1.00, 1.68e-1, 7.35e-3),
        4: (1.74e1, 6.15, 2.52, 3.71e-1),
    },
    "cosdecay": {
        1: (3.52e-7, 7.84e-9, 6.74e-10, 2.61e-12),
        2: (2.27e-5, 1.93e-6, 1.35e-7, 8.76e-10),
        3: (4.27e-4, 1.67e-5, 6.33e-7, 3.23e-8),
        4: (6.51e-3, 1.56e-4, 6.04e-6, 1.18e-6),
    },
}
T6_K = 16 * math.pi + 1


def decaying_importance_errors(family: str, m: int, rs=range(6, 10)) -> list[float]:
    """Relative errors of the 6D pair-product integrands (reference: product of 2D r=10 rules)."""
    weights = [1.0, 1.0, 1.0] if family == "cospairs" else [1.0, 0.1, 0.01]
    k = T6_K
    ref = 1.0 + 0j
    for w in weights:
        ref *= fccs_integrate(lambda Y, c=w * m: np.cos(c * Y[:, 0] * Y[:, 1]), k, (1.0, 1.0), 10)
    f = get_integrand(f"{family}:{m}")
    return [abs(fccs_integrate(f, k, (1.0,) * 6, r) - ref) / abs(ref) for r in rs]


def _t6(jobs):
    cases = [(fam, m) for fam in T6_EXPECTED for m in T6_EXPECTED[fam]]
    for (fam, m), errs in zip(cases, _pmap(lambda c: decaying_importance_errors(*c), cases, jobs)):
        for r, v, e in zip(range(6, 10), errs, T6_EXPECTED[fam][m]):
            # near machine precision only the order of magnitude is meaningful
            pol = REL10 if e > 1e-11 else at_most(1e-11)
            yield Cell({"f": fam, "m": m, "r": r}, "rel_err", v, e, pol)


# adaptive tolerance, (adaptive err, evals), standard r=4,5,6 (err, evals)
ADAPTIVE_EXPECTED = {
    4: (1e-4, (1.15e-7, 53), ((8.37e-6, 137), (1.34e-7, 401), (7.21e-10, 1105))),
    6: (1e-6, (9.33e-8, 129), ((8.46e-6, 389), (1.41e-7, 1457), (8.64e-10, 4865))),
    8: (1e-6, (1.17e-7, 151), ((8.46e-6, 849), (1.41e-7, 3937), (7.85e-10, 15713))),
}


def adaptive_comparison(d: int, tol: float, k: float = 101.53, x: float = 0.5):
    f = get_integrand(f"nhalf:{x}")
    a = f.default_a(d)
    ref = nhalf_reference(x, k, d)
    res = adaptive_integrate(f, k, a, tol)
    out = [(abs(res.value - ref) / abs(ref), res.evals)]
    for r in (4, 5, 6):
        out.append((abs(fccs_integrate(f, k, a, r) - ref) / abs(ref), exact_node_count(r, d)))
    return out


def _adaptive_table(d):
    def build(jobs):
        tol, ad, std = ADAPTIVE_EXPECTED[d]
        rows = adaptive_comparison(d, tol)
        yield Cell({"method": f"adaptive:{tol:g}"}, "rel_err", rows[0][0], ad[0], factor(3.0))
        yield Cell({"method": f"adaptive:{tol:g}"}, "evals", rows[0][1], ad[1], factor(2.0))
        for r, (err, n), (e_err, e_n) in zip((4, 5, 6), rows[1:], std):
            yield Cell({"method": f"standard:{r}"}, "rel_err", err, e_err, factor(2.0))
            yield Cell({"method": f"standard:{r}"}, "evals", n, e_n, EXACT)

    return build


# -- UQ tables ----------------------------------------------------------------------------

T10_EXPECTED = {
    8: (5.86e-3, 5.83e-3, 5.83e-3, 5.83e-3, 5.83e-3, 5.83e-3, 5.83e-3, 5.83e-3),
    16: (1.18e-4, 2.49e-5, 2.79e-5, 2.80e-5, 2.80e-5, 2.80e-5, 2.80e-5, 2.80e-5),
    32: (8.84e-4, 5.13e-5, 7.62e-6, 6.53e-6, 6.49e-6, 6.49e-6, 6.49e-6, 6.49e-6),
    64: (8.11e-4, 3.16e-4, 1.11e-4, 2.83e-6, 2.82e-6, 2.33e-6, 2.31e-6, 2.31e-6),
}
T11_EXPECTED = {
    32: (2.17e-3, 8.77e-4, 4.48e-5, 2.22e-6, 1.30e-7),
    64: (5.35e-4, 8.09e-4, 3.19e-4, 1.13e-4, 1.50e-6),
    128: (4.04e-5, 5.43e-5, 1.02e-4, 5.19e-5, 5.84e-5),
}
T12_EXPECTED = {
    32: (2.21e-3, 8.89e-4, 4.20e-5, 2.12e-6, 1.20e-7),
    64: (2.05e-4, 9.17e-4, 3.31e-4, 1.08e-4, 1.71e-6),
    128: (1.25e-4, 4.03e-5, 1.54e-4, 5.13e-5, 5.63e-5),
}


def _t10(jobs):
    m = builtin_model(4)
    for k, row in T10_EXPECTED.items():
        ref = reference_expectation(1.0, k, m, 50, 1.0 / (2**14 + 1), max_solves=50**4, jobs=jobs)
        cache = HNACache(float(k), m, 1.0, jobs=jobs)
        for r, e in zip(range(5, 13), row):
            v = expectation_u1(1.0, float(k), m, Standard(r), cache=cache).value
            yield Cell({"k": k, "r": r}, "abs_err", abs(v - ref), e, factor(2.0))


def _proxy_table(d: int, gap: int, expected: dict):
    def build(jobs):
        m = builtin_model(d)
        for k, row in expected.items():
            cache = HNACache(float(k), m, 1.0, jobs=jobs)
            E = {r: expectation_u1(1.0, float(k), m, Standard(r), cache=cache).value for r in range(4, 9 + gap)}
            for r, e in zip(range(4, 9), row):
                yield Cell({"k": k, "r": r}, "proxy", abs(E[r] - E[r + gap]), e, REL10)

    return build


ADAPTIVE_UQ_TAUS = (0.01, 0.005, 0.0025, 0.00125, 0.000625, 0.0003125)
ADAPTIVE_UQ_KS = (32, 64, 128, 256)
# (N_mu, N_nu) per (tau, k); N_F = 2d + 1 for these media at x = 1
ADAPTIVE_UQ_COUNTS = {
    6: {
        0.01: ((21, 27), (21, 75), (13, 15), (13, 13)),
        0.005: ((49, 43), (21, 75), (13, 21), (21, 13)),
        0.0025: ((53, 53), (81, 75), (13, 149), (21, 15)),
        0.00125: ((53, 77), (141, 81), (21, 149), (39, 15)),
        0.000625: ((53, 77), (149, 141), (31, 157), (55, 15)),
        0.0003125: ((91, 77), (219, 141), (167, 277), (55, 45)),
    },
}
ADAPTIVE_UQ_PROXY = {
    0.01: (3.84e-5, 1.13e-4, 2.77e-5, 2.78e-7),
    0.005: (6.37e-5, 1.86e-4, 2.57e-5, 7.76e-6),
    0.0025: (7.01e-5, 5.98e-5, 3.12e-5, 3.19e-7),
    0.00125: (2.64e-4, 1.81e-6, 6.63e-5, 7.19e-6),
}


def adaptive_uq_expected_counts(d: int) -> dict:
    """Expected ``(N_mu, N_nu, N_F, N_tot)``: every extra pair of modes adds 4 nodes to each part."""
    extra = 2 * (d - 6)
    out = {}
    for tau, row in ADAPTIVE_UQ_COUNTS[6].items():
        for k, (nm, nn) in zip(ADAPTIVE_UQ_KS, row):
            t = (nm + extra, nn + extra, 2 * d + 1)
            out[tau, k] = t + (sum(t),)
    return out


def _adaptive_uq_table(d: int):
    def build(jobs):
        m = builtin_model(d)
        counts = adaptive_uq_expected_counts(d)

        def run(k):
            cache = HNACache(float(k), m, 1.0)
            res = {}
            for tau in sorted(set(ADAPTIVE_UQ_TAUS) | {t / 4 for t in ADAPTIVE_UQ_PROXY}, reverse=True):
                res[tau] = expectation_u1(1.0, float(k), m, Adaptive(tau), cache=cache)
            return res

        per_k = dict(zip(ADAPTIVE_UQ_KS, _pmap(run, ADAPTIVE_UQ_KS, jobs)))
        for tau in ADAPTIVE_UQ_PROXY:
            for j, k in enumerate(ADAPTIVE_UQ_KS):
                v = abs(per_k[k][tau].value - per_k[k][tau / 4].value)
                yield Cell({"tau": tau, "k": k}, "proxy", v, ADAPTIVE_UQ_PROXY[tau][j], REL5)
        for tau in ADAPTIVE_UQ_TAUS:
            for k in ADAPTIVE_UQ_KS:
                r = per_k[k][tau]
                for name, v, e in zip(("N_mu", "N_nu", "N_F", "N_tot"), r.nodes + (r.n_total,), counts[tau, k]):
                    yield Cell({"tau": tau, "k": k}, name, v, e, factor(2.0))

    return build


TABLES: dict[str, TableSpec] = {
    s.id: s
    for s in [
        TableSpec("T1", "exactness for products of squares, d=4, a=(1,0,1,0)", _t1),
        TableSpec("T2", "relative error as r increases, cos(m y1 y2 y3), k=101.53", _t2),
        TableSpec("T3", "errors as k grows, r=3,4, midpoint level 1", _t3),
        TableSpec("T4", "errors as k grows, r=3,4, two-point level 1", _t4),
        TableSpec("T5", "robustness to small entries of a", _t5),
        TableSpec("T6", "decaying importance of dimensions, d=6, k=16pi+1", _t6, cost="about a minute"),
        TableSpec("T7", "adaptive versus standard rule, d=4", _adaptive_table(4)),
        TableSpec("T8", "adaptive versus standard rule, d=6", _adaptive_table(6)),
        TableSpec("T9", "adaptive versus standard rule, d=8", _adaptive_table(8)),
        TableSpec(
            "T10", "UQ absolute error, d=4, r=5..12, k=8..64", _t10, expensive=True,
            cost="4 x 50^4 = 2.5e7 finite-element solves with 16386 unknowns (many hours on one core)",
        ),
        TableSpec(
            "T11", "UQ error proxy |E_r - E_{r+4}|, d=4", _proxy_table(4, 4, T11_EXPECTED), expensive=True,
            cost="3 x 271617 HNA solves (about 20 minutes)",
        ),
        TableSpec(
            "T12", "UQ error proxy |E_r - E_{r+2}|, d=6", _proxy_table(6, 2, T12_EXPECTED), expensive=True,
            cost="3 x 350657 HNA solves (about 30 minutes)",
        ),
        TableSpec("T13", "adaptive UQ, d=6", _adaptive_uq_table(6)),
        TableSpec("T14", "adaptive UQ, d=8", _adaptive_uq_table(8)),
        TableSpec("T15", "adaptive UQ, d=10", _adaptive_uq_table(10)),
    ]
}


class GatedTableError(RuntimeError):
    pass


def run_table(table_id: str, jobs: int = 1, expensive: bool = False) -> TableResult:
    try:
        spec = TABLES[table_id.upper()]
    except KeyError:
        raise ValueError(f"unknown table {table_id!r}; choose from {', '.join(TABLES)}") from None
    if spec.expensive and not expensive:
        raise GatedTableError(f"{spec.id} is in the expensive tier ({spec.cost}); rerun with --expensive")
    return spec.run(jobs)


__all__ = [
    "Cell",
    "GatedTableError",
    "Policy",
    "TABLES",
    "TableResult",
    "TableSpec",
    "adaptive_comparison",
    "adaptive_uq_expected_counts",
    "decaying_importance_errors",
    "run_table",
]
