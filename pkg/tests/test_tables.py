import pytest

from fccs.tables import TABLES, GatedTableError, Policy, adaptive_uq_expected_counts, run_table

QUICK = ["T1", "T2", "T3", "T4", "T5", "T7", "T8", "T9", "T13", "T14", "T15"]


def _check(tid):
    res = run_table(tid)
    assert res.cells
    assert res.passed, [(c.params, c.quantity, c.computed, c.expected) for c in res.failures]
    return res


@pytest.mark.parametrize("tid", QUICK)
def test_table_reproduces(tid):
    _check(tid)


@pytest.mark.slow
def test_decaying_importance_table():
    _check("T6")


@pytest.mark.expensive
@pytest.mark.parametrize("tid", ["T10", "T11", "T12"])
def test_expensive_tables(tid):
    res = run_table(tid, jobs=8, expensive=True)
    assert res.passed, [(c.params, c.quantity, c.computed, c.expected) for c in res.failures]


def test_every_table_registered():
    assert list(TABLES) == [f"T{i}" for i in range(1, 16)]
    assert {t for t, s in TABLES.items() if s.expensive} == {"T10", "T11", "T12"}


@pytest.mark.parametrize("tid", ["T10", "T11", "T12"])
def test_gated_tables_refuse(tid):
    with pytest.raises(GatedTableError, match="expensive"):
        run_table(tid)


def test_unknown_table():
    with pytest.raises(ValueError):
        run_table("T16")


def test_adaptive_uq_counts_grow_with_dimension():
    c6, c10 = adaptive_uq_expected_counts(6), adaptive_uq_expected_counts(10)
    assert c6[0.00125, 64] == (141, 81, 13, 235)
    assert c10[0.00125, 64] == (149, 89, 21, 259)


def test_policies():
    assert Policy("rel", 0.05).check(1.04, 1.0)
    assert not Policy("rel", 0.05).check(1.06, 1.0)
    assert Policy("factor", 3.0).check(2.9, 1.0) and not Policy("factor", 3.0).check(0.3, 1.0)
    assert Policy("at_most", 1e-14).check(1e-15, None)
    assert Policy("info").check(5.0, 1.0) is None
