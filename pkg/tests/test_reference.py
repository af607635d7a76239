import pytest

from uvorbits.reference import (
    TABLE_IDS,
    count_report,
    diff_table,
    reference_rows,
    regenerate,
    tables_for_period,
)


def test_reference_rows_load():
    assert [len(reference_rows(t)) for t in TABLE_IDS] == [14, 9, 24, 15]
    exact = reference_rows("neutral-3")[-2]
    assert exact.u == pytest.approx(complex(-0.5, 3**0.5 / 2))


def test_tables_for_period():
    assert tables_for_period(3) == ["neutral-3", "critical-3"]
    assert tables_for_period(6) == []


@pytest.mark.parametrize("table", TABLE_IDS)
def test_regenerate_and_diff(table):
    pts = regenerate(table)
    d = diff_table(table, pts, 1e-6)
    assert d.ok, d.report_lines()
    assert d.report_lines() == []


def test_diff_detects_perturbation():
    pts = regenerate("critical-3")
    d = diff_table("critical-3", pts[:-1], 1e-6)
    assert not d.ok and any("no computed point" in l or "distance" in l for l in d.report_lines())


def test_unknown_table():
    with pytest.raises(ValueError):
        regenerate("9.9")


def test_count_report_period_five_critical():
    rep = {e["quantity"]: e for e in count_report(5, compute_neutral_up_to=0)}
    assert rep["critical_points"]["found"] == rep["critical_points"]["reference"] == 75
    assert rep["neutral_solutions"]["found"] is None
