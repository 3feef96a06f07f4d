import math

import pytest

from unitindex.report import (
    convergence_report,
    expectation,
    format_percent,
    frequency_table,
    render_convergence,
    render_tables,
    tables_csv,
    theorem_check,
)
from unitindex.sweep import Histogram


@pytest.mark.parametrize(
    "count, total, text",
    [
        (573, 1000, "57.3"),
        (604, 100000, "0.604"),
        (1, 1, "100"),
        (0, 7, "0.000"),
        (9915, 100000, "9.92"),  # half-even on an exact tie: 9.915 -> 9.92
        (9925, 100000, "9.92"),  # 9.925 -> 9.92
        (1, 3, "33.3"),
        (2, 3, "66.7"),
    ],
)
def test_format_percent(count, total, text):
    assert format_percent(count, total) == text


def test_frequency_table_single_mass():
    t = frequency_table(Histogram(1, {1: 1}), top_k=5)
    assert t.rows[0] == (1, "100", 1)
    assert [r[1] for r in t.rows[1:]] == ["0.000"] * 4
    assert t.total == 1


def test_frequency_table_empty():
    with pytest.raises(ValueError):
        frequency_table(Histogram(2))


def test_percentages_sum_to_100_when_complete():
    h = Histogram(1, {1: 577, 2: 123, 3: 99, 7: 45, 11: 3})
    t = frequency_table(h, top_k=11)
    assert abs(sum(float(r[1]) for r in t.rows) - 100) < 0.5
    assert sum(float(r[1]) for r in frequency_table(h, top_k=2).rows) <= 100


def test_expectation_point_mass():
    r = expectation(Histogram(1, {1: 12345}), 1000)
    assert r.E == 1.0
    assert math.isclose(r.normalizer, math.log(1000) * math.log(math.log(1000)))


def test_expectation_formula():
    r = expectation(Histogram(1, {1: 2, 4: 1, 10: 1}), 10000)
    assert r.E == pytest.approx((2 + 4 + 10) / 4)
    # natural log gives 20.448 at m = 10000, the reference value
    assert r.normalizer == pytest.approx(20.448, abs=0.005)
    assert r.ratio == pytest.approx(r.E / r.normalizer)


def test_expectation_rejects_small_m():
    with pytest.raises(ValueError):
        expectation(Histogram(1, {1: 1}), 15)
    with pytest.raises(ValueError):
        expectation(Histogram(1), 1000)


def test_theorem_check():
    assert theorem_check(Histogram(4, {4: 1})).passed is False
    ok = theorem_check(Histogram(4, {1: 10, 2: 9, 3: 1}))
    assert ok.passed and ok.anomalies == [] and ok.multiples_of_4 == {}
    flagged = theorem_check(Histogram(4, {8: 1, 1: 3}))
    assert flagged.passed and flagged.anomalies == [8]
    assert "EMPIRICAL-ANOMALY q=8" in flagged.summary()


# reference case-1 percentages for q = 1..3 and totals at six ranges
REFERENCE_CASE1 = {
    10000: (57.3, 11.8, 9.91, 2249621),
    20000: (56.9, 12.0, 9.89, 8330759),
    40000: (56.9, 12.0, 9.89, 31140582),
    60000: (56.7, 12.1, 9.88, 67496484),
    80000: (56.7, 12.2, 9.86, 116576513),
    100000: (56.6, 12.2, 9.88, 178609439),
}


def _synthetic(m):
    *pcts, total = REFERENCE_CASE1[m]
    counts = {q: round(pct / 100 * total) for q, pct in enumerate(pcts, start=1)}
    counts[99] = total - sum(counts.values())
    return {1: Histogram(1, counts)}


def test_convergence_on_reference_case1_series():
    rows = convergence_report([(m, _synthetic(m)) for m in REFERENCE_CASE1], cutoff=3)
    q1 = next(r for r in rows if r.q == 1)
    assert q1.ms == tuple(sorted(REFERENCE_CASE1))
    # counts are rounded to whole pairs, so the drift is only approximately 0.7 pp
    assert q1.spread == pytest.approx(0.007, abs=1e-5)
    assert q1.max_step == pytest.approx(0.004, abs=1e-5)


def test_convergence_identical_and_errors():
    h = {1: Histogram(1, {1: 3, 2: 1}), 4: Histogram(4, {1: 1})}
    rows = convergence_report([(100, h), (200, h)], cutoff=4)
    assert all(r.max_step == 0 and r.spread == 0 for r in rows)
    assert len(rows) == 8
    with pytest.raises(ValueError):
        convergence_report([(100, h)])
    with pytest.raises(ValueError):
        convergence_report([(100, h), (200, {1: h[1]})])
    with pytest.raises(ValueError):
        convergence_report([(100, h), (200, {1: Histogram(2), 4: h[4]})])
    assert render_convergence(rows).splitlines()[0] == "case,q,m,percent,max_step_pp,spread_pp"


def test_render_tables_layout():
    hs = {j: Histogram(j, {1: 3, 2: 1}) if j in (1, 4) else Histogram(j) for j in (1, 2, 3, 4)}
    text = render_tables([(1000, hs), (2000, hs)], top_k=4)
    assert "N(eps)=+1, (d/p)=+1" in text and "N(eps)=-1, (d/p)=-1" in text
    assert "N(eps)=+1, (d/p)=-1" not in text
    line1 = next(line for line in text.splitlines() if line.strip().startswith("1 |"))
    assert [c.strip() for c in line1.split("|")[1:]] == ["75.0", "75.0"]
    csv = tables_csv([(1000, hs)], top_k=2).splitlines()
    assert csv[0] == "case,m,q,percent,count,total"
    assert csv[1] == "1,1000,1,75.0,3,4"
