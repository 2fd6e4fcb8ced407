import csv
import io
import json

import pytest

from qxfam import verify as V
from qxfam.errors import HypothesisViolated


def rows(report, outcome=None):
    return [p for p in report.points if outcome is None or p.outcome == outcome]


def test_spec_validation():
    with pytest.raises(ValueError):
        V.CheckSpec("L9.9").resolved()
    with pytest.raises(ValueError):
        V.CheckSpec("L3.2", mode="oracle").resolved()
    with pytest.raises(ValueError):
        V.CheckSpec("L3.2", {"m": [1]}).resolved()
    with pytest.raises(ValueError):
        V.CheckSpec("L3.2", {"q": []}).resolved()
    spec = V.CheckSpec("L3.2", {"q": [3, 2, 3]}).resolved()
    assert spec.grid["q"] == [2, 3] and spec.mode == "inequality"


def test_family_sizes_oracle():
    report = V.run_check(V.CheckSpec("L4.3"))
    h1 = next(p for p in report.points if p.params["family"] == "H1")
    assert (h1.outcome, h1.lhs, h1.rhs) == ("pass", 92, 92)
    assert h1.enumerated > 0
    assert not report.failed and report.summary()["pass"] == 9


def test_h3_ordering_grid():
    report = V.run_check(V.CheckSpec("L3.2", {"q": [2, 3], "n": [3], "t": [1], "l": [4, 5]}))
    assert len(report.points) == 4 and all(p.outcome == "pass" for p in report.points)
    assert all(p.lhs > p.rhs for p in report.points)


def test_degenerations_identity():
    report = V.run_check(V.CheckSpec("R1.1"))
    assert [p.outcome for p in report.points] == ["pass"] * 4
    assert all(p.relation == "set==" for p in report.points)


def test_hypothesis_skips_name_the_reason():
    report = V.run_check(V.CheckSpec("L3.3", {"q": [2], "n": [3], "t": [1], "l": [3, 6]}))
    assert report.all_skipped
    reasons = {p.reason for p in report.points}
    assert any("n+t+2" in r for r in reasons) and any("excluded pair" in r for r in reasons)


def test_budget_marks_skip():
    report = V.run_check(V.CheckSpec("L4.3"), budget=10)
    assert report.all_skipped and not report.failed
    assert all("budget" in p.reason for p in report.points)


def test_failures_carry_both_sides(monkeypatch):
    monkeypatch.setattr(V.qc, "h1_size", lambda *a: 93)
    report = V.run_check(V.CheckSpec("L4.3"))
    bad = rows(report, "fail")
    assert len(bad) == 1 and bad[0].params["family"] == "H1"
    assert (bad[0].lhs, bad[0].rhs) == (92, 93)


def test_parallel_matches_serial():
    spec = V.CheckSpec("L4.2", {"q": [2], "n": [2, 3], "l": [2]})
    one = V.to_json([V.run_check(spec)])
    two = V.to_json([V.run_check(spec, threads=2)])
    assert one == two


def test_replay_is_consistent():
    report = V.run_check(V.CheckSpec("L4.1", {"q": [2], "n": [2], "l": [2]}), replay=True)
    assert not report.failed


def test_theorem_compare_examples():
    rep = V.theorem13_compare({"q": [3], "n": [3], "t": [1], "l": [6]})
    first = rep.points[0]
    assert first.outcome == "pass" and first.check == "max is H3:k=0"
    rep = V.theorem13_compare({"q": [2], "n": [4], "t": [1], "l": [8, 9]})
    assert "excluded pair" in rep.points[0].reason
    assert rep.points[1].check == "max is H1" and not rep.failed
    rep = V.theorem13_compare({"q": [3], "n": [4], "t": [1], "l": [7]})
    assert rep.points[0].outcome == "pass" and "H1" in rep.points[0].note
    rep = V.theorem13_compare({"q": [2], "n": [4], "t": [2], "l": [10]})
    assert any(p.check.startswith("tie") and p.outcome == "pass" for p in rep.points)
    with pytest.raises(HypothesisViolated):
        V.theorem13_compare({"q": [2], "n": [3], "t": [1], "l": [6]}, strict=True)


def test_serializations():
    reports = [V.run_check(V.CheckSpec("L3.2", {"q": [2], "n": [3], "t": [1], "l": [4]}))]
    rec = json.loads(V.to_json(reports))
    assert rec["spec"]["lemma"] == "L3.2" and rec["summary"]["pass"] == 1
    assert rec["points"][0]["lhs"] == "106"
    assert "elapsed_ms" not in rec["points"][0]
    assert "elapsed_ms" in json.loads(V.to_json(reports, timing=True))["points"][0]
    table = list(csv.DictReader(io.StringIO(V.to_csv(reports))))
    assert table[0]["params"] == "q=2;n=3;t=1;l=4" and table[0]["outcome"] == "pass"
    assert V.to_text(reports).startswith("PASS L3.2")


def test_default_suite_lists_every_lemma():
    ids = [s.lemma_id for s in V.default_suite()]
    assert sorted(ids) == sorted(V.LEMMAS)
