import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ouschauder.harness.report import (FIELDS, EstimateReport, all_passed, curves_csv, emit_report, failures,
                                       summary_lines, to_csv, to_json, verdict)

num = st.floats(-1e6, 1e6, allow_nan=False)


def rec(ident="a", lhs=1.0, rhs=2.0, err=0.0, check="upper", case=None):
    return EstimateReport(ident, "|x| <= y", lhs, rhs, err, 1e-3, 3.0, check, "s", case or {"t": 0.5}, {"x": [0.0]})


@given(num, num, st.floats(0, 1), st.floats(0, 10))
def test_verdict_matches_serialised_numbers(lhs, rhs, slack, err):
    r = EstimateReport("id", "", lhs, rhs, err, slack, 3.0)
    d = json.loads(to_json([r]))[0]
    assert d["pass"] == verdict(d["check"], d["lhs"], d["rhs"], d["slack_mult"], d["slack_add"])
    assert d["pass"] == (lhs <= rhs * (1 + slack) + 3 * err)


def test_fields_present_and_ordered():
    d = json.loads(to_json([rec()]))[0]
    assert list(d)[: len(FIELDS)] == list(FIELDS)
    assert to_csv([rec()]).splitlines()[0].startswith(",".join(FIELDS))


def test_non_finite_numbers_are_strings():
    d = json.loads(to_json([rec(lhs=math.inf, rhs=0.0, check="info"), rec(lhs=math.nan, check="finite")]))
    assert d[0]["lhs"] == "inf" and d[0]["ratio"] == "inf"
    assert d[1]["lhs"] == "nan" and d[1]["pass"] is False


def test_lower_and_info_checks():
    assert rec(lhs=3.0, rhs=2.0, check="lower").passed
    assert not rec(lhs=1.0, rhs=2.0, check="lower").passed
    info = rec(lhs=10.0, rhs=1.0, check="info")
    assert info.passed and not info.counted and all_passed([info])
    with pytest.raises(ValueError):
        rec(check="maybe")


def test_empty_and_failing_reports():
    assert to_json([]) == "[]\n" and all_passed([])
    bad = rec(lhs=3.0, rhs=1.0)
    assert not all_passed([rec(), bad]) and failures([rec(), bad]) == [bad]
    lines = summary_lines([rec(), bad, rec("b")])
    assert lines[0].startswith("FAIL") and lines[1].startswith("pass")


def test_json_is_deterministic(tmp_path):
    reports = [rec("b", case={"t": 2.0, "field": "f"}), rec("a", case={"field": "f", "t": 1.0})]
    a = emit_report(reports, tmp_path / "one", "both")
    b = emit_report(list(reports), tmp_path / "two", "both")
    for p, q in zip(a, b):
        assert p.read_bytes() == q.read_bytes()
    rows = curves_csv(reports).splitlines()
    assert rows[0] == "inequality_id,field,alpha,t,lhs,rhs" and rows[1].startswith("a,")
