"""Inequality records and their deterministic JSON / CSV serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

# check kinds: "upper"  lhs <= rhs (1 + slack_mult) + slack_add
#              "lower"  lhs >= rhs (a witness must exceed a threshold)
#              "finite" lhs is finite (reported constants without a stated bound)
#              "info"   recorded only, never counted
CHECKS = ("upper", "lower", "finite", "info")

FIELDS = ("inequality_id", "anchor", "lhs", "rhs", "ratio", "pass", "witness", "err_est", "ms")
EXTRA_FIELDS = ("suite", "case", "check", "slack_mult", "slack_add")


@dataclass
class EstimateReport:
    inequality_id: str
    anchor: str
    lhs: float
    rhs: float
    err_est: float
    slack_mult: float
    error_multiple: float
    check: str = "upper"
    suite: str = ""
    case: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)
    ms: float = 0.0

    def __post_init__(self):
        if self.check not in CHECKS:
            raise ValueError(f"unknown check kind {self.check!r}")

    @property
    def slack_add(self) -> float:
        return self.error_multiple * self.err_est

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs

    @property
    def passed(self) -> bool:
        return verdict(self.check, self.lhs, self.rhs, self.slack_mult, self.slack_add)

    @property
    def counted(self) -> bool:
        return self.check != "info"

    def as_dict(self) -> dict:
        return {
            "inequality_id": self.inequality_id,
            "anchor": self.anchor,
            "lhs": _num(self.lhs),
            "rhs": _num(self.rhs),
            "ratio": _num(self.ratio),
            "pass": self.passed,
            "witness": _clean(self.witness),
            "err_est": _num(self.err_est),
            "ms": _num(self.ms),
            "suite": self.suite,
            "case": _clean(self.case),
            "check": self.check,
            "slack_mult": _num(self.slack_mult),
            "slack_add": _num(self.slack_add),
        }


def verdict(check: str, lhs: float, rhs: float, slack_mult: float, slack_add: float) -> bool:
    """Pass flag recomputed from the recorded numbers."""
    if check == "upper":
        return bool(lhs <= rhs * (1.0 + slack_mult) + slack_add)
    if check == "lower":
        return bool(lhs >= rhs)
    if check == "finite":
        return bool(math.isfinite(lhs))
    return True


def _num(v):
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _clean(obj):
    """JSON-safe, deterministic copy (floats kept at full repr precision)."""
    if isinstance(obj, dict):
        return {str(k): _clean(obj[k]) for k in sorted(obj)}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return int(obj)
    try:
        return _num(obj)
    except (TypeError, ValueError):
        return str(obj)


def all_passed(reports) -> bool:
    return all(r.passed for r in reports if r.counted)


def failures(reports) -> list[EstimateReport]:
    return [r for r in reports if r.counted and not r.passed]


def to_json(reports) -> str:
    return json.dumps([r.as_dict() for r in reports], indent=1, sort_keys=False, allow_nan=False) + "\n"


def to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FIELDS + EXTRA_FIELDS)
    for r in reports:
        d = r.as_dict()
        row = []
        for k in FIELDS + EXTRA_FIELDS:
            v = d[k]
            row.append(json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
        w.writerow(row)
    return buf.getvalue()


def curves_csv(reports) -> str:
    """Plot-ready (t, lhs, rhs) rows for every time-indexed record."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("inequality_id", "field", "alpha", "t", "lhs", "rhs"))
    rows = []
    for r in reports:
        t = r.case.get("t")
        if t is None:
            continue
        rows.append((r.inequality_id, r.case.get("field", ""), r.case.get("alpha", ""), t, r.lhs, r.rhs))
    rows.sort(key=lambda row: (row[0], str(row[1]), str(row[2]), row[3]))
    for row in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def emit_report(reports, out_dir, fmt: str = "json", curves: bool = True, stem: str = "report") -> list[Path]:
    """Write the report files; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt in ("json", "both"):
        p = out / f"{stem}.json"
        p.write_text(to_json(reports))
        written.append(p)
    if fmt in ("csv", "both"):
        p = out / f"{stem}.csv"
        p.write_text(to_csv(reports))
        written.append(p)
    if curves:
        p = out / f"{stem}_curves.csv"
        p.write_text(curves_csv(reports))
        written.append(p)
    return written


def summary_lines(reports) -> list[str]:
    """One line per inequality id: counts and the worst ratio."""
    by_id: dict[str, list[EstimateReport]] = {}
    for r in reports:
        by_id.setdefault(r.inequality_id, []).append(r)
    lines = []
    for ident in sorted(by_id):
        group = by_id[ident]
        counted = [r for r in group if r.counted]
        bad = [r for r in counted if not r.passed]
        finite = [r.ratio for r in group if math.isfinite(r.ratio)]
        worst = max(finite) if finite else float("nan")
        status = "info" if not counted else ("FAIL" if bad else "pass")
        lines.append(f"{status:4s}  {ident:40s} {len(group):5d} records  {len(bad):4d} failed  max ratio {worst:.4g}")
    return lines
