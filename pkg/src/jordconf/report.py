"""Verification reports: per-instance residual checks with deterministic output."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA_VERSION = "1.0"


@dataclass
class Entry:
    check_id: str
    instance: str
    status: str
    residual: Optional[str] = None

    def as_dict(self) -> Dict[str, Any]:
        out = {"check_id": self.check_id, "instance": self.instance, "status": self.status}
        if self.residual is not None:
            out["residual"] = self.residual
        return out


@dataclass
class VerificationReport:
    suite: str
    config: Dict[str, Any] = field(default_factory=dict)
    entries: List[Entry] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    wall_time: Optional[float] = None

    def check(self, check_id: str, instance: str, residual: Any) -> bool:
        """Record a residual; zero (falsy) residuals pass."""
        ok = not residual
        self.entries.append(Entry(check_id, instance, "pass" if ok else "fail",
                                  None if ok else str(residual)))
        return ok

    def record(self, check_id: str, instance: str, ok: bool, detail: Optional[str] = None) -> bool:
        self.entries.append(Entry(check_id, instance, "pass" if ok else "fail",
                                  None if ok else (detail or "check failed")))
        return ok

    def extend(self, other: "VerificationReport") -> None:
        self.entries.extend(other.entries)
        self.notes.extend(other.notes)

    def note(self, text: str) -> None:
        self.notes.append(text)

    @property
    def summary(self) -> Dict[str, int]:
        fails = sum(1 for e in self.entries if e.status == "fail")
        return {"total": len(self.entries), "pass": len(self.entries) - fails, "fail": fails}

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    def failures(self) -> List[Entry]:
        return [e for e in self.entries if e.status == "fail"]

    def sorted_entries(self) -> List[Entry]:
        # stable: check ids sorted, instance order as generated within a check
        return sorted(self.entries, key=lambda e: e.check_id)

    def as_dict(self, timing: bool = False) -> Dict[str, Any]:
        out: Dict[str, Any] = {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "config": self.config,
            "summary": self.summary,
            "entries": [e.as_dict() for e in self.sorted_entries()],
            "notes": list(self.notes),
        }
        if timing and self.wall_time is not None:
            out["wall_time_s"] = round(self.wall_time, 3)
        return out


def report_emit(report: VerificationReport, fmt: str = "json", timing: bool = False) -> str:
    """Render a report as schema-stable JSON or a human-readable text summary."""
    if fmt == "json":
        return json.dumps(report.as_dict(timing), indent=2, sort_keys=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    s = report.summary
    lines = [f"suite: {report.suite}"]
    if report.config:
        lines.append("config: " + ", ".join(f"{k}={v}" for k, v in sorted(report.config.items())))
    counts: Dict[str, List[int]] = {}
    for e in report.entries:
        c = counts.setdefault(e.check_id, [0, 0])
        c[0 if e.status == "pass" else 1] += 1
    for cid in sorted(counts):
        ok, bad = counts[cid]
        lines.append(f"  {'PASS' if not bad else 'FAIL'} {cid}: {ok} pass, {bad} fail")
    for e in report.sorted_entries():
        if e.status == "fail":
            lines.append(f"  fail {e.check_id} [{e.instance}]: {e.residual}")
    for n in report.notes:
        lines.append(f"  note: {n}")
    lines.append(f"summary: total={s['total']} pass={s['pass']} fail={s['fail']}")
    if timing and report.wall_time is not None:
        lines.append(f"wall time: {report.wall_time:.3f}s")
    return "\n".join(lines) + "\n"
