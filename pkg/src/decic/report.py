"""Verification reports: records, human/machine rendering, and parsing back."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

STATUSES = ("pass", "fail", "skipped")
KINDS = ("claimed", "derived", "info")
FORMAT_VERSION = 1


class ReportError(ValueError):
    pass


def exact(x) -> Any:
    """JSON-friendly exact form: integers stay ints, other scalars become strings."""
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    if isinstance(x, dict):
        return {str(k): exact(v) for k, v in x.items()}
    if isinstance(x, Fraction):
        return str(x)
    if type(x).__name__ == "mpz":
        return int(x)
    if type(x).__name__ == "mpq":
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


@dataclass
class CheckRecord:
    id: str
    status: str = "pass"
    values: dict[str, dict[str, Any]] = field(default_factory=dict)
    detail: str = ""
    seconds: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ReportError(f"unknown status {self.status!r}")

    def record(self, name: str, value, kind: str = "derived") -> None:
        if kind not in KINDS:
            raise ReportError(f"unknown value kind {kind!r}")
        self.values[name] = {"value": exact(value), "kind": kind}

    def claim(self, name: str, value, expected, fail_message: str | None = None) -> bool:
        """Record ``value`` and fail the check unless it equals ``expected``."""
        self.record(name, value, "claimed")
        self.values[name]["expected"] = exact(expected)
        ok = exact(value) == exact(expected)
        if not ok:
            self.fail(fail_message or f"{name}: got {exact(value)}, expected {exact(expected)}")
        return ok

    def fail(self, message: str) -> None:
        self.status = "fail"
        self.detail = message if not self.detail else f"{self.detail}; {message}"

    def note(self, message: str) -> None:
        self.detail = message if not self.detail else f"{self.detail}; {message}"

    def body(self) -> dict:
        return {"id": self.id, "status": self.status, "values": self.values, "detail": self.detail}


@dataclass
class VerificationReport:
    records: list[CheckRecord] = field(default_factory=list)
    config: dict[str, Any] = field(default_factory=dict)

    def add(self, rec: CheckRecord) -> None:
        if any(r.id == rec.id for r in self.records):
            raise ReportError(f"duplicate check id {rec.id!r}")
        self.records.append(rec)

    def get(self, check_id: str) -> CheckRecord:
        for r in self.records:
            if r.id == check_id:
                return r
        raise KeyError(check_id)

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    def exit_code(self) -> int:
        return 0 if self.passed else 1


def emit_report(report: VerificationReport, fmt: str = "human") -> bytes:
    if fmt == "machine":
        return emit_machine(report)
    if fmt == "human":
        return emit_human(report)
    raise ReportError(f"unknown report format {fmt!r}")


def emit_machine(report: VerificationReport) -> bytes:
    doc = {
        "format": "decic-report",
        "version": FORMAT_VERSION,
        "config": report.config,
        "checks": [r.body() for r in report.records],
        "timings": {r.id: round(r.seconds, 3) for r in report.records},
    }
    return (json.dumps(doc, indent=2, sort_keys=False) + "\n").encode()


def machine_body(data: bytes) -> dict:
    """The deterministic part of a machine report (everything except timings)."""
    doc = json.loads(data)
    doc.pop("timings", None)
    return doc


def parse_machine(data: bytes | str) -> VerificationReport:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ReportError(f"not a machine report: {exc}") from None
    if doc.get("format") != "decic-report":
        raise ReportError("not a machine report")
    timings = doc.get("timings", {})
    records = [
        CheckRecord(c["id"], c["status"], c["values"], c.get("detail", ""), float(timings.get(c["id"], 0.0)))
        for c in doc.get("checks", [])
    ]
    return VerificationReport(records, doc.get("config", {}))


def _summary(rec: CheckRecord, width: int = 72) -> str:
    parts = []
    for name, v in rec.values.items():
        if v["kind"] == "info":
            continue
        val = v["value"]
        s = json.dumps(val) if not isinstance(val, str) else val
        if len(s) > 28:
            s = s[:25] + "..."
        parts.append(f"{name}={s}")
    text = ", ".join(parts)
    return text if len(text) <= width else text[: width - 3] + "..."


def emit_human(report: VerificationReport) -> bytes:
    lines = ["decic verification report", ""]
    if report.records:
        idw = max(len("check"), *(len(r.id) for r in report.records))
        lines.append(f"{'check':<{idw}}  {'status':<7}  {'time':>8}  values")
        lines.append("-" * (idw + 28 + 40))
        for r in report.records:
            lines.append(f"{r.id:<{idw}}  {r.status:<7}  {r.seconds:>7.2f}s  {_summary(r)}")
            if r.detail:
                lines.append(f"{'':<{idw}}  {'':<7}  {'':>8}  note: {r.detail}")
        lines.append("")
        n_fail = sum(r.status == "fail" for r in report.records)
        n_skip = sum(r.status == "skipped" for r in report.records)
        lines.append(f"{len(report.records)} checks, {n_fail} failed, {n_skip} skipped")
    return ("\n".join(lines) + "\n").encode()
