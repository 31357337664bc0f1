"""Structured pass/fail records shared by the verification routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class Record:
    claim: str
    paper_ref: str
    status: str
    counterexample: Optional[Any] = None
    detail: Optional[Any] = None

    def to_json(self) -> dict:
        out = {"claim": self.claim, "paper_ref": self.paper_ref, "status": self.status}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class Report:
    title: str = ""
    records: list[Record] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    def add(self, claim: str, ok: bool, ref: str = "", counterexample=None, detail=None) -> bool:
        self.records.append(
            Record(claim, ref, "pass" if ok else "fail", None if ok else counterexample, detail)
        )
        return ok

    def note(self, claim: str, ref: str = "", detail=None) -> None:
        """Informational entry that neither passes nor fails."""
        self.records.append(Record(claim, ref, "info", None, detail))

    def extend(self, other: "Report") -> None:
        self.records.extend(other.records)

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    def failures(self) -> list[Record]:
        return [r for r in self.records if r.status == "fail"]

    def count(self, status: str = "pass") -> int:
        return sum(1 for r in self.records if r.status == status)

    def summary(self) -> str:
        return f"{self.title}: {self.count('pass')} pass, {self.count('fail')} fail"

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "info": self.info,
            "records": [r.to_json() for r in self.records],
        }

    def __bool__(self) -> bool:
        return self.passed
