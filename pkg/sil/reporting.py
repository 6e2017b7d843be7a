"""
SIL — Reports and Verdicts

Three-valued verdicts, per-check reports with witnesses and an audit log,
and suite reports that bundle several checks into a verdict matrix.
Every report round-trips through plain JSON-compatible dicts.
"""

import time
from enum import Enum
from typing import Iterable, Optional


class Verdict(Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"
    INCONCLUSIVE = "INCONCLUSIVE"

    @staticmethod
    def combine(verdicts: Iterable["Verdict"]) -> "Verdict":
        """FAILS dominates INCONCLUSIVE, which dominates HOLDS."""
        seen = set(verdicts)
        if Verdict.FAILS in seen:
            return Verdict.FAILS
        if Verdict.INCONCLUSIVE in seen:
            return Verdict.INCONCLUSIVE
        return Verdict.HOLDS

    @staticmethod
    def of(flag: bool) -> "Verdict":
        return Verdict.HOLDS if flag else Verdict.FAILS


EXIT_CODES = {
    Verdict.HOLDS: 0,
    Verdict.FAILS: 1,
    Verdict.INCONCLUSIVE: 2,
}


class ReportFormatError(Exception):
    """Raised when a serialized report cannot be parsed back."""
    pass


class CheckReport:
    """
    The outcome of one bounded check.

    A FAILS report always carries at least one witness; a HOLDS report records
    the bound it swept in ``stats["bound"]``. ``stats["wall_time"]`` is kept
    out of equality so identical runs compare equal.
    """

    def __init__(
        self,
        name: str,
        verdict: Verdict = Verdict.HOLDS,
        witnesses: Optional[list] = None,
        stats: Optional[dict] = None,
        audit_log: Optional[list] = None,
        notes: Optional[list] = None,
    ):
        self.name = name
        self.verdict = verdict
        self.witnesses: list = list(witnesses or [])
        self.stats: dict = {"configurations": 0, "bound": None, "wall_time": 0.0}
        self.stats.update(stats or {})
        self.audit_log: list = list(audit_log or [])
        self.notes: list = list(notes or [])
        self._started = time.perf_counter()

    # -------------------------------------------------------------------------
    # Building
    # -------------------------------------------------------------------------

    def record(self, check: str, result: str, detail: str) -> None:
        """Append an audit entry. ``result`` is PASS, FAIL or SKIP."""
        self.audit_log.append({"check": check, "result": result, "detail": detail})

    def count(self, n: int = 1) -> None:
        self.stats["configurations"] += n

    def fail(self, witness: dict, detail: str) -> "CheckReport":
        self.verdict = Verdict.FAILS
        self.witnesses.append(witness)
        self.record(self.name, "FAIL", detail)
        return self

    def inconclusive(self, detail: str) -> "CheckReport":
        if self.verdict is not Verdict.FAILS:
            self.verdict = Verdict.INCONCLUSIVE
        self.notes.append(detail)
        self.record(self.name, "SKIP", detail)
        return self

    def absorb(self, other: "CheckReport") -> None:
        """Merge a sub-check into this report."""
        self.verdict = Verdict.combine([self.verdict, other.verdict])
        self.witnesses.extend(other.witnesses)
        self.audit_log.extend(other.audit_log)
        self.notes.extend(other.notes)
        self.stats["configurations"] += other.stats.get("configurations", 0)

    def finish(self, bound=None) -> "CheckReport":
        if bound is not None:
            self.stats["bound"] = bound
        self.stats["wall_time"] = round(time.perf_counter() - self._started, 6)
        if self.verdict is Verdict.HOLDS and not any(e["result"] == "PASS" for e in self.audit_log):
            self.record(self.name, "PASS", f"exhaustive at bound {self.stats['bound']}")
        return self

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    # -------------------------------------------------------------------------
    # Serialization
    # -------------------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "witnesses": self.witnesses,
            "stats": dict(self.stats),
            "audit_log": self.audit_log,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CheckReport":
        try:
            return cls(
                name=data["name"],
                verdict=Verdict(data["verdict"]),
                witnesses=data.get("witnesses", []),
                stats=data.get("stats", {}),
                audit_log=data.get("audit_log", []),
                notes=data.get("notes", []),
            )
        except (KeyError, ValueError) as e:
            raise ReportFormatError(f"Malformed check report: {e}")

    def _comparable(self) -> tuple:
        stats = {k: v for k, v in self.stats.items() if k != "wall_time"}
        return (self.name, self.verdict, self.witnesses, stats, self.audit_log, self.notes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CheckReport):
            return NotImplemented
        return self._comparable() == other._comparable()

    def __repr__(self) -> str:
        return f"<CheckReport {self.name} {self.verdict.value} witnesses={len(self.witnesses)}>"


class SuiteReport:
    """A bundle of check reports, e.g. a full axiom suite."""

    def __init__(self, name: str, reports: Optional[list] = None, context: Optional[dict] = None):
        self.name = name
        self.reports: list = list(reports or [])
        self.context: dict = dict(context or {})

    def add(self, report: CheckReport) -> None:
        self.reports.append(report)

    @property
    def verdict(self) -> Verdict:
        return Verdict.combine(r.verdict for r in self.reports)

    def matrix(self) -> dict:
        return {r.name: r.verdict.value for r in self.reports}

    def get(self, name: str) -> Optional[CheckReport]:
        for r in self.reports:
            if r.name == name:
                return r
        return None

    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "context": self.context,
            "reports": [r.to_dict() for r in self.reports],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SuiteReport":
        try:
            return cls(
                name=data["name"],
                reports=[CheckReport.from_dict(r) for r in data["reports"]],
                context=data.get("context", {}),
            )
        except KeyError as e:
            raise ReportFormatError(f"Malformed suite report: missing {e}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuiteReport):
            return NotImplemented
        return (self.name, self.context, self.reports) == (other.name, other.context, other.reports)

    def __repr__(self) -> str:
        return f"<SuiteReport {self.name} {self.verdict.value} checks={len(self.reports)}>"
