"""Check rows and run reports with text and JSON emitters."""

import json
from dataclasses import dataclass, field
from typing import Any, Literal, Optional

from .exceptions import CheckFailure

Status = Literal["OK", "FAIL"]


@dataclass(frozen=True, slots=True)
class CheckRow:
    """
    One line of a report: a named check at one grade (or none) with both sides.

    Attributes
    ----------
    check : str
        Check name, optionally with a ':label' suffix.
    grade : int | None
        Grade the row refers to, None for grade-free checks.
    lhs, rhs : str
        Printed values of both sides (usually dimensions).
    status : str
        "OK" or "FAIL".
    """

    check: str
    grade: Optional[int]
    lhs: str
    rhs: str
    status: Status

    @classmethod
    def compare(cls, check: str, grade: Optional[int], lhs: Any, rhs: Any, ok: Optional[bool] = None) -> "CheckRow":
        """Build a row whose status is lhs == rhs unless ok is given."""
        passed = (lhs == rhs) if ok is None else ok
        return cls(check, grade, _text(lhs), _text(rhs), "OK" if passed else "FAIL")

    @property
    def ok(self) -> bool:
        """True if the row passed."""
        return self.status == "OK"

    def format(self) -> str:
        """Stable one-line form: check=<name> grade=<n|-> lhs=<x> rhs=<y> status=OK|FAIL."""
        grade = "-" if self.grade is None else str(self.grade)
        return f"check={self.check} grade={grade} lhs={self.lhs} rhs={self.rhs} status={self.status}"

    def toJSON(self) -> dict[str, Any]:
        """
        Convert the row to a JSON-serializable dictionary.

        Returns
        -------
        dict[str, Any]
            Dictionary with check, grade, lhs, rhs, status.
        """
        return {"check": self.check, "grade": self.grade, "lhs": self.lhs, "rhs": self.rhs, "status": self.status}


def _text(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ",".join(_text(v) for v in value)
    return "".join(str(value).split())


def raise_first_failure(rows: list[CheckRow]) -> None:
    """
    Raise CheckFailure for the first failing row, if any.

    Raises
    ------
    CheckFailure
        Carrying the row's check, grade and both sides.
    """
    for row in rows:
        if not row.ok:
            raise CheckFailure(row.check, row.grade, row.lhs, row.rhs)


@dataclass
class Report:
    """
    Result of running a scenario.

    Attributes
    ----------
    version : str
        Engine version.
    scenario_hash : str
        SHA-256 of the scenario text.
    max_weight : int
        Cutoff W used.
    rows : list[CheckRow]
        Rows in execution order.
    timings : dict[str, float]
        Seconds spent per check entry; excluded from the deterministic sections.
    """

    version: str
    scenario_hash: str
    max_weight: int
    rows: list[CheckRow] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def extend(self, rows: list[CheckRow]) -> None:
        """Append rows."""
        self.rows.extend(rows)

    @property
    def passed(self) -> int:
        """Number of passing rows."""
        return sum(1 for row in self.rows if row.ok)

    @property
    def failed(self) -> int:
        """Number of failing rows."""
        return sum(1 for row in self.rows if not row.ok)

    @property
    def ok(self) -> bool:
        """True if no row failed."""
        return self.failed == 0

    def summary(self) -> str:
        """One-line summary."""
        verdict = "PASS" if self.ok else "FAIL"
        return f"summary: {self.passed} ok, {self.failed} failed, max_weight={self.max_weight}: {verdict}"

    def to_text(self) -> str:
        """Header, one line per row and the summary line."""
        lines = [f"voalab {self.version} scenario={self.scenario_hash[:16]} max_weight={self.max_weight}"]
        lines.extend(row.format() for row in self.rows)
        lines.append(self.summary())
        return "\n".join(lines) + "\n"

    def toJSON(self) -> dict[str, Any]:
        """
        Convert the report to a JSON-serializable dictionary.

        The "timings" entry is the only non-deterministic section.

        Returns
        -------
        dict[str, Any]
            Dictionary with version, scenario_hash, max_weight, rows, summary and timings.
        """
        return {
            "version": self.version,
            "scenario_hash": self.scenario_hash,
            "max_weight": self.max_weight,
            "rows": [row.toJSON() for row in self.rows],
            "summary": {"ok": self.passed, "failed": self.failed, "status": "PASS" if self.ok else "FAIL"},
            "timings": {key: round(value, 6) for key, value in self.timings.items()},
        }

    def to_json(self) -> str:
        """Serialize with sorted keys."""
        return json.dumps(self.toJSON(), indent=2, sort_keys=True) + "\n"
