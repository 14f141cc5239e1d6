"""Verdicts, checks and diagnostic reports shared by every verifier.

A report is a flat list of checks; its verdict is the worst verdict among
them. Reports merge by concatenation and serialize to the
"markovia-report/1" JSON schema (see serialize.py).
"""

from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .errors import SchemaError

SCHEMA_VERSION = "markovia-report/1"


class Verdict(Enum):
    """Outcome of a check or report."""

    PASS = "pass"
    SUPPORTED = "supported"
    INCONCLUSIVE = "inconclusive"
    FAIL = "fail"
    REFUTED = "refuted"

    @property
    def severity(self) -> int:
        if self in (Verdict.PASS, Verdict.SUPPORTED):
            return 0
        if self is Verdict.INCONCLUSIVE:
            return 1
        return 2

    @property
    def exit_code(self) -> int:
        """CLI exit status: 0 pass, 2 failure, 3 inconclusive."""
        return {0: 0, 1: 3, 2: 2}[self.severity]

    @property
    def ok(self) -> bool:
        return self.severity == 0

    @classmethod
    def of(cls, ok: bool) -> "Verdict":
        return cls.PASS if ok else cls.FAIL

    @classmethod
    def worst(cls, verdicts: Iterable["Verdict"], default: "Verdict | None" = None) -> "Verdict":
        """Worst verdict by severity; the first one wins among equals."""
        best: Verdict | None = None
        for v in verdicts:
            if best is None or v.severity > best.severity:
                best = v
        if best is None:
            return default or cls.PASS
        return best


@dataclass
class Check:
    """One verified statement with its evidence."""

    name: str
    verdict: Verdict
    anchor: str = ""
    detail: str = ""
    witnesses: list[Any] = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)
    section: str = ""

    def __str__(self) -> str:
        return f"{self.name}: {self.verdict.value}"

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "name": self.name,
            "verdict": self.verdict.value,
            "anchor": self.anchor,
            "detail": self.detail,
            "witnesses": self.witnesses,
            "values": self.values,
        }
        if self.section:
            out["section"] = self.section
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Check":
        return cls(
            name=data["name"],
            verdict=Verdict(data["verdict"]),
            anchor=data.get("anchor", ""),
            detail=data.get("detail", ""),
            witnesses=list(data.get("witnesses", [])),
            values=dict(data.get("values", {})),
            section=data.get("section", ""),
        )


@dataclass
class DiagnosticReport:
    """Structured verdicts with witnesses, traces and tolerances."""

    name: str
    anchor: str = ""
    checks: list[Check] = field(default_factory=list)
    tolerance: float | None = None
    seed: int | None = None
    traces: dict[str, list[dict[str, Any]]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> Verdict:
        return Verdict.worst(c.verdict for c in self.checks)

    def add(
        self,
        name: str,
        verdict: Verdict | bool,
        anchor: str = "",
        detail: str = "",
        witnesses: list[Any] | None = None,
        **values: Any,
    ) -> Check:
        """Append a check and return it."""
        if isinstance(verdict, bool):
            verdict = Verdict.of(verdict)
        check = Check(
            name=name,
            verdict=verdict,
            anchor=anchor or self.anchor,
            detail=detail,
            witnesses=witnesses or [],
            values=values,
        )
        self.checks.append(check)
        return check

    def count(self, verdict: Verdict) -> int:
        return sum(1 for c in self.checks if c.verdict is verdict)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.verdict.severity == 2]

    def has_failures(self) -> bool:
        return bool(self.failures())

    def absorb(self, other: "DiagnosticReport") -> None:
        """Append another report's checks, traces and notes as a section."""
        for check in other.checks:
            self.checks.append(
                Check(
                    name=check.name,
                    verdict=check.verdict,
                    anchor=check.anchor,
                    detail=check.detail,
                    witnesses=check.witnesses,
                    values=check.values,
                    section=check.section or other.name,
                )
            )
        for key, rows in other.traces.items():
            self.traces[f"{other.name}/{key}" if key in self.traces else key] = rows
        self.notes.extend(other.notes)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema": SCHEMA_VERSION,
            "property": self.name,
            "anchor": self.anchor,
            "verdict": self.verdict.value,
            "tolerance": self.tolerance,
            "seed": self.seed,
            "checks": [c.to_dict() for c in self.checks],
            "traces": self.traces,
            "notes": self.notes,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any], source: str | None = None) -> "DiagnosticReport":
        schema = data.get("schema") if isinstance(data, dict) else None
        if schema != SCHEMA_VERSION:
            raise SchemaError(
                f"expected schema {SCHEMA_VERSION!r}, found {schema!r}", source
            )
        return cls(
            name=data["property"],
            anchor=data.get("anchor", ""),
            checks=[Check.from_dict(c) for c in data.get("checks", [])],
            tolerance=data.get("tolerance"),
            seed=data.get("seed"),
            traces={k: list(v) for k, v in data.get("traces", {}).items()},
            notes=list(data.get("notes", [])),
        )


def merge_reports(reports: list[DiagnosticReport]) -> DiagnosticReport:
    """Concatenate reports; the merged verdict is the worst constituent.

    A single report is returned unchanged.
    """
    if not reports:
        raise ValueError("nothing to merge")
    if len(reports) == 1:
        return reports[0]
    names = []
    for r in reports:
        if r.name not in names:
            names.append(r.name)
    seeds = {r.seed for r in reports}
    tols = {r.tolerance for r in reports}
    merged = DiagnosticReport(
        name="+".join(names),
        anchor="",
        seed=seeds.pop() if len(seeds) == 1 else None,
        tolerance=tols.pop() if len(tols) == 1 else None,
    )
    for r in reports:
        merged.absorb(r)
    return merged
