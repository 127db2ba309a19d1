"""Structured PASS/FAIL/UNRESOLVED check reports with a stable text grammar."""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "PASS"
FAIL = "FAIL"
UNRESOLVED = "UNRESOLVED"


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""
    witness: str = ""

    def line(self) -> str:
        out = f"CHECK {self.name} {self.status}"
        if self.detail:
            out += f" | {self.detail}"
        if self.witness:
            out += f" | witness: {self.witness}"
        return out


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, status: str, detail: str = "", witness: str = "") -> Check:
        c = Check(name, status, detail, witness)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.status, c.detail, c.witness))

    def status_of(self, name: str) -> str:
        for c in self.checks:
            if c.name == name:
                return c.status
        raise KeyError(name)

    def count(self, status: str) -> int:
        return sum(c.status == status for c in self.checks)

    @property
    def ok(self) -> bool:
        """No check failed (unresolved checks do not count as failures)."""
        return self.count(FAIL) == 0

    @property
    def all_pass(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def text(self) -> str:
        lines = [f"REPORT {self.title}"]
        lines += [c.line() for c in self.checks]
        lines.append(
            f"SUMMARY pass={self.count(PASS)} fail={self.count(FAIL)} "
            f"unresolved={self.count(UNRESOLVED)}"
        )
        return "\n".join(lines)

    def __str__(self):
        return self.text()


def status(flag: bool) -> str:
    return PASS if flag else FAIL
