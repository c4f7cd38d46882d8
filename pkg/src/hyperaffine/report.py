"""Line-oriented check reports.

Every check renders as one line::

    PASS <identity> <detail>
    FAIL <identity> at <instance>

followed by a summary line ``summary: <passed> passed, <failed> failed``.
Line order is the order in which checks were added, which callers keep
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    instance: str | None = None
    payload: object = field(default=None, repr=False, compare=False)

    def line(self) -> str:
        if self.passed:
            return f"PASS {self.name}" + (f" {self.detail}" if self.detail else "")
        out = f"FAIL {self.name} at {self.instance}"
        return out + (f" {self.detail}" if self.detail else "")


@dataclass
class Report:
    title: str = ""
    header: list[str] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, name, passed, detail="", instance=None, payload=None) -> Check:
        c = Check(name, bool(passed), detail, instance, payload)
        self.checks.append(c)
        return c

    def extend(self, other: "Report") -> None:
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def get(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def verdict(self, prefix) -> bool:
        """True iff every check whose name starts with ``prefix`` passed."""
        hits = [c for c in self.checks if c.name == prefix or c.name.startswith(prefix + " ")]
        if not hits:
            raise KeyError(prefix)
        return all(c.passed for c in hits)

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def lines(self) -> list[str]:
        out = []
        if self.title:
            out.append(f"# {self.title}")
        out += [f"# {h}" for h in self.header]
        out += [c.line() for c in self.checks]
        out += self.notes
        npass = sum(c.passed for c in self.checks)
        out.append(f"summary: {npass} passed, {len(self.checks) - npass} failed")
        return out

    def render(self) -> str:
        return "\n".join(self.lines())
