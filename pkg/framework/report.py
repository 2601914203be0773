from __future__ import annotations
from dataclasses import dataclass, field
from typing import Any, Iterable
import json
import logging
from .errors import _plain
from .event import EventBus, CheckEvent, ViolationEvent

logger = logging.getLogger(__name__)

SCHEMA = "partial-actions/1"


@dataclass(frozen=True)
class Violation:
    check: str
    morphisms: tuple[str, ...] = ()
    atom: str | None = None
    detail: str = ""

    def to_dict(self):
        return {
            "check": self.check,
            "morphisms": list(self.morphisms),
            "atom": self.atom,
            "detail": self.detail,
        }

    def __str__(self):
        where = ", ".join(self.morphisms)
        s = f"{self.check}"
        if where:
            s += f" at ({where})"
        if self.atom is not None:
            s += f" atom {self.atom}"
        if self.detail:
            s += f": {self.detail}"
        return s


@dataclass
class Report:
    """Outcome of a verification run.

    Checks are kept in the order they were first collected. By default each
    check keeps only its first witness in canonical order; `all_witnesses`
    keeps every one.
    """

    subject: str
    all_witnesses: bool = False
    checks: dict[str, bool] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)
    facts: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self):
        return all(self.checks.values())

    @property
    def first_violation(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def collect(self, check: str, witnesses: Iterable[Violation]) -> bool:
        self.checks.setdefault(check, True)
        for v in witnesses:
            self.checks[check] = False
            self.violations.append(v)
            logger.info("%s: %s", self.subject, v)
            EventBus.trigger_event(ViolationEvent(self.subject, v))
            if not self.all_witnesses:
                break
        return self.checks[check]

    def expect(self, check: str, passed: bool, detail: str = "", *morphisms: str):
        def witnesses():
            if not passed:
                yield Violation(check, morphisms, None, detail)

        return self.collect(check, witnesses())

    def failed(self, check: str) -> bool:
        return not self.checks.get(check, True)

    def violations_of(self, check: str) -> list[Violation]:
        return [v for v in self.violations if v.check == check]

    def merge(self, other: Report, prefix: str | None = None) -> Report:
        for name, passed in other.checks.items():
            key = f"{prefix}.{name}" if prefix else name
            self.checks[key] = self.checks.get(key, True) and passed
        for v in other.violations:
            if prefix:
                v = Violation(f"{prefix}.{v.check}", v.morphisms, v.atom, v.detail)
            self.violations.append(v)
        for k, value in other.facts.items():
            self.facts[f"{prefix}.{k}" if prefix else k] = value
        return self

    def publish(self):
        for name, passed in self.checks.items():
            EventBus.trigger_event(CheckEvent(self.subject, name, passed))

    def to_dict(self) -> dict[str, Any]:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checks": dict(self.checks),
            "violations": [v.to_dict() for v in self.violations],
            "facts": {k: _plain(v) for k, v in self.facts.items()},
        }

    def to_json(self, command: str) -> str:
        d = {"schema": SCHEMA, "command": command} | self.to_dict()
        return json.dumps(d, sort_keys=True, ensure_ascii=False, indent=2)

    def to_text(self) -> str:
        lines = [f"{self.subject}: {'pass' if self.ok else 'FAIL'}"]
        for name, passed in self.checks.items():
            lines.append(f"  [{'ok' if passed else 'xx'}] {name}")
        for v in self.violations:
            lines.append(f"  - {v}")
        for k, value in self.facts.items():
            lines.append(f"  {k}: {_text(value)}")
        return "\n".join(lines)


def _text(value: Any) -> str:
    plain = _plain(value)
    if isinstance(plain, (list, dict)):
        return json.dumps(plain, ensure_ascii=False, sort_keys=True)
    return str(plain)
