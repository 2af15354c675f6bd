"""Exceptions and the validation report shared by every module."""
from __future__ import annotations

from dataclasses import dataclass, field


class DirgridError(Exception):
    """Base class for errors raised by this package."""


class InvalidInput(DirgridError, ValueError):
    """An argument violates an operation's precondition."""


class Exhausted(DirgridError):
    """A bounded search ran out of budget before reaching an answer.

    This is distinct from a negative answer: nothing is claimed about
    existence.
    """

    def __init__(self, what: str = "search", spent: int | None = None):
        self.what = what
        self.spent = spent
        msg = f"{what}: budget exhausted"
        if spent is not None:
            msg += f" after {spent} steps"
        super().__init__(msg)


class Budget:
    """Step counter shared across the recursion of one search."""

    __slots__ = ("limit", "spent", "what")

    def __init__(self, limit: int | None, what: str = "search"):
        self.limit = limit
        self.spent = 0
        self.what = what

    def tick(self, n: int = 1) -> None:
        self.spent += n
        if self.limit is not None and self.spent > self.limit:
            raise Exhausted(self.what, self.limit)

    @classmethod
    def of(cls, budget: "int | Budget | None", what: str = "search") -> "Budget":
        if isinstance(budget, Budget):
            return budget
        return cls(budget, what)


@dataclass
class Report:
    """Outcome of a validator: ``ok`` plus one message per violated clause.

    Each violation is a ``(clause, detail)`` pair so tests can assert on the
    clause name without parsing prose.
    """

    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, clause: str, detail: str = "") -> None:
        self.violations.append((clause, detail))

    def clauses(self) -> set[str]:
        return {c for c, _ in self.violations}

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c, d in other.violations:
            self.violations.append((prefix + c, d))

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(f"{c}: {d}" if d else c for c, d in self.violations)
