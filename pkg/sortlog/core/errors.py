# core/errors.py
from dataclasses import dataclass, field
from typing import Any, List


@dataclass(frozen=True)
class Violation:
    """One finding of a validator; validators return a list of these (empty = ok)."""
    kind: str
    message: str
    node: Any = field(default=None, compare=False)

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


class SortLogError(Exception):
    """Base class for every error raised by sortlog."""


class DuplicateSymbol(SortLogError):
    pass


class ArityMismatch(SortLogError):
    pass


class SortMismatchAtAtom(SortLogError):
    pass


class NewSortViolation(SortLogError):
    pass


class SortClash(SortLogError):
    pass


class CaptureViolation(SortLogError):
    pass


class MissingDomain(SortLogError):
    pass


class TupleOutOfDomain(SortLogError):
    pass


class SortViolation(SortLogError):
    pass


class BudgetExceeded(SortLogError):
    pass


class PreconditionViolation(SortLogError):
    pass


class AtomCapExceeded(SortLogError):
    pass


class ValidationError(SortLogError):
    """Raised when a validator found violations and a value cannot be built."""

    def __init__(self, violations: List[Violation], what: str = "value"):
        self.violations = list(violations)
        joined = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid {what}: {joined}")


class NotFound(SortLogError):
    """Countermodel search exhausted its bounds."""

    def __init__(self, bounds: Any, searched: int = 0, complete: bool = True):
        self.bounds = bounds
        self.searched = searched
        self.complete = complete
        stopped = "" if complete else ", stopped at the step cap"
        super().__init__(f"no countermodel within {bounds} ({searched} structures searched{stopped})")


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int
    line: int
    column: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError("span start after end")


class ParseError(SortLogError):
    KINDS = ("Lex", "Syntax", "Sort", "NewSort")

    def __init__(self, span: SourceSpan, kind: str, message: str):
        if kind not in self.KINDS:
            raise ValueError(f"unknown parse error kind {kind!r}")
        self.span = span
        self.kind = kind
        self.message = message
        super().__init__(f"{kind} error at line {span.line}, column {span.column}: {message}")

    def __reduce__(self):
        return (ParseError, (self.span, self.kind, self.message))


