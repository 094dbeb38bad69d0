"""Exception types and validation reports shared by every module."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, List, Optional


class TAError(Exception):
    """Base class for all errors raised by the package."""


class SortError(TAError):
    pass


class UnboundVariable(TAError):
    pass


class AmbiguousSymbol(TAError):
    pass


class MissingCtors(TAError):
    pass


class ResourceLimit(TAError):
    """A configured search budget was exhausted before an answer was found."""


class NotComparable(TAError):
    pass


class DirectednessFailure(TAError):
    pass


class GenericityFailure(TAError):
    pass


class UnknownFixture(TAError):
    pass


@dataclass(frozen=True)
class SourceSpan:
    file: str = "<input>"
    line: int = 1
    column: int = 1
    end_line: int = 1
    end_column: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class SpecError(TAError):
    """A diagnostic tied to a location in a ``.ta`` file."""

    def __init__(self, message: str, span: Optional[SourceSpan] = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        return f"{self.span}: {self.message}" if self.span else self.message


class ParseError(SpecError):
    pass


class ResolveError(SpecError):
    pass


class CheckError(SpecError):
    """Kernel checks failed on a parsed declaration; ``report`` holds the violations."""

    def __init__(self, message: str, span: Optional[SourceSpan] = None,
                 report: Optional["ValidationReport"] = None):
        super().__init__(message, span)
        self.report = report


@dataclass(frozen=True)
class Violation:
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


@dataclass
class ValidationReport:
    """An ordered list of violations. Empty means valid."""

    violations: List[Violation] = field(default_factory=list)

    def add(self, location: str, message: str) -> None:
        self.violations.append(Violation(location, message))

    def extend(self, other: "ValidationReport", prefix: Optional[str] = None) -> None:
        for v in other.violations:
            loc = f"{prefix}/{v.location}" if prefix else v.location
            self.violations.append(Violation(loc, v.message))

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        # truthy when there is something to report
        return bool(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self) -> Iterator[Violation]:
        return iter(self.violations)

    def __str__(self) -> str:
        return "\n".join(str(v) for v in self.violations)
