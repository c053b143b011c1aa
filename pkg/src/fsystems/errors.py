"""Exception types shared across the package."""


class FSystemError(Exception):
    """Base class for all errors raised by this package."""


class UnknownSentenceError(FSystemError):
    """A sentence name was used that is not declared in the system."""

    def __init__(self, name: str):
        super().__init__(f"unknown sentence: {name!r}")
        self.name = name


class ParseError(FSystemError):
    """Malformed .fsys input. Carries 1-based line and column numbers."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class CeilingExceededError(FSystemError):
    """An exhaustive computation was refused because the instance exceeds
    the configured size ceiling (results beyond it would take too long to
    be useful interactively)."""

    def __init__(self, what: str, size: int, ceiling: int):
        super().__init__(f"{what}: instance size {size} exceeds ceiling {ceiling}")
        self.what = what
        self.size = size
        self.ceiling = ceiling
