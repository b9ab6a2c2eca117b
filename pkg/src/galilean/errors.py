"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class GalileanError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(GalileanError):
    """Lexical or grammatical violation in statement source text.

    ``position`` is the 0-based character offset into the source;
    ``line`` and ``column`` are 1-based.
    """

    def __init__(self, message: str, source: str = "", position: int = 0):
        self.message = message
        self.source = source
        self.position = position
        self.line = source.count("\n", 0, position) + 1
        self.column = position - (source.rfind("\n", 0, position) + 1) + 1
        super().__init__(f"{self.line}:{self.column}: {message}")


class CycleError(GalileanError):
    def __init__(self, cycle: list[str]):
        self.cycle = list(cycle)
        super().__init__("auxiliary cycle " + "→".join(self.cycle))


class UnboundSymbol(GalileanError):
    """One or more symbols have no binding, auxiliary or operator declaration."""

    def __init__(self, symbols):
        self.symbols = tuple(sorted(set(symbols)))
        super().__init__("unbound symbol(s): " + ", ".join(self.symbols))


class AnnotationInvalid(GalileanError):
    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("invalid annotations: " + "; ".join(self.violations))


class ZeroVariables(GalileanError):
    """The statement grounds no variable concept, so I is undefined."""


class InvalidSpec(GalileanError):
    """A network description violates its constraints."""
