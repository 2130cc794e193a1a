# errors.py
from __future__ import annotations

from typing import Any


class QibamError(ValueError):
    """Base class of every error raised by the package."""


class ResourceLimitError(QibamError):
    """A request exceeds what the dense simulator can hold."""


class QubitCountOutOfRange(ResourceLimitError):
    pass


class QubitCeilingExceeded(ResourceLimitError):
    pass


class DimensionTooLarge(ResourceLimitError):
    pass


class InvalidQubitIndex(QibamError):
    pass


class DuplicateQubitIndex(QibamError):
    pass


class NonUnitaryMatrix(QibamError):
    pass


class NotNormalized(QibamError):
    pass


class ZeroShots(QibamError):
    pass


class QubitCountMismatch(QibamError):
    pass


class UnsupportedOpForSerialization(QibamError):
    """The op has no gate-level text form."""


class QasmError(QibamError):
    """Error in a cQASM text, located by its 1-based line number."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class QasmSyntaxError(QasmError):
    pass


class UnknownGate(QasmError):
    pass


class QubitOutOfRange(QasmError):
    pass


class MissingHeader(QasmError):
    pass


class InvalidBase(QibamError):
    def __init__(self, position: int, base: str) -> None:
        super().__init__(f"Invalid base {base!r} at position {position}")
        self.position = position
        self.base = base


class LengthMismatch(QibamError):
    pass


class PatternLongerThanReference(QibamError):
    pass


class LayoutInvalid(QibamError):
    pass


class GammaOutOfRange(QibamError):
    pass


class NoSolutions(QibamError):
    pass


class SolutionsExceedSpace(QibamError):
    pass


class QueryTooLong(QibamError):
    pass


class InvalidIterationPolicy(QibamError):
    pass


class MaxRoundsExceeded(QibamError):
    """The randomized search ran out of rounds without a verified match.

    `outcome` holds the best unverified candidate seen.
    """

    def __init__(self, message: str, outcome: Any) -> None:
        super().__init__(message)
        self.outcome = outcome


class InvalidParameters(QibamError):
    pass


class FastaError(QibamError):
    pass
