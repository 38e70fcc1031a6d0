#!/usr/bin/env python3
"""
Exception hierarchy for the Nielsen zeta calculator
Each error carries the exit code the CLI reports for it
"""

from typing import Optional

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VERIFICATION_MISMATCH = 1
EXIT_PARSE_ERROR = 2
EXIT_INVARIANT_VIOLATION = 3
EXIT_FIT_FAILURE = 4
EXIT_RECONSTRUCTION_FAILURE = 5


class ZetaError(Exception):
    """Base class for all calculator errors"""
    exit_code = EXIT_FAILURE


class ConfigError(ZetaError):
    exit_code = EXIT_PARSE_ERROR


class SeriesError(ZetaError):
    """Power series precondition failed (constant term, order)"""


class RadicalError(ZetaError):
    """Closed-form expression could not be built or expanded"""


class DescriptorError(ZetaError):
    """A map descriptor violates one of its invariants"""
    exit_code = EXIT_INVARIANT_VIOLATION

    def __init__(self, message: str, rule: Optional[str] = None):
        super().__init__(message)
        self.rule = rule

    def __str__(self) -> str:
        message = super().__str__()
        if self.rule:
            return f"[{self.rule}] {message}"
        return message


class DegenerateIterateError(DescriptorError):
    """det(A^n - I) vanished for a torus map"""


class ReconstructionError(ZetaError):
    exit_code = EXIT_RECONSTRUCTION_FAILURE


class UnsupportedOperationError(ZetaError):
    pass


class ResourceGuardError(ZetaError):
    exit_code = EXIT_PARSE_ERROR


class ExpansionRangeError(ZetaError):
    pass


class FitError(ZetaError):
    exit_code = EXIT_FIT_FAILURE


class DocumentError(ZetaError):
    """Descriptor or sample document could not be parsed"""
    exit_code = EXIT_PARSE_ERROR

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        super().__init__(message)
        self.path = path
        self.line = line

    def __str__(self) -> str:
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.path:
            where.append(f"field '{self.path}'")
        message = super().__str__()
        if where:
            return f"{', '.join(where)}: {message}"
        return message
