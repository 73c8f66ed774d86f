"""Exception types shared across the package.

Every error that can abort a pipeline stage carries enough context (stage
name, offending valuations or precisions) for the report layer to print a
useful diagnostic instead of a bare traceback.
"""


class QuarticRedError(Exception):
    """Base class for all package errors."""


class FieldConstructionError(QuarticRedError):
    """Invalid tower data: p even or composite, reducible unramified polynomial,
    non-Eisenstein ramified polynomial."""


class ZeroAtPrecision(QuarticRedError):
    """Division or inversion of an element indistinguishable from zero.

    Carries the absolute precision at which the element vanished.
    """

    def __init__(self, precision, message=None):
        self.precision = precision
        super().__init__(message or f"division by (numerical) zero at precision {precision}")


class HenselObstruction(QuarticRedError):
    """Residue root is not simple enough for the requested lift.

    ``derivative_valuation`` is v(f'(r0)), so callers can shift or rescale.
    """

    def __init__(self, derivative_valuation, message=None):
        self.derivative_valuation = derivative_valuation
        super().__init__(message or
                         f"Hensel obstruction: v(f'(r0)) = {derivative_valuation}")


class PrecisionExhausted(QuarticRedError):
    """A computation ran out of significant digits before reaching a verdict."""


class ExtensionNeeded(QuarticRedError):
    """An operation requires enlarging the field.

    kind is "ramified-sqrt" (adjoin a square root of the uniformizer) or
    "unramified-double" (double the residue degree).
    """

    def __init__(self, kind, message=None):
        self.kind = kind
        super().__init__(message or f"field extension needed: {kind}")


class UnstableElimination(QuarticRedError):
    """Resultant requested with a zero-at-precision leading coefficient."""


class DegenerateFrame(QuarticRedError):
    """Aronhold frame normalization hit a singular configuration
    (concurrent lines, singular lambda/eta system)."""


class NotBitangent(QuarticRedError):
    """A line claimed to be a bitangent fails the perfect-square test."""


class StageError(QuarticRedError):
    """Pipeline stage failure with a stage tag and a remediation hint."""

    def __init__(self, stage, message, hint=None):
        self.stage = stage
        self.hint = hint
        text = f"[{stage}] {message}"
        if hint:
            text += f" (hint: {hint})"
        super().__init__(text)
