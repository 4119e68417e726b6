"""Exception taxonomy shared across the package.

The CLI maps these onto its exit-code contract: usage/parse problems
(SpecFormatError and argparse failures) exit 2, domain failures exit 1.
"""


class DualballError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(DualballError, ValueError):
    """Operands have inconsistent dimensions."""


class SpecFormatError(DualballError, ValueError):
    """A spec or polytope file violates its schema.

    Carries an optional location: either a JSON path into the document
    (semantic errors) or a line/column pair (syntactic errors).
    """

    def __init__(self, message, *, path=None, line=None, col=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}, column {col})"
        elif path:
            loc = f" (at {path})"
        super().__init__(message + loc)
        self.path = path
        self.line = line
        self.col = col


class OracleUndefinedError(DualballError, LookupError):
    """A table-backed seminorm was queried outside its domain."""


class IntegralityError(DualballError):
    """The oracle returned a non-integer forward difference on lattice points."""


class OracleError(DualballError):
    """The oracle failed a seminorm-axiom or integrality spot check."""


class PolarUndefinedError(DualballError, ValueError):
    """Polar requested for a polytope that is not full-dimensional with 0 interior."""


class LemmaChainError(DualballError):
    """The traced inequality chain was violated (implementation bug, never expected)."""


class ReconstructionIncompleteError(DualballError):
    """Raised only on request when a caller demands a complete reconstruction."""
