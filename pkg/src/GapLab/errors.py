'''Exceptions and warnings raised by GapLab.'''

import GapLab.constants as cn # type: ignore


class GapLabError(Exception):
    """Base for all GapLab failures. Carries the CLI exit code."""
    exit_code = cn.EXIT_COMPUTATIONAL


class InvalidInputError(GapLabError, ValueError):
    """Structurally invalid input (bad parameters, invariant violations)."""
    exit_code = cn.EXIT_PRECONDITION


class SingularInputError(InvalidInputError):
    """Input lies on the excluded singular set of a closed-form inverse."""


class PreconditionError(InvalidInputError):
    """A documented precondition of an operation does not hold."""


class OutOfRangeError(GapLabError, ValueError):
    """An inverse map was asked for a value outside its attained region."""
    exit_code = cn.EXIT_PRECONDITION


class ComputationalError(GapLabError, RuntimeError):
    """A numerical procedure failed or a cross-check disagreed."""
    exit_code = cn.EXIT_COMPUTATIONAL


class GapLabWarning(UserWarning):
    """Non-fatal numerical diagnostics."""
