"""
Mahler Kernels Errors

This module defines the exception hierarchy shared by every numerical
routine and the command-line front end. Each exception carries the process
exit code the CLI reports for it.
"""

from typing import Optional

# Process exit codes
EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NON_CONVERGENCE = 2
EXIT_VERIFICATION = 3


class MahlerKernelsError(Exception):
    """Base class for all package errors"""

    exit_code = EXIT_VALIDATION


class ValidationError(MahlerKernelsError, ValueError):
    """Exception raised for invalid parameters, regions, grids or configs"""

    exit_code = EXIT_VALIDATION


class DomainError(ValidationError):
    """Exception raised when an argument lies outside an operation's domain"""

    pass


class DegeneratePolynomialError(ValidationError):
    """Exception raised for a numerically vanishing leading coefficient"""

    pass


class ConvergenceError(MahlerKernelsError, ArithmeticError):
    """Exception raised when a refinement fails to reach its tolerance"""

    exit_code = EXIT_NON_CONVERGENCE

    def __init__(
        self,
        message: str,
        achieved_error: Optional[float] = None,
        levels: Optional[int] = None,
    ):
        """
        Initialize convergence error.

        Args:
            message: Human readable description
            achieved_error: Last estimated absolute error
            levels: Number of refinement levels used
        """
        if achieved_error is not None:
            message = f"{message} (achieved error {achieved_error:.3e})"
        super().__init__(message)
        self.achieved_error = achieved_error
        self.levels = levels


class VerificationError(MahlerKernelsError):
    """Exception raised when an identity check of the verify suite fails"""

    exit_code = EXIT_VERIFICATION
