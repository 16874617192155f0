"""Shared exception types."""

from __future__ import annotations


class IfatunerError(Exception):
    """Base for library-specific failures."""


class InfeasibleTargetError(IfatunerError):
    """No positive LC pair can realize the requested series reactances."""


class ConvergenceError(IfatunerError):
    """An iterative solve ran out of iterations before meeting tolerance."""


class ConfigError(IfatunerError):
    """A configuration file is malformed or violates an invariant."""
