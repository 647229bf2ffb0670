"""Exact symbolic toolkit for Legendrian curves in (2,3,5)-geometry."""

from .errors import DomainError
from .exact import RatFunc, parse, var

__all__ = ["DomainError", "RatFunc", "parse", "var"]
__version__ = "0.1.0"
