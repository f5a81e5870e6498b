"""Exception hierarchy shared by every module of the toolkit."""

from __future__ import annotations


class TwHadError(Exception):
    """Base class for all toolkit errors."""


class InvalidArgument(TwHadError, ValueError):
    """An argument violates a documented precondition."""


class ValidationError(TwHadError):
    """A certificate failed validation.

    ``kind`` is a short machine-readable tag and ``witness`` carries the
    offending object (an edge, a vertex, a pair of branch sets, ...).
    """

    def __init__(self, kind: str, message: str, witness=None):
        super().__init__(message)
        self.kind = kind
        self.witness = witness


class ResourceLimit(TwHadError):
    """An exact oracle was asked to run beyond its configured cap."""


class ParseError(TwHadError, ValueError):
    """Malformed input text."""


class NoSeparatorError(TwHadError):
    """A separator oracle returned nothing for a set it was required to split."""

    def __init__(self, message: str, graph=None, X=None):
        super().__init__(message)
        self.graph = graph
        self.X = X


class OracleContractError(TwHadError):
    """A separator oracle returned a separation violating its contract."""


class StructuralError(TwHadError):
    """A constructive proof step met a configuration it cannot handle."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
