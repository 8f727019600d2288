class HypercoreError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(HypercoreError, ValueError):
    """A k, g, p or generator parameter is out of range."""


class FormatError(HypercoreError, ValueError):
    """An input stream could not be read as a hypergraph."""


class InvariantError(HypercoreError, RuntimeError):
    """An internal consistency check failed (pruning soundness, iteration bound, ...)."""
