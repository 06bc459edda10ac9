"""Error types shared across the package.

Everything raised on purpose derives from PrxError so callers (and the CLI)
can distinguish "the input is beyond desk scale / malformed" from genuine bugs.
"""

from __future__ import annotations


class PrxError(Exception):
    """Base class for all errors raised deliberately by this package."""


class ParseError(PrxError):
    """Raised when an expression string does not conform to the grammar.

    Carries the 0-based ``position`` of the offending character.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class StateCapExceeded(PrxError):
    """An automaton construction would exceed the configured state cap.

    The certainty-semantics problems are exponential by nature; this error is
    the package failing loudly instead of thrashing.
    """


class CountCapExceeded(PrxError):
    """An enumeration (valuations, domain words, candidate witnesses) would
    exceed its configured cap."""


class DomainNotFinite(PrxError):
    """A finite variable domain was required but the domain is infinite.

    In particular the possibility semantics over an infinite domain is not
    regular in general, so it is rejected with this error rather than
    approximated.
    """


class NotSimple(PrxError):
    """An operation restricted to simple expressions (each variable occurring
    at most once) was called on a non-simple expression."""


class PreconditionViolated(PrxError):
    """A fast-path algorithm was invoked outside its supported class
    (e.g. star-height 0 required)."""
