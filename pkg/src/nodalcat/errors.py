"""Exception types shared across the engine.

The engine never guesses: every situation the calculus cannot decide is a
distinct error so callers (and the CLI exit-code mapping) can tell a wrong
input from an honest "outside the established range".
"""

from __future__ import annotations


class NodalcatError(Exception):
    """Base class for all engine errors."""


class ParityMismatch(NodalcatError):
    """A spinor sheaf was used on a quadric of the wrong parity."""


class UnsupportedPair(NodalcatError):
    """A Hom pair outside the range the sheaf recursions can reach.

    Raised instead of extrapolating; the established values never license a
    guess for these pairs.
    """


class IndeterminateHom(NodalcatError):
    """A long-exact-sequence degree whose bounding maps are not forced.

    Carries the set of degrees that could not be decided.  An indeterminate
    outcome is always surfaced as this exception, never approximated.
    """

    def __init__(self, degrees, message=""):
        self.degrees = tuple(sorted(degrees))
        text = f"indeterminate degrees {list(self.degrees)}"
        if message:
            text += f" ({message})"
        super().__init__(text)


class UnknownGenerator(NodalcatError):
    """An object expression mentions a generator the context does not know."""


class NotExceptional(NodalcatError):
    """Mutation was requested through an object that is not exceptional."""


class RuleNotApplicable(NodalcatError):
    """A functor-chain rewrite rule does not fire on the given object."""
