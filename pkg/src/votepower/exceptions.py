"""Exception types shared across the package.

Everything derives from :class:`VotepowerError` so callers (and the CLI)
can distinguish "your input is bad" from "an internal consistency check
failed".  The latter is :class:`VerificationFailed` and should never be
seen in normal use.
"""


class VotepowerError(Exception):
    """Base class for all package errors."""


class InvalidInput(VotepowerError):
    """Malformed or out-of-domain argument."""


class LengthMismatch(InvalidInput):
    """A bit vector's length does not match the function or measure."""


class IndexOutOfRange(InvalidInput):
    """A 1-based variable index is outside 1..n."""


class TooLarge(InvalidInput):
    """An exact enumeration would exceed the configured cap."""


class Unsupported(InvalidInput):
    """The operation is not defined for this representation or measure."""


class UnresolvedTie(VotepowerError):
    """A weighted vote summed to zero and no tie rule covers the input."""


class DegenerateMarginal(VotepowerError):
    """Conditioning on X_k = 0 or X_k = 1 hits a probability-zero event."""


class MalformedLP(InvalidInput):
    """Inconsistent dimensions or senses in a linear program."""


class NotMonotone(InvalidInput):
    """The function fails the monotonicity check."""


class NotAntisymmetric(InvalidInput):
    """The function fails the anti-symmetry (self-duality) check."""


class NotApplicable(VotepowerError):
    """The requested construction does not exist for this instance."""


class NotTransitive(InvalidInput):
    """The supplied permutation group is not transitive on 1..n."""


class NotInvariant(InvalidInput):
    """The function is not invariant under the supplied group."""


class BadSeedVector(InvalidInput):
    """The orbit seed must be a zero of f with more than n/2 ones."""


class HypothesisViolated(VotepowerError):
    """An instance does not satisfy the hypotheses of a bound."""


class OutOfRegime(InvalidInput):
    """Parameters lie outside the regime where the check is proved."""


class DegenerateStratum(VotepowerError):
    """A conditional Monte Carlo stratum received no samples."""


class InvalidParams(InvalidInput):
    """Tree parameters out of range."""


class VerificationFailed(VotepowerError):
    """An internal exact re-check failed; indicates a bug, not bad input."""
