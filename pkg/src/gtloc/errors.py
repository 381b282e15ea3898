"""Exception hierarchy shared by all gtloc modules."""


class GtlocError(Exception):
    """Base class for every error raised by gtloc."""


class DegenerateInput(GtlocError, ValueError):
    pass


class OutOfBounds(GtlocError, ValueError):
    pass


class BitWidthMismatch(GtlocError, ValueError):
    pass


class EmptyMap(GtlocError):
    pass


class UnknownId(GtlocError, KeyError):
    pass


class FormatError(GtlocError):
    """Map or report bytes do not follow the expected layout."""


class CorruptRecord(FormatError):
    """A record is framed correctly but its content violates an invariant."""


class LocalizationError(GtlocError):
    """Base for the three ways a localization request can fail."""

    reason = "failure"


class NoFeatures(LocalizationError):
    reason = "no_features"


class NoVotes(LocalizationError):
    reason = "no_votes"


class NoConsensus(LocalizationError):
    reason = "no_consensus"
