"""Exception hierarchy shared by all chairsearch components."""


class ChairSearchError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class InvalidInputError(ChairSearchError):
    code = "invalid_input"


class NotFoundError(ChairSearchError):
    code = "not_found"


class ChecksumMismatchError(ChairSearchError):
    code = "checksum_mismatch"


class VersionMismatchError(ChairSearchError):
    code = "version_mismatch"


class EmptyIndexError(ChairSearchError):
    code = "empty_index"


class DimensionMismatchError(ChairSearchError):
    code = "dimension_mismatch"


class ModeViolationError(ChairSearchError):
    code = "mode_violation"


class QueryInFlightError(ChairSearchError):
    code = "query_in_flight"


class BudgetExceededError(ChairSearchError):
    code = "budget_exceeded"


class SelectionStateError(ChairSearchError):
    """Select called with no query awaiting selection, or twice for one query."""

    code = "no_pending_selection"


class SessionTerminalError(ChairSearchError):
    code = "session_terminal"
