"""Exception types shared across the toolkit."""


class OnePassError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(OnePassError):
    """Bad input: out-of-range symbols, malformed parameters, impossible requests."""


class StreamLengthError(ValidationError):
    """The input source yielded fewer or more symbols than declared."""


class CorruptionError(OnePassError):
    """An encoded stream or block payload cannot be decoded consistently.

    ``record_index`` identifies the offending block record when the error
    surfaces while walking a container stream; it is None for standalone
    payload failures.
    """

    def __init__(self, message, record_index=None):
        if record_index is not None:
            message = f"record {record_index}: {message}"
        super().__init__(message)
        self.record_index = record_index
