"""Exception types shared across the engine."""


class PyrofitError(Exception):
    """Base class for all engine errors."""


class MalformedRecord(PyrofitError):
    """A stream/track record could not be parsed.

    Carries the byte offset within the offending line and a reason string.
    """

    def __init__(self, reason: str, offset: int = 0):
        super().__init__(f"malformed record at byte {offset}: {reason}")
        self.offset = offset
        self.reason = reason


class DegenerateSkeleton(PyrofitError):
    """Not enough confident joints to normalize a pose."""


class InvalidJoint(PyrofitError):
    """A joint required by an operation is masked out."""


class InsufficientData(PyrofitError):
    """Too few valid angle pairs to compare two poses."""


class EmptyWindow(PyrofitError):
    """No demo frames fall inside the alignment window."""


class EmptyTrack(PyrofitError):
    """A demo track contains no usable frames."""


class OutOfOrderFrame(PyrofitError):
    """Frame timestamps must be strictly increasing within a session."""


class SessionClosed(PyrofitError):
    """Operation attempted on a closed session."""


class PhaseError(PyrofitError):
    """Firework phase transition attempted out of order."""


class StorageError(PyrofitError):
    """Summary store could not be read or written."""


class UnknownConfigKey(PyrofitError):
    """Configuration contained a key no config section defines."""

    def __init__(self, key: str):
        super().__init__(f"unknown config key: {key!r}")
        self.key = key
