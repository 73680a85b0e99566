class GeodexError(Exception):
    """Base class for errors raised by geodex."""


class DigraphFormatError(GeodexError, ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


class NotExcessOne(GeodexError):
    """The digraph is not diregular, k-geodetic and of order M(d,k)+1."""


class NotAutomorphism(GeodexError):
    """A map claimed to be an automorphism moves an arc to a non-arc."""


class CheckpointError(GeodexError):
    """Checkpoint file is corrupt or belongs to another search."""
