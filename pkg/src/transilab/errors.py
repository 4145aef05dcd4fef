"""Exception types shared across the package."""


class TransilabError(Exception):
    """Base class for all package errors."""


class DegreeSamplingError(TransilabError):
    """Degree sequence cannot be produced for the requested bounds."""


class NonGraphicalSequenceError(TransilabError):
    """Degree sequence admits no simple graph."""


class GenerationError(TransilabError):
    """A randomized construction exhausted its retry budget."""


class AssignmentError(TransilabError):
    """No community assignment satisfies the degree constraints."""


class DisconnectedGraphError(TransilabError):
    """Operation requires a connected graph."""


class FormatError(TransilabError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no
