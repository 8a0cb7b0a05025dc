"""
Exception hierarchy for L{simploscore}.

Every exception carries an C{exit_code} which is used by L{simploscore.cli}
to terminate the process.
"""


class SimploscoreError(Exception):
    """
    Base class of all errors raised by L{simploscore}.

    @cvar exit_code: process exit code used by the command line interface
    @type exit_code: L{int}
    """
    exit_code = 1


class DomainError(SimploscoreError, ValueError):
    """
    An argument lies outside the domain of an operation.
    """
    pass


class EmptyPieceError(DomainError):
    """
    The piece does not contain a single note.
    """
    def __init__(self, source=None):
        if source is None:
            msg = "empty piece: no notes found"
        else:
            msg = "empty piece: no notes found in {}".format(source)
        DomainError.__init__(self, msg)
        self.source = source


class MidiParseError(SimploscoreError):
    """
    The MIDI data is malformed.

    @ivar offset: byte offset of the offending chunk or header, if known
    @type offset: L{int} or L{None}
    """
    def __init__(self, message, offset=None):
        if offset is not None:
            message = "{} (at byte offset {})".format(message, offset)
        SimploscoreError.__init__(self, message)
        self.offset = offset


class SchemaError(SimploscoreError):
    """
    A tabular input is missing a required column.

    @ivar column: name of the missing column
    @type column: L{str}
    """
    def __init__(self, column, source=None):
        msg = "missing column '{}'".format(column)
        if source is not None:
            msg += " in {}".format(source)
        SimploscoreError.__init__(self, msg)
        self.column = column


class ComputationError(SimploscoreError):
    """
    A numerical computation failed.

    @ivar order: order of the Laplacian involved, if any
    @type order: L{int} or L{None}
    """
    def __init__(self, message, order=None):
        SimploscoreError.__init__(self, message)
        self.order = order


class ConvergenceError(ComputationError):
    """
    An iterative fit did not converge.

    @ivar best: the best fit found before giving up
    @type best: L{simploscore.fitting.FitResult}
    """
    def __init__(self, message, best=None):
        ComputationError.__init__(self, message)
        self.best = best


class ConsistencyError(SimploscoreError):
    """
    An algebraic identity which must always hold was violated.

    This indicates a bug, the current run has to be aborted.
    """
    exit_code = 3
