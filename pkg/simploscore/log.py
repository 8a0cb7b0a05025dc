"""
Logging setup for L{simploscore}.

All modules log through L{twisted.logger}. This module only decides where
the events go and which of them are shown.

@var LOG_LEVEL_ENV: name of the environment variable holding the log level
@type LOG_LEVEL_ENV: L{str}
@var DEFAULT_LOG_LEVEL: level used if neither argument nor environment set one
@type DEFAULT_LOG_LEVEL: L{twisted.logger.LogLevel}
"""
import os
import sys

from twisted.logger import (
    FilteringLogObserver,
    InvalidLogLevelError,
    LogLevel,
    LogLevelFilterPredicate,
    Logger,
    globalLogBeginner,
    textFileLogObserver,
)


LOG_LEVEL_ENV = "SIMPLOSCORE_LOG"
DEFAULT_LOG_LEVEL = LogLevel.warn

log = Logger()

_LEVEL_ALIASES = {
    "warning": "warn",
    "fatal": "critical",
}


def parse_level(name):
    """
    Return the L{LogLevel} for a level name.

    @param name: name of the level, case insensitive
    @type name: L{str}
    @return: the level
    @rtype: L{LogLevel}
    @raises InvalidLogLevelError: if the name is unknown
    """
    name = name.strip().lower()
    name = _LEVEL_ALIASES.get(name, name)
    return LogLevel.levelWithName(name)


def resolve_level(level=None, environ=None):
    """
    Determine the log level to use.

    @param level: explicitly requested level name, takes precedence
    @type level: L{str} or L{None}
    @param environ: environment to read L{LOG_LEVEL_ENV} from. Defaults to L{os.environ}.
    @type environ: L{dict}
    @return: the resolved level and the rejected name, if any
    @rtype: L{tuple} of (L{LogLevel}, L{str} or L{None})
    """
    if environ is None:
        environ = os.environ
    if level is None:
        level = environ.get(LOG_LEVEL_ENV)
    if not level:
        return DEFAULT_LOG_LEVEL, None
    try:
        return parse_level(level), None
    except InvalidLogLevelError:
        return DEFAULT_LOG_LEVEL, level


def make_observer(level, stream=None):
    """
    Create an observer writing events of at least C{level} to C{stream}.

    @param level: minimal level to show
    @type level: L{LogLevel}
    @param stream: text stream to write to. Defaults to L{sys.stderr}.
    @type stream: file-like
    @return: the observer
    @rtype: L{FilteringLogObserver}
    """
    if stream is None:
        stream = sys.stderr
    predicate = LogLevelFilterPredicate(defaultLogLevel=level)
    return FilteringLogObserver(textFileLogObserver(stream), [predicate])


def start_logging(level=None, stream=None):
    """
    Start the global log system.

    @param level: level name overriding the environment
    @type level: L{str} or L{None}
    @param stream: text stream to write to. Defaults to L{sys.stderr}.
    @type stream: file-like
    @return: the level in use
    @rtype: L{LogLevel}
    """
    resolved, rejected = resolve_level(level)
    globalLogBeginner.beginLoggingTo(
        [make_observer(resolved, stream)],
        redirectStandardIO=False,
    )
    if rejected is not None:
        log.warn(
            "Unknown log level {level!r}, using {default}",
            level=rejected,
            default=resolved.name,
        )
    return resolved
