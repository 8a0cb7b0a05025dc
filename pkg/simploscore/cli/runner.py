"""
Batch execution of a command under the Twisted reactor.

Every input file is one job. Jobs run in the reactor's thread pool, at
most C{--jobs} of them at a time; the exit code of the run is the worst
exit code of its jobs.

@var EXIT_OK: all inputs processed
@var EXIT_USAGE: invalid command line or configuration
"""
import sys

from twisted.internet import defer, threads
from twisted.logger import Logger
from twisted.python import usage

from ..errors import SimploscoreError
from ..log import start_logging
from .commands import COMMANDS
from .options import Options


log = Logger()

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _succeeded(written, path):
    log.info("{path}: wrote {files}", path=path, files=", ".join(written))
    return EXIT_OK


def _failed(failure, path):
    if failure.check(SimploscoreError):
        error = failure.value
        log.error("{path}: {error}", path=path, error=error)
        return error.exit_code
    if failure.check(OSError):
        log.error("{path}: {error}", path=path, error=failure.value)
        return EXIT_ERROR
    log.failure("{path}: unexpected error", failure, path=path)
    return EXIT_ERROR


def run_job(command, run_config, path):
    """
    Run one command on one input in a thread.

    @return: a L{defer.Deferred} firing with the exit code of the job
    """
    log.info("{path}: starting {command}", path=path, command=run_config.command)
    d = threads.deferToThread(command, run_config, path)
    d.addCallbacks(_succeeded, _failed, callbackArgs=(path,), errbackArgs=(path,))
    return d


def _usage_error(options, error, stderr):
    stderr.write("{}\n".format(getattr(options, "subOptions", None) or options))
    stderr.write("error: {}\n".format(error))
    return EXIT_USAGE


def run(reactor, argv, stderr=None):
    """
    Parse the arguments and run the selected command on all inputs.

    @param reactor: the reactor
    @param argv: command line arguments, without the program name
    @type argv: L{list} of L{str}
    @param stderr: stream for usage messages. Defaults to L{sys.stderr}.
    @return: a L{defer.Deferred} firing with the exit code
    @rtype: L{defer.Deferred}
    """
    if stderr is None:
        stderr = sys.stderr
    options = Options()
    try:
        options.parseOptions(argv)
    except usage.UsageError as e:
        return defer.succeed(_usage_error(options, e, stderr))
    except SystemExit as e:
        # --help
        return defer.succeed(e.code or EXIT_OK)

    run_config = options.run_config
    command = COMMANDS[run_config.command]
    semaphore = defer.DeferredSemaphore(run_config.jobs)
    jobs = [semaphore.run(run_job, command, run_config, path) for path in run_config.inputs]
    d = defer.gatherResults(jobs)
    d.addCallback(max)
    return d


def _exit_with(code):
    if code != EXIT_OK:
        raise SystemExit(code)


def _main(reactor, argv):
    d = run(reactor, argv)
    d.addCallback(_exit_with)
    return d


def main(argv=None):
    """
    Entry point of the C{simploscore} script.
    """
    from twisted.internet import task

    if argv is None:
        argv = sys.argv[1:]
    start_logging()
    task.react(_main, (argv,))
