# -*- coding: utf-8 -*-

import logging
import logging.handlers
import sys

LOG_TYPE_ALIASES = ('unix',)
LOG_LEVELS = ('CRITICAL', 'ERROR', 'WARNING', 'INFO', 'DEBUG')
LOG_LEVEL_ALIASES = ('WARN', 'ALL')

LOG_LEVEL_MAP = dict({name: getattr(logging, name) for name in LOG_LEVELS},
                     WARN=logging.WARNING, ALL=logging.DEBUG)

DEFAULT_FORMAT = 'GuidedMeta[%(module)s] %(levelname)s: %(message)s'


def get_logger(log=None):
    """Return `log` or the package-wide fallback logger."""
    return log if log is not None else logging.getLogger('guidedmeta')


def _handler(logtype, logfile):
    if logtype == 'file':
        return logging.FileHandler(logfile, encoding='utf-8')
    if logtype in ('syslog',) + LOG_TYPE_ALIASES:
        return logging.handlers.SysLogHandler('/dev/log')
    if logtype == 'stderr':
        return logging.StreamHandler(sys.stderr)
    return logging.NullHandler()


def logger_handler_factory(logtype='stderr', logfile=None, level='INFO',
                           logid='GuidedMeta', format=None):
    """Attach one handler of `logtype` (`none`, `stderr`, `file` or
    `syslog`) to the logger `logid` and return the logger.

    Call `shutdown()` on the result to detach and close the handlers again.
    """
    logtype = logtype.lower()
    level = level.upper()
    if level not in LOG_LEVEL_MAP:
        # Unreachable through the ChoiceOption in the experiment
        raise AssertionError("Unrecognized log level `{}`".format(level))

    if not format:
        format = DEFAULT_FORMAT
        if logtype in ('file', 'stderr'):
            format = '%(asctime)s ' + format
    handler = _handler(logtype, logfile)
    handler.setFormatter(logging.Formatter(
        format, '%X' if logtype == 'stderr' else None))

    logger = logging.getLogger(logid)
    logger.setLevel(LOG_LEVEL_MAP[level])
    logger.addHandler(handler)
    return logger


def shutdown(logger):
    if logger is None:
        return
    for handler in list(logger.handlers):
        handler.flush()
        handler.close()
        logger.removeHandler(handler)
