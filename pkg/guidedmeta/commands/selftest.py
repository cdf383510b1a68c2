# -*- coding: utf-8 -*-

from guidedmeta import log
from guidedmeta.commands import EXIT_FAILURE, BaseCommand
from guidedmeta.selftest import CHECKS, run_selftest
from guidedmeta.util.text import printout


class SelfTestCommand(BaseCommand):

    cmd_name = 'selftest'
    short_help = 'run the quick invariant checks'

    def add_arguments(self, parser):
        parser.add_argument('--log-level', default='INFO',
                            choices=log.LOG_LEVELS)

    def handle(self, args):
        logger = log.logger_handler_factory('stderr', level=args.log_level,
                                            logid='GuidedMeta.selftest')
        try:
            failed = run_selftest(logger)
        finally:
            log.shutdown(logger)
        printout('{} of {} checks passed'.format(len(CHECKS) - len(failed),
                                                 len(CHECKS)))
        return EXIT_FAILURE if failed else None
