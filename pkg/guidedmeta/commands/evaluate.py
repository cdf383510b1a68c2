# -*- coding: utf-8 -*-

import os

from guidedmeta.commands import BaseCommand, CommandError, parse_overrides
from guidedmeta.commands.run import print_report
from guidedmeta.experiment import Experiment
from guidedmeta.runlog import CONFIG_FILE, write_json
from guidedmeta.runner import compare_runs, evaluate_checkpoint
from guidedmeta.util import to_floats
from guidedmeta.util.text import printout


class EvaluateCommand(BaseCommand):

    cmd_name = 'evaluate'
    short_help = 'evaluate a checkpoint over a task sweep'

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument('--checkpoint', required=True, metavar='PATH',
                            help='checkpoint file to evaluate')
        parser.add_argument('--bounds', metavar='A,B',
                            help='sweep bounds (default: the test bounds '
                                 'of the run)')
        parser.add_argument('--step', type=float,
                            help='sweep spacing')
        parser.add_argument('--output', metavar='PATH',
                            help='directory for sweep.csv and summary.json')

    def handle(self, args):
        bounds = None
        if args.bounds:
            try:
                bounds = to_floats(args.bounds)
            except ValueError:
                bounds = ()
            if len(bounds) != 2:
                raise CommandError("--bounds needs two numbers a,b",
                                   show_usage=True)
        if args.step is not None and not args.step > 0:
            raise CommandError("--step must be positive", show_usage=True)
        experiment = Experiment(args.config, parse_overrides(args.option))
        try:
            _, summary = evaluate_checkpoint(experiment, args.checkpoint,
                                             bounds, args.step, args.output)
        finally:
            experiment.shutdown()
        for key in ('post_adaptation', 'pre_adaptation'):
            printout('{}:'.format(key))
            print_report(summary[key])


class CompareCommand(BaseCommand):

    cmd_name = 'compare'
    short_help = 'compare the evaluation sweeps of two runs'

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument('dir_a', metavar='DIR_A')
        parser.add_argument('dir_b', metavar='DIR_B')
        parser.add_argument('--output', metavar='PATH',
                            help='write the comparison as JSON')

    def handle(self, args):
        # Summary settings follow the first run unless --config is given
        config = args.config
        if not config and os.path.isfile(os.path.join(args.dir_a,
                                                      CONFIG_FILE)):
            config = os.path.join(args.dir_a, CONFIG_FILE)
        experiment = Experiment(config, parse_overrides(args.option))
        try:
            cfg = experiment.resolve()
            report = compare_runs(args.dir_a, args.dir_b, cfg.ranges,
                                  cfg.bias_points, cfg.symbol)
        finally:
            experiment.shutdown()
        if args.output:
            write_json(args.output, report)
        printout('{:<36} {:>12} {:>12} {:>12}'.format('', 'a', 'b', 'a - b'))
        for key, value in report['a'].items():
            delta = report['deltas'].get(key, '')
            printout('{:<36} {:>12} {:>12} {:>12}'.format(
                key, _short(value), _short(report['b'][key]),
                _short(delta)))


def _short(value):
    return '{:.4g}'.format(value) if isinstance(value, float) else str(value)
