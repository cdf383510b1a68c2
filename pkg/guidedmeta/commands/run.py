# -*- coding: utf-8 -*-

from guidedmeta.commands import BaseCommand, CommandError, parse_overrides
from guidedmeta.experiment import Experiment, open_experiment
from guidedmeta.runner import epoch_scaling, run_experiment
from guidedmeta.util import to_list
from guidedmeta.util.text import printout


def print_report(report):
    for key, value in report.items():
        printout('  {:<36} {}'.format(key, value))


class RunCommand(BaseCommand):

    cmd_name = 'run'
    short_help = 'meta-train and evaluate an experiment'

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument('--seed', type=int,
                            help='run this seed only')
        parser.add_argument('--method',
                            help='sampling method to train with')
        parser.add_argument('--resume', metavar='CHECKPOINT',
                            help='continue the run a checkpoint belongs to')

    def handle(self, args):
        options = parse_overrides(args.option)
        if args.seed is not None:
            options.append(('experiment', 'seeds', str(args.seed)))
        if args.method:
            options.append(('experiment', 'method', args.method))

        if args.resume:
            if args.seed is not None or args.method:
                raise CommandError("--resume takes seed and method from the "
                                   "checkpoint", show_usage=True)
            experiment = Experiment(args.config, options)
            cfg = None
        else:
            if not args.config:
                raise CommandError("--config is required", show_usage=True)
            experiment, cfg = open_experiment(args.config, options)
        try:
            result = run_experiment(experiment, cfg, resume=args.resume)
        finally:
            experiment.shutdown()
        printout('{} ({} seed(s), post-adaptation):'.format(
            result.config.method, len(result.seeds)))
        print_report(result.summary['post_adaptation'])


class ScaleCommand(BaseCommand):

    cmd_name = 'scale'
    short_help = 'compare scores after different training lengths'

    def add_arguments(self, parser):
        self.add_config_arguments(parser, required=True)
        parser.add_argument('--epochs', required=True,
                            metavar='N1,N2,...',
                            help='numbers of meta-epochs to train with')
        parser.add_argument('--methods', metavar='M1,M2,...',
                            help='sampling methods (default: the '
                                 'configured one)')

    def handle(self, args):
        try:
            n_epochs = [int(n) for n in to_list(args.epochs)]
        except ValueError:
            raise CommandError("--epochs must be a list of integers",
                               show_usage=True)
        if not n_epochs or any(n < 1 for n in n_epochs):
            raise CommandError("--epochs must be positive integers",
                               show_usage=True)
        experiment, cfg = open_experiment(args.config,
                                          parse_overrides(args.option))
        try:
            rows = epoch_scaling(experiment, cfg, n_epochs,
                                 methods=to_list(args.methods or ''))
        finally:
            experiment.shutdown()
        for row in rows:
            printout(', '.join('{}={}'.format(k, v) for k, v in row.items()))
