# -*- coding: utf-8 -*-

import sys
from argparse import ArgumentParser
from importlib.metadata import entry_points

from guidedmeta import __version__ as VERSION
from guidedmeta.config import ConfigurationError
from guidedmeta.core import GuidedMetaError
from guidedmeta.util.text import printerr

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILURE = 3


class CommandError(GuidedMetaError):
    """Exception raised when a command cannot be executed."""

    title = "Command Error"

    def __init__(self, msg, show_usage=False, cmd=None):
        GuidedMetaError.__init__(self, msg)
        self.show_usage = show_usage
        self.cmd = cmd


def parse_overrides(values):
    """`section.option=value` strings as `(section, option, value)`."""
    options = []
    for item in values or ():
        key, sep, value = item.partition('=')
        section, dot, name = key.strip().partition('.')
        if not sep or not dot or not section or not name:
            raise CommandError("Invalid override {!r}, expected "
                               "section.option=value".format(item),
                               show_usage=True)
        options.append((section, name, value.strip()))
    return options


class BaseCommand(object):

    cmd_name = None
    short_help = ''

    def __init__(self, cmd_name=None):
        self.cmd_name = cmd_name or self.cmd_name
        self.parser = ArgumentParser(prog='guidedmeta ' + self.cmd_name,
                                     description=self.short_help)
        self.add_arguments(self.parser)

    def add_arguments(self, parser):
        pass

    def add_config_arguments(self, parser, required=False):
        parser.add_argument('--config', metavar='PATH', required=required,
                            help='experiment file')
        parser.add_argument('-o', '--option', action='append', default=[],
                            metavar='SECTION.OPTION=VALUE',
                            help='override an experiment option')

    def handle(self, args):
        raise NotImplementedError

    def run_command(self, argv):
        args = self.parser.parse_args(argv)
        try:
            return self.handle(args) or EXIT_OK
        except CommandError as e:
            e.cmd = self.cmd_name
            raise


def builtin_commands():
    from guidedmeta.commands.evaluate import CompareCommand, EvaluateCommand
    from guidedmeta.commands.run import RunCommand, ScaleCommand
    from guidedmeta.commands.selftest import SelfTestCommand
    return [RunCommand, EvaluateCommand, CompareCommand, ScaleCommand,
            SelfTestCommand]


def load_commands():
    """Instantiate the bundled commands and the ones registered by other
    packages under the `guidedmeta.commands` entry point group.
    """
    commands = {}
    for cls in builtin_commands():
        commands[cls.cmd_name] = cls(cls.cmd_name)
    for entry in entry_points(group='guidedmeta.commands'):
        commands[entry.name] = entry.load()(entry.name)
    return commands


def usage(subcommands):
    text = 'GuidedMeta ' + VERSION + '\n'
    for cmd in subcommands:
        text += ' %-12s %s\n' % (cmd.cmd_name, cmd.short_help)
    text += ('\n'
        'Run `guidedmeta <command> --help` for the options of a command.\n'
        'Experiment options can be overridden with -o section.option=value\n')
    sys.stderr.write(text)


def run_command(args):
    """Execute `args` (without the program name) and return the exit code:
    0 on success, 2 for configuration or usage errors and 3 for failures
    at runtime.
    """
    commands = load_commands()
    if not args or args[0] not in commands:
        usage(commands.values())
        return EXIT_OK if args and args[0] in ('-h', '--help') \
            else EXIT_USAGE
    cmd = commands[args[0]]
    try:
        return cmd.run_command(args[1:])
    except (ConfigurationError, CommandError) as e:
        printerr('{}: {}'.format(e.title, e))
        if getattr(e, 'show_usage', False):
            cmd.parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except GuidedMetaError as e:
        printerr('{}: {}'.format(e.title, e))
        return EXIT_FAILURE


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
