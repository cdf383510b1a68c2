# -*- coding: utf-8 -*-

import logging
import logging.handlers
import os.path
import sys
import tempfile

from guidedmeta.config import Configuration
from guidedmeta.core import ComponentManager
from guidedmeta.experiment import Experiment
from guidedmeta.log import DEFAULT_FORMAT, LOG_LEVEL_MAP

# Small enough to train a few epochs in well under a second
FAST_OPTIONS = (
    ('experiment', 'n_epoch', '4'),
    ('experiment', 'seeds', '1'),
    ('experiment', 'checkpoint_every', '2'),
    ('env', 'horizon', '5'),
    ('tasks', 'test_max', '3.0'),
    ('tasks', 'test_step', '0.5'),
    ('sampler', 'n_batch', '4'),
    ('sampler', 'n_interval', '2'),
    ('sampler', 'd_tau_bin', '0.5'),
    ('meta', 'n_samples', '2'),
    ('meta', 'hidden', '4'),
    ('metrics', 'ranges', '0:3'),
    ('metrics', 'bias_points', '0, 1'),
    ('metrics', 'track_points', '0, 3'),
)


class ExperimentStub(Experiment):
    """In-memory experiment for tests.

    Nothing is read from disk, every record goes to a shared buffering
    handler (see `log_messages`) and components of the `tests` package are
    enabled.
    """

    abstract = True

    def __init__(self, options=(), disable=(), outdir=None):
        """
        :param options: `(section, name, value)` triples set on top of the
                        defaults
        :param disable: component classes or name prefixes to deactivate
        :param outdir: output directory; nothing is written unless a test
                       trains or evaluates
        """
        ComponentManager.__init__(self)
        self.path = None

        self.config = Configuration(None)
        self.config.set('logging', 'log_level', 'DEBUG')
        if outdir is not None:
            self.config.set('experiment', 'outdir', outdir)
        for name_or_class in disable:
            self.config.set('components', self._component_name(name_or_class),
                            'disabled')
        for section, name, value in options:
            self.config.set(section, name, value)

        self.log = logging.getLogger('guidedmeta.test')
        self.log.setLevel(LOG_LEVEL_MAP[self.log_level.upper()])
        if not self.log.handlers:
            # Never flushed implicitly
            handler = logging.handlers.BufferingHandler(sys.maxsize)
            handler.setFormatter(logging.Formatter(DEFAULT_FORMAT))
            self.log.addHandler(handler)
        else:
            self.log.handlers[0].flush()

    @property
    def log_messages(self):
        """`(level, message)` pairs logged since the stub was created."""
        return [(record.levelname, record.getMessage())
                for record in self.log.handlers[0].buffer]

    def shutdown(self):
        # The buffering handler is shared by all stubs
        pass

    def is_component_enabled(self, cls):
        if self._component_name(cls).startswith(('__main__.', 'tests.')):
            return True
        return Experiment.is_component_enabled(self, cls)


def fast_experiment(outdir, options=(), **kwargs):
    """Stub experiment with the tiny training settings above."""
    return ExperimentStub(FAST_OPTIONS + tuple(options), outdir=outdir,
                          **kwargs)


def mkdtemp():
    """Create a temp directory with prefix `gm-testdir-` and return its
    real path."""
    return os.path.realpath(tempfile.mkdtemp(prefix='gm-testdir-'))
