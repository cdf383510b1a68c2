# -*- coding: utf-8 -*-

"""The experiment: configuration, logging and component management."""

import os
from dataclasses import dataclass, replace
from functools import cached_property

from guidedmeta import log
from guidedmeta.api import (IEnvironmentProvider, IExperimentParticipant,
                            ISamplingMethod)
from guidedmeta.config import (ChoiceOption, ConfigSection, Configuration,
                               ConfigurationError, ExtensionOption,
                               FloatOption, IntOption, ListOption, Option,
                               PathOption)
from guidedmeta.core import (Component, ComponentManager, ExtensionPoint,
                             InputError)
from guidedmeta.envs.base import EnvSpec
from guidedmeta.metalearner import MetaConfig
from guidedmeta.sampler import SamplerConfig
from guidedmeta.taskspace import TaskBounds
from guidedmeta.util import as_bool, fmt_num, parse_ranges, to_floats

# Register the bundled components
import guidedmeta.envs                                          # noqa: F401
import guidedmeta.methods                                       # noqa: F401


@dataclass(frozen=True)
class ExperimentConfig(object):
    """Fully resolved, validated experiment settings."""

    env: EnvSpec
    bounds: TaskBounds
    test_bounds: TaskBounds
    test_step: float
    method: str
    n_epoch: int
    n_interval: int
    sampler: SamplerConfig
    meta: MetaConfig
    seeds: tuple
    outdir: str
    workers: int = 1
    checkpoint_every: int = 50
    ranges: tuple = ((0.0, 3.0), (0.0, 5.0))
    bias_points: tuple = (0.0, 1.0, 2.0, 3.0)
    track_points: tuple = (0.0, 1.0, 3.0, 5.0)
    symbol: str = 'v'

    @property
    def dimension(self):
        return self.bounds.dimension

    def method_dir(self, method=None):
        return os.path.join(self.outdir, method or self.method)

    def run_dir(self, seed, method=None):
        return os.path.join(self.method_dir(method), str(seed))

    def override(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        return {
            'env': self.env.to_dict(),
            'bounds': self.bounds.to_dict(),
            'test_bounds': self.test_bounds.to_dict(),
            'test_step': self.test_step,
            'method': self.method,
            'n_epoch': self.n_epoch,
            'n_interval': self.n_interval,
            'sampler': {'n_batch': self.sampler.n_batch,
                        'delta': self.sampler.delta,
                        'd_tau_bin': self.sampler.d_tau_bin},
            'meta': self.meta.to_dict(),
            'seeds': list(self.seeds),
            'outdir': self.outdir,
            'workers': self.workers,
            'checkpoint_every': self.checkpoint_every,
            'ranges': [list(r) for r in self.ranges],
            'bias_points': list(self.bias_points),
            'track_points': list(self.track_points),
            'symbol': self.symbol,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            env=EnvSpec.from_dict(data['env']),
            bounds=TaskBounds.from_dict(data['bounds']),
            test_bounds=TaskBounds.from_dict(data['test_bounds']),
            test_step=float(data['test_step']),
            method=data['method'],
            n_epoch=int(data['n_epoch']),
            n_interval=int(data['n_interval']),
            sampler=SamplerConfig(**data['sampler']),
            meta=MetaConfig.from_dict(data['meta']),
            seeds=tuple(int(s) for s in data['seeds']),
            outdir=data['outdir'],
            workers=int(data['workers']),
            checkpoint_every=int(data['checkpoint_every']),
            ranges=tuple(tuple(r) for r in data['ranges']),
            bias_points=tuple(data['bias_points']),
            track_points=tuple(data['track_points']),
            symbol=data.get('symbol', 'v'))

    def to_options(self):
        """`(section, name, value)` triples reproducing this configuration."""
        def floats(values):
            return ', '.join(fmt_num(v) if float(v).is_integer() else repr(v)
                             for v in values)
        return [
            ('experiment', 'method', self.method),
            ('experiment', 'n_epoch', self.n_epoch),
            ('experiment', 'seeds', ', '.join(str(s) for s in self.seeds)),
            ('experiment', 'outdir', self.outdir),
            ('experiment', 'workers', self.workers),
            ('experiment', 'checkpoint_every', self.checkpoint_every),
            ('env', 'kind', self.env.kind),
            ('env', 'horizon', self.env.horizon),
            ('env', 'dt', repr(self.env.dt)),
            ('env', 'gain', repr(self.env.gain)),
            ('env', 'drag', repr(self.env.drag)),
            ('env', 'goal_tolerance', repr(self.env.goal_tolerance)),
            ('tasks', 'tau_min', repr(self.bounds.tau_min)),
            ('tasks', 'tau_max', repr(self.bounds.tau_max)),
            ('tasks', 'test_min', repr(self.test_bounds.tau_min)),
            ('tasks', 'test_max', repr(self.test_bounds.tau_max)),
            ('tasks', 'test_step', repr(self.test_step)),
            ('sampler', 'n_batch', self.sampler.n_batch),
            ('sampler', 'n_interval', self.n_interval),
            ('sampler', 'd_tau_bin', repr(self.sampler.d_tau_bin)),
            ('sampler', 'delta', repr(self.sampler.delta)),
            ('meta', 'alpha', repr(self.meta.alpha)),
            ('meta', 'beta', repr(self.meta.beta)),
            ('meta', 'gamma', repr(self.meta.discount)),
            ('meta', 'n_samples', self.meta.n_samples),
            ('meta', 'hidden', self.meta.hidden),
            ('meta', 'grad_clip', repr(self.meta.grad_clip)),
            ('metrics', 'ranges', ', '.join(
                '{}:{}'.format(repr(lo), repr(hi)) for lo, hi in self.ranges)),
            ('metrics', 'bias_points', floats(self.bias_points)),
            ('metrics', 'track_points', floats(self.track_points)),
        ]


class Experiment(Component, ComponentManager):
    """Experiment manager.

    Reads an INI experiment file, sets up logging and hands out the
    environment providers and sampling methods it enables. Every component
    activated through the experiment gets `experiment`, `config` and `log`
    attributes.
    """

    participants = ExtensionPoint(IExperimentParticipant)
    env_providers = ExtensionPoint(IEnvironmentProvider)
    sampling_methods = ExtensionPoint(ISamplingMethod)

    components_section = ConfigSection('components',
        """Enable or disable components. The option name is either the fully
        qualified name of a component or a module/package prefix followed
        by `.*`; the value `enabled` or `disabled` decides.
        {{{
        [components]
        guidedmeta.methods.UniformSampling = disabled
        mypackage.* = enabled
        }}}
        """)

    # [experiment]

    method = ExtensionOption('experiment', 'method', ISamplingMethod,
                             'rmrl_gts',
        """Task sampling method: `rmrl_gts`, `approach1_only`,
        `approach2_only` or `uniform_maml`.""")

    n_epoch = IntOption('experiment', 'n_epoch', 200,
        """Number of meta-epochs.""")

    seeds = ListOption('experiment', 'seeds', '1, 2, 3, 4, 5',
        doc="""Seeds to run, one independent run per seed.""")

    outdir = PathOption('experiment', 'outdir', 'runs',
        """Output directory. Relative paths are resolved relative to the
        experiment file.""")

    workers = IntOption('experiment', 'workers', 1,
        """Threads used for the per-task rollouts of one epoch. Results do
        not depend on this value.""")

    checkpoint_every = IntOption('experiment', 'checkpoint_every', 50,
        """Write a checkpoint every that many epochs (and after the last
        one).""")

    # [env]

    env_provider = ExtensionOption('env', 'kind', IEnvironmentProvider,
                                   'velocity1d',
        """Environment family: `velocity1d` or `navigation2d`.""")

    horizon = IntOption('env', 'horizon', 100,
        """Maximum number of steps per episode.""")

    dt = FloatOption('env', 'dt', 0.05,
        """Integration step of the velocity task.""")

    gain = FloatOption('env', 'gain', 2.0,
        """Force gain of the velocity task.""")

    drag = FloatOption('env', 'drag', 0.5,
        """Linear drag of the velocity task.""")

    goal_tolerance = FloatOption('env', 'goal_tolerance', 0.01,
        """Distance at which a navigation episode ends.""")

    # [tasks]

    tau_min = FloatOption('tasks', 'tau_min', 0.0,
        """Lower bound of the training tasks. A negative value must equal
        `-tau_max` (symmetric distribution).""")

    tau_max = FloatOption('tasks', 'tau_max', 3.0,
        """Upper bound of the training tasks (radius for 2D tasks).""")

    test_min = FloatOption('tasks', 'test_min', 0.0,
        """Lower bound of the evaluation sweep.""")

    test_max = FloatOption('tasks', 'test_max', 5.0,
        """Upper bound of the evaluation sweep.""")

    test_step = FloatOption('tasks', 'test_step', 0.0,
        """Spacing of the evaluation sweep; 0 uses the environment
        default.""")

    # [sampler]

    n_batch = IntOption('sampler', 'n_batch', 0,
        """Tasks per epoch; 0 uses the environment default.""")

    n_interval = IntOption('sampler', 'n_interval', 10,
        """Number of region expansions in the second half of training.""")

    d_tau_bin = FloatOption('sampler', 'd_tau_bin', 0.1,
        """Width of the score bins.""")

    delta = FloatOption('sampler', 'delta', 0.1,
        """Rate of uniform draws in the easy region.""")

    # [meta]

    alpha = FloatOption('meta', 'alpha', 0.1,
        """Inner (adaptation) step size.""")

    beta = FloatOption('meta', 'beta', 0.01,
        """Outer (meta) step size.""")

    gamma = FloatOption('meta', 'gamma', 0.99,
        """Discount used in the policy-gradient loss.""")

    n_samples = IntOption('meta', 'n_samples', 20,
        """Rollouts per task and gradient estimate.""")

    hidden = IntOption('meta', 'hidden', 64,
        """Width of the two hidden policy layers.""")

    grad_clip = FloatOption('meta', 'grad_clip', 10.0,
        """Gradient-norm clipping for both loops; 0 disables it.""")

    # [metrics]

    ranges = ListOption('metrics', 'ranges', '0:3, 0:5',
        doc="""Task ranges (`lo:hi`) for mean and variance.""")

    bias_points = ListOption('metrics', 'bias_points', '0, 1, 2, 3',
        doc="""Tasks at which bias scores are reported.""")

    track_points = ListOption('metrics', 'track_points', '0, 1, 3, 5',
        doc="""Tasks tracked by the epoch scaling table.""")

    # [logging]

    log_type = ChoiceOption('logging', 'log_type',
                            ('stderr', 'none', 'file', 'syslog') +
                            log.LOG_TYPE_ALIASES,
        """Logging facility to use.

        Should be one of (`none`, `file`, `stderr`, `syslog`).""")

    log_file = Option('logging', 'log_file', 'guidedmeta.log',
        """If `log_type` is `file`, the path of the log file. Relative paths
        are resolved relative to the output directory.""")

    log_level = ChoiceOption('logging', 'log_level',
                             ('INFO', 'DEBUG', 'WARNING', 'ERROR',
                              'CRITICAL') + log.LOG_LEVEL_ALIASES,
        """Level of verbosity in log.

        Should be one of (`CRITICAL`, `ERROR`, `WARNING`, `INFO`,
        `DEBUG`).""")

    log_format = Option('logging', 'log_format', None,
        """Custom logging format.

        If nothing is set, the following will be used:

        `GuidedMeta[%(module)s] %(levelname)s: %(message)s`
        """)

    def __init__(self, path=None, options=()):
        """Load the experiment.

        :param path:    experiment file; `None` keeps every option at its
                        default
        :param options: `(section, name, value)` triples applied on top of
                        the file, e.g. command line overrides
        """
        ComponentManager.__init__(self)

        self.path = os.path.abspath(path) if path else None
        self.log = None
        self.config = None
        self.setup_config(options)

    def __repr__(self):
        return '<Experiment {}>'.format(self.path or '(defaults)')

    @property
    def experiment(self):
        return self

    def component_activated(self, component):
        """Give components access to the experiment, its configuration and
        its logger."""
        component.experiment = self
        component.config = self.config
        component.log = self.log

    def _component_name(self, name_or_class):
        name = name_or_class
        if not isinstance(name_or_class, str):
            name = name_or_class.__module__ + '.' + name_or_class.__name__
        return name.lower()

    @cached_property
    def _component_rules(self):
        _rules = {}
        for name, value in self.components_section.options():
            name = name.rstrip('.*').lower()
            _rules[name] = as_bool(value)
        return _rules

    def is_component_enabled(self, cls):
        """Only activate components that are not disabled in the
        `[components]` section. Components outside the `guidedmeta` package
        need an explicit rule.
        """
        component_name = self._component_name(cls)

        rules = self._component_rules
        cname = component_name
        while cname:
            enabled = rules.get(cname)
            if enabled is not None:
                return enabled
            idx = cname.rfind('.')
            if idx < 0:
                break
            cname = cname[:idx]

        return component_name.startswith('guidedmeta.') or None

    def setup_config(self, options=()):
        """Load the experiment file and apply `options`."""
        if self.path and not os.path.isfile(self.path):
            raise ConfigurationError("Experiment file {} not found"
                                     .format(self.path))
        self.config = Configuration(self.path)
        for section, name, value in options:
            self.config.set(section, name, value)
        self.setup_log()

    def setup_log(self):
        """Initialize the logging sub-system."""
        format = self.log_format
        if format and self.path:
            format = format.replace('%(experiment)s',
                                    os.path.basename(self.path))
        logfile = self.log_file
        if logfile and not os.path.isabs(logfile):
            logfile = os.path.join(self.outdir, logfile)
        if self.log_type == 'file':
            os.makedirs(os.path.dirname(logfile), exist_ok=True)
        self.log = log.logger_handler_factory(self.log_type, logfile,
                                              self.log_level, 'GuidedMeta',
                                              format)

    def shutdown(self):
        log.shutdown(self.log)

    def _named(self, extensions, name, kind):
        for impl in extensions:
            if impl.name == name:
                return impl
        raise ConfigurationError("Unknown {} {!r}; available: {}".format(
            kind, name, ', '.join(sorted(i.name for i in extensions))))

    def provider(self, kind):
        """Enabled environment provider named `kind`."""
        return self._named(self.env_providers, kind, 'environment')

    def sampling_method(self, name):
        """Enabled sampling method named `name`."""
        return self._named(self.sampling_methods, name, 'sampling method')

    def resolve(self):
        """Validate the configuration and return an `ExperimentConfig`.

        Raises `ConfigurationError` on any invalid value or combination.
        """
        provider = self.env_provider
        method = self.method
        try:
            bounds = TaskBounds(self.tau_min, self.tau_max,
                                provider.dimension)
            test_bounds = TaskBounds(self.test_min, self.test_max,
                                     provider.dimension)
            env = EnvSpec(provider.name, self.horizon, self.dt, self.gain,
                          self.drag, self.goal_tolerance)
            sampler = SamplerConfig(self.n_batch or provider.default_n_batch,
                                    self.delta, self.d_tau_bin)
            meta = MetaConfig(self.alpha, self.beta, self.n_samples,
                              self.horizon, self.gamma, self.hidden,
                              self.grad_clip)
        except InputError as e:
            raise ConfigurationError(str(e))
        try:
            seeds = tuple(int(s) for s in self.seeds)
            ranges = tuple(parse_ranges(self.ranges))
            bias_points = tuple(to_floats(self.bias_points))
            track_points = tuple(to_floats(self.track_points))
        except ValueError as e:
            raise ConfigurationError("[experiment]/[metrics]: {}".format(e))
        for name in ('n_epoch', 'n_interval', 'workers', 'checkpoint_every',
                     'hidden'):
            if getattr(self, name) < 1:
                raise ConfigurationError("{} must be at least 1".format(name))
        if not seeds:
            raise ConfigurationError("[experiment] seeds must not be empty")
        if any(s < 0 for s in seeds):
            raise ConfigurationError("[experiment] seeds must be "
                                     "non-negative")
        return ExperimentConfig(
            env=env, bounds=bounds, test_bounds=test_bounds,
            test_step=self.test_step or provider.default_test_step,
            method=method.name, n_epoch=self.n_epoch,
            n_interval=self.n_interval, sampler=sampler, meta=meta,
            seeds=seeds, outdir=self.outdir, workers=self.workers,
            checkpoint_every=self.checkpoint_every, ranges=ranges,
            bias_points=bias_points, track_points=track_points,
            symbol=provider.symbol)


def save_config(cfg, path):
    """Write `cfg` as an experiment file (the config echo of a run)."""
    config = Configuration(path)
    for section, name, value in cfg.to_options():
        config.set(section, name, value)
    config.save()
    return path


def open_experiment(path=None, options=()):
    """Load an experiment and resolve its configuration.

    :return: the `(Experiment, ExperimentConfig)` pair
    """
    experiment = Experiment(path, options)
    return experiment, experiment.resolve()
