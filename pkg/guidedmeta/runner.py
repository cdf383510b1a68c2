# -*- coding: utf-8 -*-

"""The curriculum meta-training loop and the experiment-level drivers.

Per seed, epoch 0 meta-trains on an evenly spaced task grid and, for the
region-based methods, derives the first partition from the grid scores of
the initial policy. Every later epoch first moves the region boundaries
when scheduled, then samples a batch, runs the meta-update and records the
scores. The final policy is evaluated over the test sweep.
"""

import os
import time
from dataclasses import dataclass, field, replace

import numpy as np

from guidedmeta.api import IExperimentParticipant
from guidedmeta.core import Component, GuidedMetaError, InputError, implements
from guidedmeta.experiment import ExperimentConfig, save_config
from guidedmeta.metalearner import MetaLearner, task_rng
from guidedmeta.metrics import (average_sweeps, compare_summaries,
                                evaluate_sweep, nearest_index, summarize)
from guidedmeta.policy import GaussianMLP
from guidedmeta.regions import (RegionPartition, Schedule, advance,
                                estimate_tau_mean, initial_partition)
from guidedmeta.runlog import (CONFIG_FILE, SCALING_FILE, SUMMARY_FILE,
                               SWEEP_FILE, RunLog, checkpoint_path,
                               load_checkpoint, read_sweep, save_checkpoint,
                               write_json, write_sweep, write_table)
from guidedmeta.sampler import SAMPLE_STREAM
from guidedmeta.scores import ScoreTable, probability
from guidedmeta.taskspace import task_key
from guidedmeta.util import fmt_num
from guidedmeta.util.file import ensure_dir

# Random stream identifiers, combined with the seed and epoch
INIT_STREAM = 1
TRAIN_STREAM = 3
GRID_STREAM = 4


@dataclass
class CurriculumState(object):
    """What the sampling methods may look at: bounds, sampler settings,
    score history and the current region partition.
    """

    bounds: object
    sampler: object
    table: ScoreTable
    partition: RegionPartition = None
    schedule: Schedule = None


@dataclass(frozen=True, eq=False)
class EpochRecord(object):
    epoch: int
    plan: object
    scores: list
    partition: RegionPartition = None
    curve: object = None
    wall_time: float = 0.0


@dataclass(eq=False)
class SeedResult(object):
    seed: int
    directory: str
    theta: np.ndarray
    sweep: object = None
    summary: dict = field(default_factory=dict)


@dataclass(eq=False)
class ExperimentResult(object):
    config: ExperimentConfig
    seeds: list
    sweep: object = None
    summary: dict = field(default_factory=dict)


class SeedRun(object):
    """Meta-training of one `(method, seed)` pair."""

    def __init__(self, experiment, cfg, seed, method=None):
        self.experiment = experiment
        self.cfg = cfg
        self.seed = int(seed)
        self.log = experiment.log
        self.method = experiment.sampling_method(method or cfg.method)
        self.provider = experiment.provider(cfg.env.kind)
        self.directory = cfg.run_dir(self.seed, self.method.name)
        self.env = self.provider.create_env(cfg.env, cfg.bounds)
        self.policy = GaussianMLP(self.provider.obs_dim,
                                  self.provider.act_dim, cfg.meta.hidden)
        self.learner = MetaLearner(self.env, self.policy, cfg.meta,
                                   cfg.workers, self.log)
        self.state = CurriculumState(cfg.bounds,
                                     replace(cfg.sampler, seed=self.seed),
                                     ScoreTable(cfg.bounds,
                                                cfg.sampler.d_tau_bin))
        self.theta = self.policy.init(task_rng(self.seed, INIT_STREAM))
        self.start_epoch = 0
        self.runlog = RunLog(self.directory, cfg.dimension,
                             partitions=self.method.uses_partition,
                             curves=self.method.uses_scores)

    def __repr__(self):
        return '<SeedRun {} seed={}>'.format(self.method.name, self.seed)

    # Checkpoints

    def checkpoint_data(self, epoch):
        state = self.state
        return {
            'method': self.method.name,
            'seed': self.seed,
            'epoch': epoch,
            'architecture': self.policy.architecture(),
            'theta': self.theta.tolist(),
            'rng': {'seed': self.seed, 'next_epoch': epoch + 1,
                    'streams': [INIT_STREAM, SAMPLE_STREAM, TRAIN_STREAM,
                                GRID_STREAM]},
            'partition': state.partition.to_dict()
                         if state.partition is not None else None,
            'schedule': [state.schedule.n_epoch, state.schedule.n_interval,
                         state.schedule.d_tau]
                        if state.schedule is not None else None,
            'scores': state.table.to_list(),
            'config': self.cfg.to_dict(),
        }

    def save_checkpoint(self, epoch):
        path = save_checkpoint(checkpoint_path(self.runlog.checkpoint_dir,
                                               epoch),
                               self.checkpoint_data(epoch))
        self.log.info("Checkpoint written: %s", path)
        return path

    def restore(self, data):
        """Continue from a checkpoint written by `save_checkpoint`."""
        if data['method'] != self.method.name or data['seed'] != self.seed:
            raise InputError("Checkpoint belongs to {} seed {}, not {} seed "
                             "{}".format(data['method'], data['seed'],
                                         self.method.name, self.seed))
        if data['architecture'] != self.policy.architecture():
            raise InputError("Checkpoint policy architecture does not match "
                             "the experiment")
        self.theta = np.array(data['theta'], dtype=float)
        self.state.table.load(data['scores'])
        if data['partition'] is not None:
            self.state.partition = RegionPartition.from_dict(
                data['partition'])
            self.state.schedule = Schedule(*data['schedule'])
        self.start_epoch = int(data['epoch']) + 1
        return self

    # Training

    def run_epoch(self, epoch):
        started = time.perf_counter()
        state = self.state
        if epoch >= 1 and state.partition is not None:
            partition = advance(state.partition, state.schedule, epoch)
            if partition.n_changes != state.partition.n_changes:
                self.log.info("Epoch %d: regions moved to easy %s, "
                              "middle %s", epoch, partition.easy,
                              partition.middle)
            state.partition = partition

        plan, curve = self.method.plan(state, epoch,
                                       state.sampler.rng(epoch))
        theta = self.theta
        self.theta, scores = self.learner.meta_update(
            self.theta, plan, (self.seed, TRAIN_STREAM, epoch))
        state.table.extend(epoch, scores)

        if epoch == 0 and self.method.uses_partition:
            tau_mean = estimate_tau_mean(self.grid_scores(theta, plan))
            state.schedule = Schedule.create(self.cfg.n_epoch,
                                             self.cfg.n_interval, tau_mean,
                                             self.cfg.bounds)
            state.partition = initial_partition(tau_mean, state.schedule,
                                                self.cfg.bounds)
            self.log.info("tau_mean = %s, initial regions: easy %s, middle "
                          "%s", fmt_num(tau_mean), state.partition.easy,
                          state.partition.middle)

        record = EpochRecord(epoch, plan, scores, state.partition, curve,
                             time.perf_counter() - started)
        self.runlog.write_run(epoch, plan, scores)
        if curve is not None:
            self.runlog.write_curve(epoch, curve, probability(curve))
        if state.partition is not None:
            self.runlog.write_partition(epoch, state.partition)
        self.runlog.write_epoch(epoch, len(plan), scores, record.wall_time)
        for participant in self.experiment.participants:
            participant.epoch_finished(self, record)
        return record

    def grid_scores(self, theta, plan):
        """Scores of the epoch-0 grid tasks under the initial policy.

        Every task is rolled out with the same random stream, so the scores
        differ only through the task and single noisy adaptation steps
        cannot move `tau_mean`.
        """
        key = (self.seed, GRID_STREAM)
        values = self.learner.map_tasks(
            lambda task: self.learner.score(theta, task, key), plan.taus)
        return [(task_key(task), value)
                for task, value in zip(plan.taus, values)]

    def train(self):
        """Run the remaining epochs. On failure a checkpoint of the last
        completed epoch is written before the error propagates.
        """
        self.runlog.open(self.start_epoch - 1 if self.start_epoch else None)
        save_config(self.cfg.override(method=self.method.name,
                                      seeds=(self.seed,)),
                    os.path.join(self.directory, CONFIG_FILE))
        for participant in self.experiment.participants:
            participant.run_started(self)
        last = self.cfg.n_epoch - 1
        epoch = self.start_epoch
        try:
            for epoch in range(self.start_epoch, self.cfg.n_epoch):
                self.run_epoch(epoch)
                if epoch == last or (epoch + 1) % self.cfg.checkpoint_every \
                        == 0:
                    self.save_checkpoint(epoch)
        except GuidedMetaError as e:
            self.log.error("Run %r aborted at epoch %d: %s", self, epoch, e)
            if epoch > 0:
                self.save_checkpoint(epoch - 1)
            raise
        finally:
            for participant in self.experiment.participants:
                participant.run_finished(self)
        return self.theta

    def evaluate(self):
        cfg = self.cfg
        sweep = evaluate_sweep(self.learner, self.theta, cfg.test_bounds,
                               cfg.test_step, self.seed)
        summary = summary_report(sweep, cfg)
        write_sweep(os.path.join(self.directory, SWEEP_FILE), sweep)
        write_json(os.path.join(self.directory, SUMMARY_FILE), summary)
        return sweep, summary

    def run(self):
        self.train()
        sweep, summary = self.evaluate()
        return SeedResult(self.seed, self.directory, self.theta, sweep,
                          summary)


def summary_report(sweep, cfg):
    """Post- and pre-adaptation summaries of a sweep as a JSON document."""
    ranges = [r for r in cfg.ranges if _covers(sweep, r)]
    points = [p for p in cfg.bias_points if _on_grid(sweep, p)]
    post = summarize(sweep, ranges, points, 'post', cfg.symbol)
    pre = summarize(sweep, ranges, points, 'pre', cfg.symbol)
    return {'post_adaptation': post.to_report(),
            'pre_adaptation': pre.to_report()}


def _covers(sweep, bounds):
    d = sweep.difficulties
    tol = 0.5 * sweep.step + 1e-9
    return d[0] - tol <= bounds[0] <= bounds[1] <= d[-1] + tol


def _on_grid(sweep, point):
    try:
        nearest_index(sweep, point)
    except InputError:
        return False
    return True


def run_seed(experiment, cfg, seed, method=None, resume=None):
    run = SeedRun(experiment, cfg, seed, method)
    if resume is not None:
        run.restore(resume)
    return run.run()


def run_experiment(experiment, cfg=None, resume=None):
    """Train and evaluate every seed of the configured method.

    :param resume: checkpoint path; only the run it belongs to is
                   continued
    :return: an `ExperimentResult` with the seed-averaged sweep
    """
    if resume is not None:
        data = load_checkpoint(resume)
        cfg = ExperimentConfig.from_dict(data['config'])
        cfg = cfg.override(seeds=(data['seed'],), method=data['method'])
        results = [run_seed(experiment, cfg, data['seed'], resume=data)]
    else:
        cfg = cfg or experiment.resolve()
        results = [run_seed(experiment, cfg, seed) for seed in cfg.seeds]

    method_dir = ensure_dir(cfg.method_dir())
    sweep = average_sweeps([r.sweep for r in results],
                           [r.seed for r in results])
    summary = summary_report(sweep, cfg)
    if resume is None:
        write_sweep(os.path.join(method_dir, SWEEP_FILE), sweep)
        write_json(os.path.join(method_dir, SUMMARY_FILE), summary)
        save_config(cfg, os.path.join(method_dir, CONFIG_FILE))
    experiment.log.info("%s: %s", cfg.method, summary['post_adaptation'])
    return ExperimentResult(cfg, results, sweep, summary)


def evaluate_checkpoint(experiment, path, test_bounds=None, step=None,
                        output=None):
    """Evaluate the policy of a checkpoint over a task sweep.

    Defaults come from the configuration stored in the checkpoint. Writes
    `sweep.csv` and `summary.json` to `output` when given.
    """
    data = load_checkpoint(path)
    cfg = ExperimentConfig.from_dict(data['config'])
    if test_bounds is not None:
        cfg = cfg.override(test_bounds=cfg.test_bounds.with_range(
            *test_bounds))
    if step is not None:
        cfg = cfg.override(test_step=float(step))
    run = SeedRun(experiment, cfg, data['seed'], data['method'])
    run.restore(data)
    sweep = evaluate_sweep(run.learner, run.theta, cfg.test_bounds,
                           cfg.test_step, run.seed)
    summary = summary_report(sweep, cfg)
    if output:
        ensure_dir(output)
        write_sweep(os.path.join(output, SWEEP_FILE), sweep)
        write_json(os.path.join(output, SUMMARY_FILE), summary)
    return sweep, summary


def _sweep_path(directory):
    path = os.path.join(directory, SWEEP_FILE)
    if not os.path.isfile(path):
        raise InputError("No {} in {}".format(SWEEP_FILE, directory))
    return path


def compare_runs(dir_a, dir_b, ranges, bias_points, symbol='v'):
    """Side-by-side robustness summaries of two run directories (method
    level or seed level) and the per-task score deltas `a - b`.
    """
    sweep_a = read_sweep(_sweep_path(dir_a))
    sweep_b = read_sweep(_sweep_path(dir_b))
    report = compare_summaries(sweep_a, sweep_b, ranges, bias_points, symbol)
    report['a_dir'], report['b_dir'] = dir_a, dir_b
    return report


def epoch_scaling(experiment, cfg, n_epochs, points=None, methods=None):
    """Seed-averaged post-adaptation scores at fixed tasks for several
    training lengths.

    Each `(method, n_epoch)` pair is a full experiment written below
    `<outdir>/epochs-<n_epoch>/`. Returns the table rows and writes them to
    `<outdir>/scaling.csv`.
    """
    points = list(points if points is not None else cfg.track_points)
    methods = list(methods or (cfg.method,))
    rows = []
    for method in methods:
        for n_epoch in n_epochs:
            sub = cfg.override(
                method=method, n_epoch=int(n_epoch),
                outdir=os.path.join(cfg.outdir, 'epochs-{}'.format(n_epoch)))
            result = run_experiment(experiment, sub)
            scores = result.sweep.scores('post')
            row = {'method': method, 'n_epoch': int(n_epoch)}
            for p in points:
                key = 'score_at_{}'.format(fmt_num(p))
                row[key] = ''
                if _on_grid(result.sweep, p):
                    row[key] = float(scores[nearest_index(result.sweep, p)])
            rows.append(row)
    ensure_dir(cfg.outdir)
    header = ['method', 'n_epoch'] + ['score_at_{}'.format(fmt_num(p))
                                      for p in points]
    write_table(os.path.join(cfg.outdir, SCALING_FILE), header, rows)
    return rows


class EpochLogger(Component):
    """Reports training progress through the experiment log."""

    implements(IExperimentParticipant)

    def run_started(self, run):
        self.log.info("Training %s seed %d from epoch %d in %s",
                      run.method.name, run.seed, run.start_epoch,
                      run.directory)

    def epoch_finished(self, run, record):
        values = [r for _, r in record.scores]
        self.log.info("Epoch %d: %d/%d tasks, mean r_mean %.3f, %.2fs",
                      record.epoch, len(values), len(record.plan),
                      float(np.mean(values)), record.wall_time)

    def run_finished(self, run):
        self.log.info("Finished %s seed %d", run.method.name, run.seed)
