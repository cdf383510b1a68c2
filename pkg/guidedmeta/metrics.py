# -*- coding: utf-8 -*-

"""Robustness of a meta-policy across a task sweep.

A sweep evaluates the meta-policy on a fine grid of tasks, before and
after one adaptation step. Summaries report the highest score and where
it is reached, mean and population variance over task ranges, bias
scores (score minus the sweep maximum, so always <= 0) and the smallest
task with a negative score.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from guidedmeta.core import InputError
from guidedmeta.sampler import GOLDEN_ANGLE
from guidedmeta.taskspace import difficulty, task_key
from guidedmeta.util import fmt_num, snake_key

EVAL_STREAM = 7


@dataclass(frozen=True)
class SweepEntry(object):
    task: tuple
    post: float
    pre: float

    @property
    def difficulty(self):
        return difficulty(self.task)


@dataclass(frozen=True, eq=False)
class SweepResult(object):
    """Sweep entries sorted by difficulty.

    `per_seed` optionally holds the post-adaptation score of every seed
    (one row per entry) when the sweep is a seed average.
    """

    entries: tuple
    step: float = 0.05
    per_seed: dict = field(default_factory=dict)

    def __post_init__(self):
        d = [e.difficulty for e in self.entries]
        if any(b <= a for a, b in zip(d, d[1:])):
            raise InputError("Sweep tasks must be strictly increasing in "
                             "difficulty")

    def __len__(self):
        return len(self.entries)

    @property
    def difficulties(self):
        return np.array([e.difficulty for e in self.entries])

    def scores(self, which='post'):
        return np.array([getattr(e, which) for e in self.entries])

    def shifted(self, offset):
        """Copy with `offset` added to every score."""
        return SweepResult(tuple(SweepEntry(e.task, e.post + offset,
                                            e.pre + offset)
                                 for e in self.entries), self.step)


def sweep_grid(lo, hi, step):
    """Evenly spaced grid from `lo` to `hi` with spacing close to `step`."""
    if not step > 0:
        raise InputError("Sweep step must be positive, got {}".format(step))
    if not hi > lo:
        raise InputError("Sweep bounds must satisfy lo < hi")
    n = max(1, int(round((hi - lo) / step)))
    return np.linspace(lo, hi, n + 1)


def sweep_tasks(test_bounds, step):
    values = sweep_grid(test_bounds.tau_min, test_bounds.tau_max, step)
    if test_bounds.dimension == 1:
        return [np.array([v]) for v in values]
    return [np.array([v * math.cos(i * GOLDEN_ANGLE),
                      v * math.sin(i * GOLDEN_ANGLE)])
            for i, v in enumerate(values)]


def evaluation_key(seed, tau):
    """Random-stream key of an evaluation task, derived from its value."""
    d = difficulty(tau)
    return (int(seed), EVAL_STREAM, 2 * int(round(abs(d) * 1e6)) + (d < 0))


def evaluate_sweep(learner, theta, test_bounds, step, seed=0):
    """Pre- and post-adaptation scores of `theta` over a task grid.

    Every task adapts from `theta`; the meta-parameters are never changed.
    Test bounds may extend past the training bounds.
    """
    tasks = sweep_tasks(test_bounds, step)

    def run(tau):
        pre, post = learner.evaluate_task(theta, tau,
                                          evaluation_key(seed, tau))
        return SweepEntry(task_key(tau), post, pre)

    return SweepResult(tuple(learner.map_tasks(run, tasks)), float(step))


def nearest_index(sweep, tau):
    if not len(sweep):
        raise InputError("Empty sweep")
    d = sweep.difficulties
    target = difficulty(tau) if np.ndim(tau) else float(tau)
    idx = int(np.argmin(np.abs(d - target)))
    if abs(d[idx] - target) > 0.5 * sweep.step + 1e-9:
        raise InputError("Task {} is not on the sweep grid".format(target))
    return idx


def bias_score(sweep, tau, which='post'):
    """Score at `tau` minus the highest score of the sweep."""
    idx = nearest_index(sweep, tau)
    scores = sweep.scores(which)
    return float(scores[idx] - scores.max())


def _in_range(sweep, lo, hi):
    d = sweep.difficulties
    tol = 0.5 * sweep.step + 1e-9
    if lo < d[0] - tol or hi > d[-1] + tol or lo > hi:
        raise InputError("Range [{}, {}] is outside the sweep [{}, {}]"
                         .format(lo, hi, d[0], d[-1]))
    return (d >= lo - 1e-9) & (d <= hi + 1e-9)


@dataclass(frozen=True)
class RobustnessSummary(object):
    highest_score: float
    tau_at_highest: float
    means: tuple
    variances: tuple
    biases: tuple
    min_negative_tau: float = None
    symbol: str = 'v'

    def rows(self):
        """`(label, value)` pairs in report order."""
        s = self.symbol
        rows = [('highest score', self.highest_score),
                ('{} in highest score'.format(s), self.tau_at_highest)]
        for (lo, hi), value in self.means:
            rows.append(('mean value ({}: [{},{}])'.format(
                s, fmt_num(lo), fmt_num(hi)), value))
        for (lo, hi), value in self.variances:
            rows.append(('variance value ({}: [{},{}])'.format(
                s, fmt_num(lo), fmt_num(hi)), value))
        for point, value in self.biases:
            rows.append(('bias score at {}={}'.format(s, fmt_num(point)),
                         value))
        rows.append(('min {} with negative reward'.format(s),
                     'none' if self.min_negative_tau is None
                     else self.min_negative_tau))
        return rows

    def to_report(self):
        return {snake_key(label): value for label, value in self.rows()}


def summarize(sweep, ranges, bias_points, which='post', symbol='v'):
    if not len(sweep):
        raise InputError("Empty sweep")
    scores = sweep.scores(which)
    d = sweep.difficulties
    best = int(np.argmax(scores))
    means, variances = [], []
    for lo, hi in ranges:
        selected = scores[_in_range(sweep, lo, hi)]
        means.append(((lo, hi), float(np.mean(selected))))
        variances.append(((lo, hi), float(np.var(selected))))
    biases = tuple((p, bias_score(sweep, p, which)) for p in bias_points)
    negative = d[scores < 0]
    return RobustnessSummary(
        float(scores[best]), float(d[best]), tuple(means), tuple(variances),
        biases, float(negative[0]) if negative.size else None, symbol)


def average_sweeps(sweeps, seeds=None):
    """Pointwise mean of sweeps evaluated on the same grid.

    The post-adaptation scores of each input are kept in `per_seed`.
    """
    if not sweeps:
        raise InputError("No sweeps to average")
    first = sweeps[0]
    for other in sweeps[1:]:
        if len(other) != len(first) or not np.allclose(
                other.difficulties, first.difficulties):
            raise InputError("Sweeps are not on the same grid")
    seeds = list(seeds) if seeds is not None else list(range(len(sweeps)))
    entries = []
    for i, entry in enumerate(first.entries):
        entries.append(SweepEntry(
            entry.task,
            math.fsum(s.entries[i].post for s in sweeps) / len(sweeps),
            math.fsum(s.entries[i].pre for s in sweeps) / len(sweeps)))
    per_seed = {seed: sweep.scores('post').tolist()
                for seed, sweep in zip(seeds, sweeps)}
    return SweepResult(tuple(entries), first.step, per_seed)


def compare_summaries(sweep_a, sweep_b, ranges, bias_points, symbol='v'):
    """Side-by-side summaries and `a - b` deltas of two sweeps."""
    if len(sweep_a) != len(sweep_b) or not np.allclose(
            sweep_a.difficulties, sweep_b.difficulties):
        raise InputError("Sweeps to compare must share the same task grid")
    report_a = summarize(sweep_a, ranges, bias_points,
                         symbol=symbol).to_report()
    report_b = summarize(sweep_b, ranges, bias_points,
                         symbol=symbol).to_report()
    deltas = {}
    for key, value in report_a.items():
        other = report_b[key]
        if isinstance(value, float) and isinstance(other, float):
            deltas[key] = value - other
    per_task = [{'tau': fmt_num(d), 'delta': a - b}
                for d, a, b in zip(sweep_a.difficulties,
                                   sweep_a.scores('post'),
                                   sweep_b.scores('post'))]
    return {'a': report_a, 'b': report_b, 'deltas': deltas,
            'per_task': per_task}
