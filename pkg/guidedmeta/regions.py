# -*- coding: utf-8 -*-

"""Easy / middle / difficult task regions and their epoch-driven expansion.

Regions live on the difficulty axis. With non-negative bounds
`[tau_min, tau_max]` they are::

    easy      = [tau_min, tau_middle1)
    middle    = [tau_middle1, tau_middle2)
    difficult = [tau_middle2, tau_max]

With symmetric bounds `[-tau_max, tau_max]` every region is mirrored
around zero (`easy` is the open interval `(-tau_middle1, tau_middle1)`).
A boundary that reached `tau_max` closes the region below it, so that the
three regions always cover the whole range.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from guidedmeta.core import InputError, StateError
from guidedmeta.taskspace import TaskBounds, difficulty

EASY = 'easy'
MIDDLE = 'middle'
DIFFICULT = 'difficult'


@dataclass(frozen=True)
class Interval(object):
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = False

    @property
    def empty(self):
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    @property
    def measure(self):
        return 0.0 if self.empty else self.hi - self.lo

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        result = np.logical_and(above, below)
        return bool(result) if result.ndim == 0 else result

    def clamp(self, x):
        """Clip `x` into the interval, open ends included."""
        lo = self.lo if self.lo_closed else np.nextafter(self.lo, self.hi)
        hi = self.hi if self.hi_closed else np.nextafter(self.hi, self.lo)
        return np.clip(x, lo, hi)

    def __str__(self):
        return '{}{:g}, {:g}{}'.format('[' if self.lo_closed else '(',
                                       self.lo, self.hi,
                                       ']' if self.hi_closed else ')')


@dataclass(frozen=True)
class IntervalSet(object):
    """Finite union of disjoint intervals."""

    intervals: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, 'intervals', tuple(
            i for i in self.intervals if not i.empty))

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __str__(self):
        return ' U '.join(str(i) for i in self.intervals) or '{}'

    @property
    def empty(self):
        return not self.intervals

    @property
    def measure(self):
        return sum(i.measure for i in self.intervals)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        result = np.zeros(x.shape, dtype=bool)
        for interval in self.intervals:
            result |= interval.contains(x)
        return bool(result) if result.ndim == 0 else result

    def interval_of(self, x):
        """The interval holding `x`, or the nearest one."""
        if self.empty:
            raise StateError("Empty region")
        for interval in self.intervals:
            if interval.contains(x):
                return interval
        return min(self.intervals,
                   key=lambda i: min(abs(x - i.lo), abs(x - i.hi)))

    def clamp(self, x):
        return float(self.interval_of(x).clamp(x))

    def uniform(self, rng, size=None):
        """Uniform draws over the set, intervals weighted by length."""
        if self.empty:
            raise StateError("Cannot sample from an empty region")
        n = 1 if size is None else size
        measures = np.array([i.measure for i in self.intervals])
        if measures.sum() > 0:
            weights = measures / measures.sum()
        else:
            weights = np.full(len(self.intervals), 1.0 / len(self.intervals))
        which = rng.choice(len(self.intervals), size=n, p=weights)
        draws = np.empty(n)
        for k, interval in enumerate(self.intervals):
            mask = which == k
            draws[mask] = interval.clamp(
                rng.uniform(interval.lo, interval.hi, size=int(mask.sum())))
        return float(draws[0]) if size is None else draws


@dataclass(frozen=True)
class Schedule(object):
    """When and by how much the region boundaries move."""

    n_epoch: int
    n_interval: int
    d_tau: float = 0.0

    def __post_init__(self):
        if self.n_epoch < 1 or self.n_interval < 1:
            raise InputError("n_epoch and n_interval must be positive")
        if self.d_tau < 0:
            raise InputError("d_tau must not be negative")

    @classmethod
    def create(cls, n_epoch, n_interval, tau_mean, bounds):
        tau_mean = _magnitude(tau_mean, bounds)
        return cls(n_epoch, n_interval,
                   (bounds.tau_max - tau_mean) / n_interval)

    @property
    def first_change(self):
        """First epoch at or after half of the training."""
        return (self.n_epoch + 1) // 2

    @property
    def n_batch_epochs(self):
        return max(1, self.n_epoch // (2 * self.n_interval))

    def changes_until(self, epoch):
        """Number of boundary changes scheduled at or before `epoch`."""
        if epoch < self.first_change:
            return 0
        return min(self.n_interval,
                   (epoch - self.first_change) // self.n_batch_epochs + 1)

    def change_epochs(self):
        epochs = (self.first_change + k * self.n_batch_epochs
                  for k in range(self.n_interval))
        return [e for e in epochs if e < self.n_epoch]


@dataclass(frozen=True)
class RegionPartition(object):

    bounds: TaskBounds
    tau_mean: float
    d_tau: float
    n_interval: int
    tau_middle1: float
    tau_middle2: float
    n_changes: int = 0

    @property
    def easy(self):
        m1, top = self.tau_middle1, self.bounds.tau_max
        if self.bounds.symmetric:
            if m1 >= top:
                return IntervalSet((Interval(-top, top, True, True),))
            return IntervalSet((Interval(-m1, m1, False, False),))
        return IntervalSet((Interval(self.bounds.tau_min, m1, True,
                                     m1 >= top),))

    @property
    def middle(self):
        m1, m2, top = self.tau_middle1, self.tau_middle2, self.bounds.tau_max
        if m1 >= m2:
            return IntervalSet()
        closed = m2 >= top
        upper = Interval(m1, m2, m1 > 0 or not self.bounds.symmetric, closed)
        if self.bounds.symmetric:
            lower = Interval(-m2, -m1, closed, True)
            return IntervalSet((lower, upper))
        return IntervalSet((upper,))

    @property
    def difficult(self):
        m2, top = self.tau_middle2, self.bounds.tau_max
        if m2 >= top:
            return IntervalSet()
        if self.bounds.symmetric:
            return IntervalSet((Interval(-top, -m2, True, True),
                                Interval(m2, top, True, True)))
        return IntervalSet((Interval(m2, top, True, True),))

    def region(self, label):
        return {EASY: self.easy, MIDDLE: self.middle,
                DIFFICULT: self.difficult}[label]

    def region_of(self, d):
        """Label of the region holding difficulty `d`."""
        for label in (EASY, MIDDLE, DIFFICULT):
            if self.region(label).contains(d):
                return label
        raise InputError("Difficulty {} is outside the task bounds"
                         .format(d))

    def to_dict(self):
        return {'bounds': self.bounds.to_dict(), 'tau_mean': self.tau_mean,
                'd_tau': self.d_tau, 'n_interval': self.n_interval,
                'tau_middle1': self.tau_middle1,
                'tau_middle2': self.tau_middle2,
                'n_changes': self.n_changes}

    @classmethod
    def from_dict(cls, data):
        return cls(TaskBounds.from_dict(data['bounds']),
                   float(data['tau_mean']), float(data['d_tau']),
                   int(data['n_interval']), float(data['tau_middle1']),
                   float(data['tau_middle2']), int(data['n_changes']))


def _magnitude(tau_mean, bounds):
    value = abs(tau_mean) if bounds.symmetric else tau_mean
    lo = 0.0 if bounds.symmetric else bounds.tau_min
    if not lo <= value <= bounds.tau_max:
        raise InputError("tau_mean {} is outside the task bounds [{}, {}]"
                         .format(tau_mean, bounds.tau_min, bounds.tau_max))
    return value


def estimate_tau_mean(epoch0_scores):
    """Difficulty of the task whose score is closest to the mean score.

    `epoch0_scores` is a list of `(task, score)` pairs. Ties go to the task
    with the smaller difficulty magnitude.
    """
    if not epoch0_scores:
        raise StateError("Cannot estimate tau_mean without epoch-0 scores")
    pairs = [(difficulty(tau), float(score)) for tau, score in epoch0_scores]
    mean = math.fsum(score for _, score in pairs) / len(pairs)
    best = min(pairs, key=lambda p: (abs(p[1] - mean), abs(p[0]), p[0]))
    return best[0]


def _clamped(value, top):
    return min(value, top)


def _boundaries(tau_mean, d_tau, n_interval, top, n_changes):
    m1 = _clamped(tau_mean, top)
    m2 = _clamped(tau_mean + 0.5 * n_interval * (0.5 * d_tau), top)
    for _ in range(n_changes):
        m1 = m2
        m2 = _clamped(m2 + d_tau, top)
    return m1, m2


def initial_partition(tau_mean, schedule, bounds):
    """Partition right after the epoch-0 scores are known."""
    tau_mean = _magnitude(tau_mean, bounds)
    m1, m2 = _boundaries(tau_mean, schedule.d_tau, schedule.n_interval,
                         bounds.tau_max, 0)
    return RegionPartition(bounds, tau_mean, schedule.d_tau,
                           schedule.n_interval, m1, m2, 0)


def advance(partition, schedule, epoch):
    """Partition in effect at `epoch`.

    Applies exactly the boundary changes scheduled up to `epoch`, so calling
    it again for the same epoch (or any epoch between two change points)
    returns an equal partition.
    """
    n_changes = schedule.changes_until(epoch)
    if n_changes == partition.n_changes:
        return partition
    m1, m2 = _boundaries(partition.tau_mean, partition.d_tau,
                         partition.n_interval, partition.bounds.tau_max,
                         n_changes)
    return replace(partition, tau_middle1=m1, tau_middle2=m2,
                   n_changes=n_changes)


def full_partition(bounds):
    """Partition where the whole task distribution is easy."""
    top = bounds.tau_max
    return RegionPartition(bounds, top, 0.0, 1, top, top, 0)
