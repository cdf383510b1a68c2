# -*- coding: utf-8 -*-

"""Batch assembly for one meta-epoch.

Epoch 0 is an evenly spaced grid over the task bounds. Later batches take
half of their tasks from the easy region and the other half from the
middle region, drawing bins from the score-derived distribution, jittering
each bin center inside its bin and clamping it into its region.
"""

import math
from dataclasses import dataclass

import numpy as np

from guidedmeta.core import InputError
from guidedmeta.regions import EASY, MIDDLE, IntervalSet
from guidedmeta.taskspace import difficulty, lift, uniform_task

GRID = 'grid'
UNIFORM = 'uniform'

# Random stream identifier of the batch draws, combined with seed and epoch
SAMPLE_STREAM = 2

# Spreads 2D grid goals over all directions without randomness
GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


@dataclass(frozen=True)
class SamplerConfig(object):
    n_batch: int
    delta: float = 0.1
    d_tau_bin: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n_batch < 2:
            raise InputError("n_batch must be at least 2, got {}"
                             .format(self.n_batch))
        if not 0.0 <= self.delta <= 1.0:
            raise InputError("delta must lie in [0, 1], got {}"
                             .format(self.delta))
        if not self.d_tau_bin > 0:
            raise InputError("d_tau_bin must be positive")

    def rng(self, epoch):
        """Generator for the batch draws of `epoch` under `seed`."""
        return np.random.default_rng(np.random.SeedSequence(
            [int(self.seed), SAMPLE_STREAM, int(epoch)]))


@dataclass(frozen=True, eq=False)
class SamplingPlan(object):
    """Tasks of one epoch with the label of the region they came from."""

    epoch: int
    tasks: tuple

    def __len__(self):
        return len(self.tasks)

    def __iter__(self):
        return iter(self.tasks)

    @property
    def taus(self):
        return [tau for tau, _ in self.tasks]

    @property
    def labels(self):
        return [label for _, label in self.tasks]

    @property
    def difficulties(self):
        return np.array([difficulty(tau) for tau, _ in self.tasks])

    def count(self, label):
        return sum(1 for _, l in self.tasks if l == label)


def epoch0_grid(bounds, n_batch, epoch=0):
    """`n_batch` tasks evenly spaced over the bounds, endpoints included."""
    if n_batch < 2:
        raise InputError("n_batch must be at least 2, got {}"
                         .format(n_batch))
    lo, hi = bounds.difficulty_bounds()
    values = np.linspace(lo, hi, n_batch)
    if bounds.dimension == 1:
        tasks = [np.array([v]) for v in values]
    else:
        tasks = [np.array([v * math.cos(i * GOLDEN_ANGLE),
                           v * math.sin(i * GOLDEN_ANGLE)])
                 for i, v in enumerate(values)]
    return SamplingPlan(epoch, tuple((tau, GRID) for tau in tasks))


def uniform_plan(bounds, n_batch, rng, epoch=0):
    """`n_batch` tasks drawn uniformly over the whole task distribution."""
    return SamplingPlan(epoch, tuple((uniform_task(bounds, rng), UNIFORM)
                                     for _ in range(n_batch)))


def draw_difficulties(region, dist, n, delta, rng):
    """`n` difficulty values from `region`.

    Each draw is uniform over the region with probability `delta`,
    otherwise a bin picked from `dist` restricted to the region, jittered
    by up to half a bin width and clamped back into the region. A missing
    `dist`, or one without mass in the region, means uniform draws.
    """
    if n <= 0:
        return np.empty(0)
    weights = None
    if dist is not None:
        weights = dist.restrict(region.contains(dist.centers))
    if weights is None:
        return region.uniform(rng, size=n)

    use_uniform = rng.random(n) < delta
    draws = np.empty(n)
    n_uniform = int(use_uniform.sum())
    if n_uniform:
        draws[use_uniform] = region.uniform(rng, size=n_uniform)
    n_bins = n - n_uniform
    if n_bins:
        picked = dist.centers[rng.choice(dist.centers.size, size=n_bins,
                                         p=weights)]
        half = 0.5 * dist.width
        jittered = picked + rng.uniform(-half, half, size=n_bins)
        for interval in region:
            inside = interval.contains(picked)
            jittered[inside] = interval.clamp(jittered[inside])
        draws[~use_uniform] = jittered
    return draws


def _split_counts(partition, n_batch):
    easy, middle = partition.easy, partition.middle
    if middle.empty:
        return n_batch, 0
    if easy.empty:
        return 0, n_batch
    n_easy = int(math.ceil(n_batch / 2.0))
    return n_easy, n_batch - n_easy


def sample_batch(partition, dist, config, rng, epoch=None):
    """Tasks for one epoch drawn inside the easy and middle regions.

    `dist` is a `BinDistribution` (or `None` for uniform draws inside the
    regions). In the symmetric case the middle draws are split evenly
    between the negative and the positive lobe.
    """
    n_easy, n_middle = _split_counts(partition, config.n_batch)
    labelled = [(d, EASY) for d in draw_difficulties(
        partition.easy, dist, n_easy, config.delta, rng)]

    middle = partition.middle
    if partition.bounds.symmetric and len(middle) == 2:
        negative, positive = middle.intervals
        n_negative = n_middle // 2
        lobes = ((negative, n_negative), (positive, n_middle - n_negative))
    else:
        lobes = ((middle, n_middle),)
    for lobe, count in lobes:
        if not count:
            continue
        lobe = lobe if isinstance(lobe, IntervalSet) else IntervalSet((lobe,))
        labelled.extend((d, MIDDLE) for d in draw_difficulties(
            lobe, dist, count, 0.0, rng))

    dimension = partition.bounds.dimension
    tasks = tuple((lift(d, dimension, rng), label) for d, label in labelled)
    return SamplingPlan(epoch if epoch is not None else -1, tasks)
