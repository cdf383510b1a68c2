# -*- coding: utf-8 -*-

"""Score bookkeeping and the sampling distribution derived from it.

Scores are mean total rewards per sampled task. They are grouped in bins of
width `d_tau_bin` along the difficulty axis, weighted by the epoch they were
recorded at, interpolated with a natural cubic spline, min-max normalized
and finally turned into a sampling probability that favours low scores.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from guidedmeta.core import InputError, StateError
from guidedmeta.taskspace import difficulty, task_key


def mean_total_reward(rollout_returns):
    """Arithmetic mean of per-rollout total rewards."""
    returns = [float(r) for r in rollout_returns]
    if not returns:
        raise InputError("mean_total_reward needs at least one rollout")
    return math.fsum(returns) / len(returns)


@dataclass(frozen=True)
class ScoreRecord(object):
    tau: tuple
    epoch: int
    r_mean: float

    @property
    def difficulty(self):
        return difficulty(self.tau)


class ScoreTable(object):
    """Append-only history of `ScoreRecord`s binned over the difficulty axis.

    The last bin is closed at the upper bound so that `tau_max` is counted.
    """

    def __init__(self, bounds, d_tau_bin):
        if not d_tau_bin > 0:
            raise InputError("d_tau_bin must be positive, got {}"
                             .format(d_tau_bin))
        self.bounds = bounds
        self.d_tau_bin = float(d_tau_bin)
        self.lo, self.hi = bounds.difficulty_bounds()
        self.n_bins = max(1, int(math.ceil((self.hi - self.lo) /
                                           self.d_tau_bin - 1e-9)))
        self.records = []
        self.current_epoch = 0

    def __len__(self):
        return len(self.records)

    @property
    def bin_edges(self):
        edges = self.lo + self.d_tau_bin * np.arange(self.n_bins + 1)
        edges[-1] = self.hi
        return edges

    @property
    def bin_centers(self):
        edges = self.bin_edges
        return 0.5 * (edges[:-1] + edges[1:])

    def bin_index(self, d):
        # tolerance keeps values on a bin edge (0.3 / 0.1) in the upper bin
        idx = np.floor((np.asarray(d, dtype=float) - self.lo) /
                       self.d_tau_bin + 1e-9).astype(int)
        idx = np.clip(idx, 0, self.n_bins - 1)
        return int(idx) if idx.ndim == 0 else idx

    def add(self, tau, epoch, r_mean):
        r_mean = float(r_mean)
        if not math.isfinite(r_mean):
            raise InputError("Score for task {} is not finite"
                             .format(task_key(tau)))
        if epoch < self.current_epoch:
            raise InputError("Scores must be recorded in epoch order "
                             "({} < {})".format(epoch, self.current_epoch))
        self.current_epoch = int(epoch)
        self.records.append(ScoreRecord(task_key(tau), int(epoch), r_mean))

    def extend(self, epoch, scores):
        for tau, r_mean in scores:
            self.add(tau, epoch, r_mean)

    def bin_scores(self):
        """Epoch-weighted score of every bin, `nan` where a bin is empty."""
        scores = np.full(self.n_bins, np.nan)
        if not self.records:
            return scores
        idx = self.bin_index([r.difficulty for r in self.records])
        weighted = np.array([r.epoch * r.r_mean for r in self.records])
        counts = np.bincount(idx, minlength=self.n_bins)
        sums = np.bincount(idx, weights=weighted, minlength=self.n_bins)
        filled = counts > 0
        scores[filled] = sums[filled] / counts[filled]
        return scores

    def to_list(self):
        return [[list(r.tau), r.epoch, r.r_mean] for r in self.records]

    def load(self, rows):
        for tau, epoch, r_mean in rows:
            self.add(tau, epoch, r_mean)
        return self


def weighted_bin_score(table, bin_start):
    """Epoch-weighted mean score of the bin starting at `bin_start`.

    Every record contributes `epoch * r_mean`, the sum is divided by the
    number of records in the bin. Returns `None` when the bin is empty.
    """
    idx = table.bin_index(bin_start + 0.5 * table.d_tau_bin)
    members = [r for r in table.records
               if table.bin_index(r.difficulty) == idx]
    if not members:
        return None
    return math.fsum(r.epoch * r.r_mean for r in members) / len(members)


@dataclass(frozen=True, eq=False)
class ScoreCurve(object):
    centers: np.ndarray
    knots_x: np.ndarray
    knots_y: np.ndarray
    values: np.ndarray
    f_bar: np.ndarray
    width: float
    interpolant: CubicSpline = field(repr=False, compare=False)
    normalized: bool = True

    def __call__(self, x):
        """Spline value at `x`, constant beyond the outermost knots."""
        x = np.clip(np.asarray(x, dtype=float), self.knots_x[0],
                    self.knots_x[-1])
        return self.interpolant(x)


def normalize(values):
    """Min-max normalization to [0, 1]; a flat input maps to 0.5."""
    values = np.asarray(values, dtype=float)
    lo, hi = values.min(), values.max()
    if hi - lo <= 0:
        return np.full(values.shape, 0.5)
    return (values - lo) / (hi - lo)


def build_curve(table):
    """Interpolated, normalized score curve over all bin centers."""
    scores = table.bin_scores()
    filled = ~np.isnan(scores)
    if filled.sum() < 2:
        raise StateError("At least two scored bins are needed to build a "
                         "curve, got {}".format(int(filled.sum())))
    centers = table.bin_centers
    knots_x, knots_y = centers[filled], scores[filled]
    spline = CubicSpline(knots_x, knots_y, bc_type='natural')
    values = spline(np.clip(centers, knots_x[0], knots_x[-1]))
    values = np.clip(values, knots_y.min(), knots_y.max())
    return ScoreCurve(centers, knots_x, knots_y, values, normalize(values),
                      table.d_tau_bin, spline)


@dataclass(frozen=True, eq=False)
class BinDistribution(object):
    """Discrete distribution over bin centers."""

    centers: np.ndarray
    p: np.ndarray
    width: float

    def restrict(self, mask):
        """Probabilities renormalized to the bins selected by `mask`.

        Returns `None` if the selection carries no mass.
        """
        weights = np.where(mask, self.p, 0.0)
        total = weights.sum()
        if not total > 0:
            return None
        return weights / total


def probability(curve):
    """Sampling probability `(1 - f_bar) / sum(1 - f_bar)` per bin.

    Falls back to the uniform distribution when every bin is at the
    maximum score.
    """
    weights = 1.0 - np.asarray(curve.f_bar, dtype=float)
    total = weights.sum()
    if not total > 0:
        p = np.full(weights.shape, 1.0 / weights.size)
    else:
        p = weights / total
    return BinDistribution(np.asarray(curve.centers), p, curve.width)


def uniform_distribution(table):
    n = table.n_bins
    return BinDistribution(table.bin_centers, np.full(n, 1.0 / n),
                           table.d_tau_bin)
