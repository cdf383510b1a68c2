# -*- coding: utf-8 -*-

"""Task parameters, task-distribution bounds and the difficulty axis.

A task is a numpy vector of dimension 1 (target velocity) or 2 (goal
position). Region scheduling and scoring work on a scalar difficulty
coordinate: the value itself in 1D, the Euclidean norm in 2D. In 2D the
bounds describe the disc (or annulus) `tau_min <= |tau| <= tau_max`.
"""

import math
from dataclasses import dataclass

import numpy as np

from guidedmeta.core import InputError

DIMENSIONS = (1, 2)


@dataclass(frozen=True)
class TaskBounds(object):
    """Closed range `[tau_min, tau_max]` of the task distribution."""

    tau_min: float
    tau_max: float
    dimension: int = 1

    def __post_init__(self):
        if self.dimension not in DIMENSIONS:
            raise InputError("Unsupported task dimension {}"
                             .format(self.dimension))
        if not (math.isfinite(self.tau_min) and math.isfinite(self.tau_max)):
            raise InputError("Task bounds must be finite")
        if not self.tau_min < self.tau_max:
            raise InputError("tau_min ({}) must be smaller than tau_max ({})"
                             .format(self.tau_min, self.tau_max))
        if self.tau_min < 0:
            if self.dimension != 1:
                raise InputError("Negative tau_min is only valid for 1D "
                                 "task spaces")
            if self.tau_min != -self.tau_max:
                raise InputError("Bounds with a negative tau_min must be "
                                 "symmetric (tau_min = -tau_max), got "
                                 "[{}, {}]".format(self.tau_min,
                                                   self.tau_max))

    @property
    def symmetric(self):
        return self.tau_min < 0 and self.tau_min == -self.tau_max

    @property
    def span(self):
        return self.tau_max - self.tau_min

    def difficulty_bounds(self):
        """Bounds of the difficulty coordinate.

        Identical to the task bounds: in 1D the axis is the task value, in
        2D it is the radius and the bounds already are radial.
        """
        return self.tau_min, self.tau_max

    def with_range(self, tau_min, tau_max):
        return TaskBounds(float(tau_min), float(tau_max), self.dimension)

    def to_dict(self):
        return {'tau_min': self.tau_min, 'tau_max': self.tau_max,
                'dimension': self.dimension}

    @classmethod
    def from_dict(cls, data):
        return cls(float(data['tau_min']), float(data['tau_max']),
                   int(data.get('dimension', 1)))


def as_task(value, dimension=None):
    """Return `value` as a finite float task vector.

    Scalars become 1D tasks. If `dimension` is given, it must match.
    """
    tau = np.atleast_1d(np.asarray(value, dtype=float))
    if tau.ndim != 1 or tau.shape[0] not in DIMENSIONS:
        raise InputError("Task parameters must be 1D or 2D vectors, got "
                         "shape {}".format(tau.shape))
    if dimension is not None and tau.shape[0] != dimension:
        raise InputError("Task dimension mismatch: expected {}, got {}"
                         .format(dimension, tau.shape[0]))
    if not np.all(np.isfinite(tau)):
        raise InputError("Task parameters must be finite: {}"
                         .format(tau.tolist()))
    return tau


def difficulty(tau):
    """Scalar difficulty of a task: identity in 1D, Euclidean norm in 2D."""
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if tau.shape[0] == 1:
        return float(tau[0])
    return float(math.hypot(tau[0], tau[1]))


def contains(bounds, tau):
    """Whether `tau` lies inside `bounds` (closed at both ends).

    Raises `InputError` on a dimension mismatch.
    """
    tau = as_task(tau, bounds.dimension)
    d = difficulty(tau)
    return bounds.tau_min <= d <= bounds.tau_max


def lift(d, dimension, rng):
    """Turn a difficulty value back into a task.

    1D returns the value itself. 2D returns the point at radius `d` in a
    direction drawn uniformly at random from `rng`.
    """
    if dimension == 1:
        return np.array([float(d)])
    if dimension != 2:
        raise InputError("Unsupported task dimension {}".format(dimension))
    angle = rng.uniform(0.0, 2.0 * math.pi)
    return np.array([d * math.cos(angle), d * math.sin(angle)])


def uniform_task(bounds, rng):
    """Draw one task uniformly from the task distribution.

    2D draws are uniform over the area of the disc (or annulus).
    """
    if bounds.dimension == 1:
        return np.array([rng.uniform(bounds.tau_min, bounds.tau_max)])
    radius = math.sqrt(rng.uniform(bounds.tau_min ** 2, bounds.tau_max ** 2))
    return lift(radius, 2, rng)


def task_key(tau):
    """Hashable, order-stable representation of a task."""
    return tuple(float(x) for x in np.atleast_1d(tau))
