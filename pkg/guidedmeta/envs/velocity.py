# -*- coding: utf-8 -*-

"""One-dimensional point mass that has to run at a target velocity.

The task is the target velocity. The agent pushes with a force in
`[-1, 1]` against linear drag::

    v <- v + dt * (gain * a - drag * v)

and is rewarded with::

    r = -|v - v_target| + 1.0 + r_survive + r_action

where `v` is the velocity the agent runs with during the step,
`r_survive = 0.05` until the agent "fails to run" (its speed exceeds
`2 * max(|tau_max|, 1)`, after which the bonus is gone for the rest of the
episode) and `r_action = -0.01 * a**2`.
"""

from dataclasses import dataclass

import numpy as np

from guidedmeta.api import IEnvironmentProvider
from guidedmeta.core import Component, implements
from guidedmeta.envs.base import Environment

FORWARD_REWARD = 1.0
SURVIVE_REWARD = 0.05
ACTION_COST = 0.01
ACTION_LIMIT = 1.0


@dataclass(frozen=True)
class VelState(object):
    velocity: float = 0.0
    alive: bool = True


def fail_speed(bounds):
    return 2.0 * max(abs(bounds.tau_max), abs(bounds.tau_min), 1.0)


def velocity_dynamics(velocity, alive, action, v_target, spec, limit):
    """Vectorized transition: `(velocity', alive', reward)`."""
    action = np.clip(action, -ACTION_LIMIT, ACTION_LIMIT)
    new_velocity = velocity + spec.dt * (spec.gain * action -
                                         spec.drag * velocity)
    new_alive = np.logical_and(alive, np.abs(new_velocity) <= limit)
    reward = (-np.abs(velocity - v_target) + FORWARD_REWARD +
              SURVIVE_REWARD * new_alive - ACTION_COST * action ** 2)
    return new_velocity, new_alive, reward


def vel_step(state, action, v_target, spec, limit=np.inf):
    """Single transition of the velocity task."""
    v, alive, reward = velocity_dynamics(
        np.float64(state.velocity), state.alive, float(action),
        float(np.ravel(v_target)[0]), spec, limit)
    return VelState(float(v), bool(alive)), float(reward)


class VelocityEnv(Environment):

    obs_dim = 1
    act_dim = 1

    def __init__(self, spec, bounds):
        super(VelocityEnv, self).__init__(spec, bounds)
        self.limit = fail_speed(bounds)

    def initial_state(self, n):
        # columns: velocity, alive flag
        state = np.zeros((n, 2))
        state[:, 1] = 1.0
        return state

    def observe(self, state):
        return state[:, :1].copy()

    def step(self, state, action, task):
        v, alive, reward = velocity_dynamics(
            state[:, 0], state[:, 1] > 0, action[:, 0], float(task[0]),
            self.spec, self.limit)
        next_state = np.column_stack([v, alive.astype(float)])
        return next_state, reward, np.zeros(state.shape[0], dtype=bool)


class VelocityEnvironment(Component):
    """Point-mass stand-in for the velocity locomotion tasks."""

    implements(IEnvironmentProvider)

    name = 'velocity1d'
    dimension = 1
    obs_dim = VelocityEnv.obs_dim
    act_dim = VelocityEnv.act_dim
    default_n_batch = 40
    default_test_step = 0.05
    symbol = 'v'

    def create_env(self, spec, bounds):
        return VelocityEnv(spec, bounds)
