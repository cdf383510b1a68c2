# -*- coding: utf-8 -*-

"""Point agent on the plane that has to reach a goal.

The task is the goal position. Velocity commands are clipped to
`[-0.1, 0.1]` per axis, the reward is the negative distance to the goal
after the move and the episode ends once the agent is within
`goal_tolerance` of the goal.
"""

from dataclasses import dataclass

import numpy as np

from guidedmeta.api import IEnvironmentProvider
from guidedmeta.core import Component, implements
from guidedmeta.envs.base import Environment

ACTION_LIMIT = 0.1


@dataclass(frozen=True)
class NavState(object):
    x: float = 0.0
    y: float = 0.0

    @property
    def position(self):
        return np.array([self.x, self.y])


def nav_step(state, action, goal, tolerance=0.01):
    """Single move: returns `(NavState, reward, done)`."""
    action = np.clip(np.asarray(action, dtype=float), -ACTION_LIMIT,
                     ACTION_LIMIT)
    position = state.position + action
    distance = float(np.linalg.norm(position - np.asarray(goal, dtype=float)))
    return NavState(*position), -distance, distance < tolerance


class NavigationEnv(Environment):

    obs_dim = 2
    act_dim = 2

    def initial_state(self, n):
        return np.zeros((n, 2))

    def observe(self, state):
        return state.copy()

    def step(self, state, action, task):
        position = state + np.clip(action, -ACTION_LIMIT, ACTION_LIMIT)
        distance = np.linalg.norm(position - task[None, :], axis=1)
        return position, -distance, distance < self.spec.goal_tolerance


class NavigationEnvironment(Component):
    """2D navigation to a goal, goals bounded by their distance from the
    origin.
    """

    implements(IEnvironmentProvider)

    name = 'navigation2d'
    dimension = 2
    obs_dim = NavigationEnv.obs_dim
    act_dim = NavigationEnv.act_dim
    default_n_batch = 20
    default_test_step = 0.25
    symbol = 'r'

    def create_env(self, spec, bounds):
        return NavigationEnv(spec, bounds)
