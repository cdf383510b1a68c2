# -*- coding: utf-8 -*-

from dataclasses import asdict, dataclass

import numpy as np

from guidedmeta.core import InputError, RunError
from guidedmeta.taskspace import task_key


@dataclass(frozen=True)
class EnvSpec(object):
    """Environment family and its dynamics constants."""

    kind: str = 'velocity1d'
    horizon: int = 100
    dt: float = 0.05
    gain: float = 2.0
    drag: float = 0.5
    goal_tolerance: float = 0.01

    def __post_init__(self):
        if self.horizon < 0:
            raise InputError("horizon must not be negative")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


@dataclass(frozen=True, eq=False)
class Trajectory(object):
    """One episode: observations, raw policy actions and rewards."""

    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    task: tuple

    def __len__(self):
        return self.rewards.shape[0]

    @property
    def total_reward(self):
        """Undiscounted return."""
        return float(np.sum(self.rewards))


class Environment(object):
    """Batched, stateless environment.

    States are `(n, state_dim)` arrays so that all rollouts of a task step
    together; `step` never modifies its inputs.
    """

    obs_dim = None
    act_dim = None

    def __init__(self, spec, bounds):
        self.spec = spec
        self.bounds = bounds

    def initial_state(self, n):
        raise NotImplementedError

    def observe(self, state):
        raise NotImplementedError

    def step(self, state, action, task):
        """Return `(next_state, reward, done)` for a batch of actions."""
        raise NotImplementedError


def rollout(env, policy, theta, task, horizon, rng, n=1):
    """Collect `n` episodes of at most `horizon` steps under `theta`.

    Episodes that terminate early are cut at their terminal step. Raises
    `RunError` if the policy or the dynamics produce non-finite values.
    """
    task = np.asarray(task, dtype=float)
    key = task_key(task)
    obs_rows, act_rows, rew_rows = [], [], []
    lengths = np.full(n, horizon, dtype=int)
    active = np.ones(n, dtype=bool)
    state = env.initial_state(n)
    for t in range(horizon):
        obs = env.observe(state)
        action = policy.sample(theta, obs, rng)
        if not np.all(np.isfinite(action)):
            raise RunError("Policy produced a non-finite action",
                           {'task': key, 'step': t})
        state, reward, done = env.step(state, action, task)
        if not (np.all(np.isfinite(state)) and np.all(np.isfinite(reward))):
            raise RunError("Environment produced a non-finite state",
                           {'task': key, 'step': t})
        obs_rows.append(obs)
        act_rows.append(action)
        rew_rows.append(reward)
        finished = active & done
        lengths[finished] = t + 1
        active &= ~done
        if not active.any():
            break

    steps = len(rew_rows)
    if steps:
        all_obs = np.stack(obs_rows, axis=1)
        all_act = np.stack(act_rows, axis=1)
        all_rew = np.stack(rew_rows, axis=1)
    else:
        all_obs = np.empty((n, 0, env.obs_dim))
        all_act = np.empty((n, 0, env.act_dim))
        all_rew = np.empty((n, 0))
    return [Trajectory(all_obs[i, :lengths[i]], all_act[i, :lengths[i]],
                       all_rew[i, :lengths[i]], key)
            for i in range(n)]
