# -*- coding: utf-8 -*-

"""First-order MAML with REINFORCE losses.

The inner loop adapts the meta-parameters to one task with a single
policy-gradient step; the outer loop moves the meta-parameters along the
sum of the post-adaptation gradients, each taken at the adapted
parameters (first-order approximation, no second derivatives).
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from guidedmeta.core import InputError, RunError
from guidedmeta.envs.base import rollout
from guidedmeta.log import get_logger
from guidedmeta.policy import loss_and_grad
from guidedmeta.scores import mean_total_reward
from guidedmeta.taskspace import task_key


@dataclass(frozen=True)
class MetaConfig(object):
    alpha: float = 0.1
    beta: float = 0.01
    n_samples: int = 20
    horizon: int = 100
    discount: float = 0.99
    hidden: int = 64
    grad_clip: float = 10.0

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise InputError("Step sizes must not be negative")
        if self.n_samples < 1:
            raise InputError("n_samples must be at least 1")
        if not 0 < self.discount <= 1:
            raise InputError("discount must lie in (0, 1]")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


@dataclass(frozen=True, eq=False)
class TaskResult(object):
    task: tuple
    theta_prime: np.ndarray
    meta_grad: np.ndarray
    r_mean: float


def clip_norm(grad, limit):
    """Rescale `grad` to norm `limit` if it is longer."""
    if not limit:
        return grad
    norm = float(np.linalg.norm(grad))
    if norm > limit:
        return grad * (limit / norm)
    return grad


def inner_step(theta, grad, alpha, clip=None):
    """`theta - alpha * grad` with optional gradient-norm clipping."""
    return theta - alpha * clip_norm(np.asarray(grad, dtype=float), clip)


def first_order_meta_step(theta, tasks, grad_fn, alpha, beta, clip=None):
    """One first-order meta-update for any gradient function.

    `grad_fn(theta, task)` returns the task-loss gradient at `theta`.
    Returns the updated parameters and the adapted parameters per task.
    """
    adapted, total = [], np.zeros_like(theta, dtype=float)
    for task in tasks:
        prime = inner_step(theta, grad_fn(theta, task), alpha, clip)
        adapted.append(prime)
        total = total + np.asarray(grad_fn(prime, task), dtype=float)
    return inner_step(theta, total, beta, clip), adapted


def task_rng(*key):
    """Generator for a stream identified by integers (seed, epoch, ...)."""
    return np.random.default_rng(np.random.SeedSequence(
        [int(k) for k in key]))


def _check_finite(grad, task, stage):
    if not np.all(np.isfinite(grad)):
        raise RunError("Non-finite policy gradient",
                       {'task': task, 'stage': stage,
                        'grad_norm': float(np.linalg.norm(grad))})


class MetaLearner(object):
    """Runs adaptation and meta-updates for one environment and policy."""

    def __init__(self, env, policy, config, workers=1, log=None):
        self.env = env
        self.policy = policy
        self.config = config
        self.workers = max(1, int(workers))
        self.log = get_logger(log)

    def collect(self, theta, task, rng):
        return rollout(self.env, self.policy, theta, task,
                       self.config.horizon, rng, self.config.n_samples)

    def gradient(self, theta, trajectories, task=None, stage='inner'):
        _, grad = loss_and_grad(self.policy, theta, trajectories,
                                self.config.discount)
        _check_finite(grad, task, stage)
        return grad

    def adapt_from(self, theta, trajectories):
        task = trajectories[0].task if trajectories else None
        grad = self.gradient(theta, trajectories, task, 'inner')
        return inner_step(theta, grad, self.config.alpha,
                          self.config.grad_clip)

    def adapt(self, theta, task, rng):
        """Adapted parameters for `task`; `theta` itself is left alone."""
        return self.adapt_from(theta, self.collect(theta, task, rng))

    def task_update(self, theta, task, key):
        """Adapt to `task` and return the post-adaptation gradient and
        score. `key` identifies the random stream of this task.
        """
        pre_seq, post_seq = np.random.SeedSequence(
            [int(k) for k in key]).spawn(2)
        theta_prime = self.adapt(theta, task,
                                 np.random.default_rng(pre_seq))
        post = self.collect(theta_prime, task,
                            np.random.default_rng(post_seq))
        grad = self.gradient(theta_prime, post, task_key(task), 'outer')
        r_mean = mean_total_reward(tr.total_reward for tr in post)
        return TaskResult(task_key(task), theta_prime, grad, r_mean)

    def map_tasks(self, fn, items):
        if self.workers == 1 or len(items) < 2:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, items))

    def meta_update(self, theta, plan, key):
        """Meta-update over the tasks of `plan`.

        Returns the new parameters and the `(task, r_mean)` pairs of the
        tasks that could be evaluated. Tasks whose rollouts or gradients
        fail are left out with a warning.
        """
        if not len(plan):
            raise InputError("meta_update needs a non-empty batch")

        def run(indexed):
            index, task = indexed
            try:
                return self.task_update(theta, task, tuple(key) + (index,))
            except RunError as e:
                self.log.warning("Task %s excluded from the meta-update: %s",
                                 task_key(task), e)
                return None

        results = self.map_tasks(run, list(enumerate(plan.taus)))
        results = [r for r in results if r is not None]
        if not results:
            raise RunError("Every task of the batch failed",
                           {'key': tuple(key), 'n_tasks': len(plan)})
        total = np.zeros_like(theta)
        for result in results:
            total = total + result.meta_grad
        new_theta = inner_step(theta, total, self.config.beta,
                               self.config.grad_clip)
        return new_theta, [(r.task, r.r_mean) for r in results]

    def score(self, theta, task, key):
        """Mean total reward of `task` under `theta`, without adaptation."""
        trajectories = self.collect(theta, task, task_rng(*key))
        return mean_total_reward(tr.total_reward for tr in trajectories)

    def evaluate_task(self, theta, task, key):
        """`(pre, post)` adaptation scores of `task`.

        Both rollout sets use the same random stream, so without adaptation
        the two scores coincide.
        """
        pre = self.collect(theta, task, task_rng(*key))
        theta_prime = self.adapt_from(theta, pre)
        post = self.collect(theta_prime, task, task_rng(*key))
        return (mean_total_reward(tr.total_reward for tr in pre),
                mean_total_reward(tr.total_reward for tr in post))
