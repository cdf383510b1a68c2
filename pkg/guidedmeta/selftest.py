# -*- coding: utf-8 -*-

"""Quick invariant checks run by `guidedmeta selftest`.

Each check builds small objects, exercises one invariant of the library
and raises `AssertionError` when it does not hold. Nothing is trained and
nothing is written to disk.
"""

import numpy as np

from guidedmeta.autodiff import gradient, matmul, tanh
from guidedmeta.envs.base import EnvSpec
from guidedmeta.envs.velocity import VelState, vel_step
from guidedmeta.log import get_logger
from guidedmeta.metalearner import first_order_meta_step, task_rng
from guidedmeta.regions import (DIFFICULT, EASY, MIDDLE, Schedule, advance,
                                initial_partition)
from guidedmeta.sampler import SamplerConfig, epoch0_grid, sample_batch
from guidedmeta.scores import ScoreTable, build_curve, probability
from guidedmeta.taskspace import TaskBounds

CHECKS = []


def check(title):
    def decorator(fn):
        CHECKS.append((title, fn))
        return fn
    return decorator


def _partitions(bounds, n_epoch=20, n_interval=4, tau_mean=1.0):
    schedule = Schedule.create(n_epoch, n_interval, tau_mean, bounds)
    partition = initial_partition(tau_mean, schedule, bounds)
    for epoch in range(n_epoch):
        partition = advance(partition, schedule, epoch)
        yield epoch, schedule, partition


def _within(region, d, tol):
    if tol == 0.0:
        return region.contains(d)
    return any(i.lo - tol <= d <= i.hi + tol for i in region)


@check("epoch-0 grid is evenly spaced over the bounds")
def check_grid():
    for bounds in (TaskBounds(0.0, 3.0), TaskBounds(-3.0, 3.0)):
        d = epoch0_grid(bounds, 40).difficulties
        assert d[0] == bounds.tau_min and d[-1] == bounds.tau_max
        assert np.allclose(np.diff(d), np.diff(d)[0])


@check("regions are disjoint and cover the task bounds")
def check_regions():
    for bounds in (TaskBounds(0.0, 3.0), TaskBounds(-3.0, 3.0)):
        points = np.linspace(bounds.tau_min, bounds.tau_max, 601)
        for _, _, partition in _partitions(bounds):
            hits = sum(partition.region(label).contains(points).astype(int)
                       for label in (EASY, MIDDLE, DIFFICULT))
            assert np.all(hits == 1), partition


@check("region boundaries only grow and advance is idempotent")
def check_advance():
    bounds = TaskBounds(0.0, 3.0)
    previous = None
    for epoch, schedule, partition in _partitions(bounds):
        assert advance(partition, schedule, epoch) == partition
        if previous is not None:
            assert partition.tau_middle1 >= previous.tau_middle1
            assert partition.tau_middle2 >= previous.tau_middle2
        previous = partition
    assert previous.tau_middle2 == bounds.tau_max
    assert previous.difficult.empty


@check("sampled tasks stay inside their regions")
def check_sampling():
    config = SamplerConfig(40, 0.1, 0.1)
    for bounds in (TaskBounds(0.0, 3.0), TaskBounds(-3.0, 3.0),
                   TaskBounds(0.0, 2.0, 2)):
        table = ScoreTable(bounds, 0.1)
        grid = epoch0_grid(bounds, 20)
        for tau, _ in grid:
            table.add(tau, 0, -float(np.abs(tau).sum()))
        dist = probability(build_curve(table))
        rng = task_rng(0, 1)
        # 2D tasks are lifted onto a circle, so radii are exact up to
        # rounding only
        tol = 0.0 if bounds.dimension == 1 else 1e-9
        for epoch, _, partition in _partitions(bounds):
            plan = sample_batch(partition, dist, config, rng, epoch)
            assert len(plan) == config.n_batch
            for d, label in zip(plan.difficulties, plan.labels):
                assert _within(partition.region(label), d, tol), (d, label)


@check("bin probabilities form a distribution")
def check_probability():
    bounds = TaskBounds(0.0, 3.0)
    table = ScoreTable(bounds, 0.1)
    for i, tau in enumerate(np.linspace(0.0, 3.0, 7)):
        table.add([tau], 0, np.sin(i))
    p = probability(build_curve(table)).p
    assert np.all(p >= 0) and abs(p.sum() - 1.0) < 1e-9


@check("first-order meta step on a quadratic surrogate")
def check_meta_step():
    targets = [np.array([1.0, -2.0]), np.array([3.0, 0.5])]

    def grad_fn(theta, target):
        return theta - target

    theta = np.zeros(2)
    alpha, beta = 0.1, 0.05
    new_theta, adapted = first_order_meta_step(theta, targets, grad_fn,
                                               alpha, beta)
    expected = theta - beta * sum((1 - alpha) * (theta - t) for t in targets)
    assert np.allclose(new_theta, expected)
    assert all(np.allclose(p, alpha * t) for p, t in zip(adapted, targets))


@check("reverse-mode gradients match finite differences")
def check_autodiff():
    rng = np.random.default_rng(3)
    w = rng.normal(size=(3, 4))
    x0 = rng.normal(size=3)

    def fn(x):
        return tanh(matmul(x, w)).sum()

    _, grad = gradient(fn, x0)
    eps = 1e-6
    numeric = np.array([
        (np.tanh((x0 + eps * e) @ w).sum() -
         np.tanh((x0 - eps * e) @ w).sum()) / (2 * eps)
        for e in np.eye(3)])
    assert np.allclose(grad, numeric, atol=1e-5)


@check("velocity reward at perfect tracking")
def check_velocity_reward():
    spec = EnvSpec()
    _, reward = vel_step(VelState(2.0), 0.0, [2.0], spec)
    assert abs(reward - 1.05) < 1e-12
    _, reward = vel_step(VelState(0.0), 0.0, [3.0], spec)
    assert abs(reward + 1.95) < 1e-12
    _, reward = vel_step(VelState(2.0), 1.0, [2.0], spec)
    assert abs(reward - 1.04) < 1e-12


def run_selftest(log=None):
    """Run every check; returns the `(title, error)` pairs of the failed
    ones.
    """
    log = get_logger(log)
    failed = []
    for title, fn in CHECKS:
        try:
            fn()
        except AssertionError as e:
            log.error("FAIL %s: %s", title, e)
            failed.append((title, e))
        else:
            log.info("ok   %s", title)
    return failed
