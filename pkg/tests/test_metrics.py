# -*- coding: utf-8 -*-

import numpy as np
import pytest

from guidedmeta.core import InputError
from guidedmeta.envs.base import EnvSpec
from guidedmeta.envs.velocity import VelocityEnv
from guidedmeta.metalearner import MetaConfig, MetaLearner
from guidedmeta.metrics import (SweepEntry, SweepResult, average_sweeps,
                                bias_score, compare_summaries, evaluate_sweep,
                                nearest_index, summarize, sweep_grid,
                                sweep_tasks)
from guidedmeta.policy import GaussianMLP
from guidedmeta.taskspace import TaskBounds


def make_sweep(scores, taus=None, step=1.0, pre=None):
    taus = list(range(len(scores))) if taus is None else taus
    pre = scores if pre is None else pre
    return SweepResult(tuple(SweepEntry((float(t),), float(s), float(p))
                             for t, s, p in zip(taus, scores, pre)),
                       step)


class TestSweepGrid(object):

    def test_grid(self):
        assert sweep_grid(0.0, 3.0, 1.0).tolist() == [0.0, 1.0, 2.0, 3.0]
        assert sweep_grid(0.0, 5.0, 0.05).size == 101

    def test_step_equal_to_span(self):
        assert sweep_grid(0.0, 3.0, 3.0).tolist() == [0.0, 3.0]

    def test_invalid(self):
        with pytest.raises(InputError):
            sweep_grid(0.0, 3.0, 0.0)
        with pytest.raises(InputError):
            sweep_grid(3.0, 3.0, 0.1)

    def test_2d_tasks(self):
        tasks = sweep_tasks(TaskBounds(0.0, 2.0, 2), 0.5)
        assert [np.hypot(*t) for t in tasks] == \
            pytest.approx([0.0, 0.5, 1.0, 1.5, 2.0])


class TestSweepResult(object):

    def test_must_increase(self):
        with pytest.raises(InputError):
            make_sweep([1.0, 2.0], taus=[1.0, 0.0])

    def test_shifted(self):
        sweep = make_sweep([1.0, 2.0]).shifted(3.0)
        assert sweep.scores().tolist() == [4.0, 5.0]
        assert sweep.scores('pre').tolist() == [4.0, 5.0]


class TestBiasScore(object):

    def test_at_argmax(self):
        sweep = make_sweep([1.0, 5.0, 2.0])
        assert bias_score(sweep, 1.0) == 0.0

    def test_table_relationship(self):
        sweep = make_sweep([60.0, 64.06, 71.71, 50.0])
        assert bias_score(sweep, 1.0) == pytest.approx(-7.65)

    def test_constant_sweep(self):
        sweep = make_sweep([3.0] * 4)
        assert [bias_score(sweep, t) for t in range(4)] == [0.0] * 4

    def test_never_positive(self):
        rng = np.random.default_rng(0)
        sweep = make_sweep(rng.normal(size=20).tolist())
        assert all(bias_score(sweep, t) <= 0.0 for t in range(20))

    def test_nearest_grid_point(self):
        sweep = make_sweep([1.0, 2.0, 3.0], taus=[0.0, 0.05, 0.1],
                           step=0.05)
        assert nearest_index(sweep, 0.06) == 1
        with pytest.raises(InputError):
            nearest_index(sweep, 0.2)

    def test_empty_sweep(self):
        with pytest.raises(InputError):
            bias_score(SweepResult((), 1.0), 0.0)


class TestSummarize(object):

    def test_population_statistics(self):
        summary = summarize(make_sweep([2.0, 4.0, 6.0]), [(0.0, 2.0)], [])
        assert summary.means == (((0.0, 2.0), 4.0),)
        assert summary.variances[0][1] == pytest.approx(8 / 3)
        assert summary.highest_score == 6.0
        assert summary.tau_at_highest == 2.0

    def test_min_negative_tau(self):
        summary = summarize(make_sweep([1.0, -1.0]), [(0.0, 1.0)], [])
        assert summary.min_negative_tau == 1.0

    def test_no_negative_score(self):
        summary = summarize(make_sweep([1.0, 2.0]), [(0.0, 1.0)], [0.0])
        assert summary.min_negative_tau is None
        assert summary.to_report()['min_v_with_negative_reward'] == 'none'

    def test_range_outside_sweep(self):
        with pytest.raises(InputError):
            summarize(make_sweep([1.0, 2.0]), [(0.0, 5.0)], [])

    def test_sub_range(self):
        summary = summarize(make_sweep([0.0, 2.0, 4.0, 100.0]),
                            [(0.0, 2.0), (1.0, 3.0)], [])
        assert [m for _, m in summary.means] == [2.0, pytest.approx(106 / 3)]

    def test_mean_invariant_under_reordering(self):
        scores = [3.0, -1.0, 4.0, 1.5]
        a = summarize(make_sweep(scores), [(0.0, 3.0)], [])
        b = summarize(make_sweep(scores[::-1], taus=[-3, -2, -1, 0]),
                      [(-3.0, 0.0)], [])
        assert a.means[0][1] == pytest.approx(b.means[0][1])

    def test_shift_keeps_variance_and_bias(self):
        sweep = make_sweep([3.0, -1.0, 4.0, 1.5])
        a = summarize(sweep, [(0.0, 3.0)], [0.0, 2.0])
        b = summarize(sweep.shifted(10.0), [(0.0, 3.0)], [0.0, 2.0])
        assert a.variances[0][1] == pytest.approx(b.variances[0][1])
        assert [v for _, v in a.biases] == \
            pytest.approx([v for _, v in b.biases])

    def test_report_keys(self):
        summary = summarize(make_sweep([2.0, 4.0, 6.0, -1.0]), [(0.0, 3.0)],
                            [1.0], symbol='v')
        assert summary.to_report() == {
            'highest_score': 6.0,
            'v_in_highest_score': 2.0,
            'mean_value_v_0_3': pytest.approx(2.75),
            'variance_value_v_0_3': pytest.approx(6.6875),
            'bias_score_at_v_1': -2.0,
            'min_v_with_negative_reward': 3.0,
        }

    def test_pre_adaptation_scores(self):
        sweep = make_sweep([2.0, 4.0], pre=[-1.0, 1.0])
        summary = summarize(sweep, [(0.0, 1.0)], [], which='pre')
        assert summary.highest_score == 1.0
        assert summary.min_negative_tau == 0.0


class TestAverageAndCompare(object):

    def test_average_sweeps(self):
        averaged = average_sweeps([make_sweep([1.0, 2.0]),
                                   make_sweep([3.0, 6.0])], seeds=[4, 9])
        assert averaged.scores().tolist() == [2.0, 4.0]
        assert averaged.per_seed == {4: [1.0, 2.0], 9: [3.0, 6.0]}

    def test_average_needs_same_grid(self):
        with pytest.raises(InputError):
            average_sweeps([make_sweep([1.0, 2.0]), make_sweep([1.0])])
        with pytest.raises(InputError):
            average_sweeps([])

    def test_variance_delta(self):
        report = compare_summaries(make_sweep([10.0, 0.0]),
                                   make_sweep([5.0, 5.0]), [(0.0, 1.0)], [])
        assert report['deltas']['variance_value_v_0_1'] == 25.0
        assert report['deltas']['mean_value_v_0_1'] == 0.0
        assert [row['delta'] for row in report['per_task']] == [5.0, -5.0]

    def test_self_comparison(self):
        sweep = make_sweep([3.0, -1.0, 4.0])
        report = compare_summaries(sweep, sweep, [(0.0, 2.0)], [1.0])
        assert all(v == 0.0 for v in report['deltas'].values())
        assert report['a'] == report['b']

    def test_mismatched_grids(self):
        with pytest.raises(InputError):
            compare_summaries(make_sweep([1.0, 2.0]),
                              make_sweep([1.0, 2.0], taus=[0.0, 2.0]),
                              [(0.0, 1.0)], [])


class TestEvaluateSweep(object):

    def _learner(self, alpha=0.1):
        config = MetaConfig(alpha=alpha, n_samples=2, horizon=5, hidden=4)
        env = VelocityEnv(EnvSpec(horizon=5), TaskBounds(0.0, 3.0))
        policy = GaussianMLP(1, 1, config.hidden)
        return (MetaLearner(env, policy, config),
                policy.init(np.random.default_rng(0)))

    def test_extends_past_training_bounds(self):
        learner, theta = self._learner()
        sweep = evaluate_sweep(learner, theta, TaskBounds(0.0, 5.0), 1.0)
        assert sweep.difficulties.tolist() == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
        assert sweep.step == 1.0

    def test_coarse_grid(self):
        learner, theta = self._learner()
        sweep = evaluate_sweep(learner, theta, TaskBounds(0.0, 3.0), 3.0)
        assert sweep.difficulties.tolist() == [0.0, 3.0]

    def test_no_adaptation_gives_equal_scores(self):
        learner, theta = self._learner(alpha=0.0)
        sweep = evaluate_sweep(learner, theta, TaskBounds(0.0, 2.0), 1.0)
        assert sweep.scores('pre').tolist() == sweep.scores('post').tolist()

    def test_theta_not_modified(self):
        learner, theta = self._learner()
        before = theta.copy()
        evaluate_sweep(learner, theta, TaskBounds(0.0, 2.0), 1.0, seed=3)
        assert np.array_equal(theta, before)

    def test_seeded(self):
        learner, theta = self._learner()
        a = evaluate_sweep(learner, theta, TaskBounds(0.0, 2.0), 1.0, seed=1)
        b = evaluate_sweep(learner, theta, TaskBounds(0.0, 2.0), 1.0, seed=1)
        assert a.scores().tolist() == b.scores().tolist()
