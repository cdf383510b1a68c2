# -*- coding: utf-8 -*-

import dataclasses
import os
import shutil

import numpy as np
import pytest

from guidedmeta.core import InputError, RunError
from guidedmeta.experiment import open_experiment
from guidedmeta.methods import SamplingMethod
from guidedmeta.runlog import (CONFIG_FILE, CURVES_FILE, PARTITIONS_FILE,
                               RUN_FILE, SUMMARY_FILE, SWEEP_FILE,
                               checkpoint_path, latest_checkpoint,
                               load_checkpoint, read_csv, read_json)
from guidedmeta.runner import (SeedRun, compare_runs, epoch_scaling,
                               evaluate_checkpoint, run_experiment)
from guidedmeta.regions import estimate_tau_mean
from guidedmeta.sampler import epoch0_grid, uniform_plan
from guidedmeta.util.file import read_file

from tests.utils import fast_experiment, mkdtemp


class FailingSampling(SamplingMethod):
    """Uniform sampling that breaks down at epoch 3."""

    name = 'failing_at_3'

    def later_plan(self, state, epoch, rng):
        if epoch == 3:
            raise RunError("Sampler broke down", {'epoch': epoch})
        return uniform_plan(state.bounds, state.sampler.n_batch, rng,
                            epoch), None


class RunnerTest(object):

    def setup_method(self, method):
        self.tmpdir = mkdtemp()

    def teardown_method(self, method):
        shutil.rmtree(self.tmpdir)

    def experiment(self, *options):
        return fast_experiment(self.tmpdir, options)

    def run_dir(self, method='rmrl_gts', seed=1):
        return os.path.join(self.tmpdir, method, str(seed))

    def rows(self, name, method='rmrl_gts', seed=1):
        return read_csv(os.path.join(self.run_dir(method, seed), name))


class TestRunExperiment(RunnerTest):

    def test_single_epoch(self):
        experiment = self.experiment(('experiment', 'n_epoch', '1'))
        run_experiment(experiment)
        checkpoints = os.listdir(os.path.join(self.run_dir(), 'checkpoints'))
        assert checkpoints == ['epoch-00000.json']
        rows = self.rows(RUN_FILE)
        assert [float(r['task_0']) for r in rows] == [0.0, 1.0, 2.0, 3.0]
        assert {r['region'] for r in rows} == {'grid'}
        assert len(self.rows(PARTITIONS_FILE)) == 1

    def test_output_layout(self):
        result = run_experiment(self.experiment())
        run_dir = self.run_dir()
        for name in (RUN_FILE, PARTITIONS_FILE, CURVES_FILE, SWEEP_FILE,
                     SUMMARY_FILE, CONFIG_FILE):
            assert os.path.isfile(os.path.join(run_dir, name)), name
        method_dir = os.path.join(self.tmpdir, 'rmrl_gts')
        for name in (SWEEP_FILE, SUMMARY_FILE, CONFIG_FILE):
            assert os.path.isfile(os.path.join(method_dir, name)), name
        summary = read_json(os.path.join(method_dir, SUMMARY_FILE))
        assert set(summary) == {'post_adaptation', 'pre_adaptation'}
        assert 'mean_value_v_0_3' in summary['post_adaptation']
        assert 'bias_score_at_v_1' in summary['post_adaptation']
        assert summary == result.summary
        assert len(result.sweep) == 7

    def test_batches_follow_the_regions(self):
        run_experiment(self.experiment())
        rows = self.rows(RUN_FILE)
        assert len(rows) == 4 * 4
        later = [r for r in rows if r['epoch'] != '0']
        assert sorted({r['region'] for r in later}) == ['easy', 'middle']
        for epoch in ('1', '2', '3'):
            labels = [r['region'] for r in later if r['epoch'] == epoch]
            assert labels.count('easy') == 2
        partitions = self.rows(PARTITIONS_FILE)
        assert [p['epoch'] for p in partitions] == ['0', '1', '2', '3']
        middle1 = [float(p['tau_middle1']) for p in partitions]
        assert middle1 == sorted(middle1)

    def test_tau_mean_from_initial_grid_scores(self):
        experiment = self.experiment(('sampler', 'n_batch', '9'),
                                     ('env', 'horizon', '20'))
        run_experiment(experiment)
        cfg = experiment.resolve()
        run = SeedRun(experiment, cfg, 1)
        grid = epoch0_grid(cfg.bounds, 9)
        scores = run.grid_scores(run.theta, grid)
        assert scores == run.grid_scores(run.theta, grid)
        # Shared rollouts leave -|v - tau| as the only task-dependent term,
        # so the scores are concave over the evenly spaced grid
        values = np.array([s for _, s in scores])
        assert np.all(np.diff(values, 2) <= 1e-8)
        [first] = self.rows(PARTITIONS_FILE)[:1]
        assert float(first['tau_middle1']) == estimate_tau_mean(scores)

    def test_sampling_stream_follows_the_seed(self):
        experiment = self.experiment()
        cfg = experiment.resolve()
        assert SeedRun(experiment, cfg, 3).state.sampler.seed == 3
        assert cfg.sampler.seed == 0

    def test_checkpoints(self):
        run_experiment(self.experiment())
        directory = os.path.join(self.run_dir(), 'checkpoints')
        assert sorted(os.listdir(directory)) == ['epoch-00001.json',
                                                 'epoch-00003.json']
        data = load_checkpoint(os.path.join(directory, 'epoch-00003.json'))
        assert data['epoch'] == 3
        assert data['method'] == 'rmrl_gts'
        assert data['partition'] is not None
        assert len(data['theta']) == data['architecture']['size']
        assert data['rng']['next_epoch'] == 4

    def test_uniform_maml_has_no_partition(self):
        run_experiment(self.experiment(('experiment', 'method',
                                        'uniform_maml')))
        run_dir = self.run_dir('uniform_maml')
        assert not os.path.exists(os.path.join(run_dir, PARTITIONS_FILE))
        assert not os.path.exists(os.path.join(run_dir, CURVES_FILE))
        rows = self.rows(RUN_FILE, 'uniform_maml')
        assert {r['region'] for r in rows if r['epoch'] != '0'} == \
            {'uniform'}

    @pytest.mark.parametrize('method', ['approach1_only', 'approach2_only'])
    def test_ablations(self, method):
        run_experiment(self.experiment(('experiment', 'method', method)))
        run_dir = self.run_dir(method)
        if method == 'approach1_only':
            assert len(self.rows(PARTITIONS_FILE, method)) == 4
            assert not os.path.exists(os.path.join(run_dir, CURVES_FILE))
        else:
            assert not os.path.exists(os.path.join(run_dir, PARTITIONS_FILE))
            assert self.rows(CURVES_FILE, method)

    def test_several_seeds(self):
        result = run_experiment(self.experiment(('experiment', 'seeds',
                                                 '1, 2')))
        assert [r.seed for r in result.seeds] == [1, 2]
        header = read_file(os.path.join(self.tmpdir, 'rmrl_gts',
                                        SWEEP_FILE)).splitlines()[0]
        assert header == 'tau_0,pre,post,post_seed_1,post_seed_2'
        post = np.mean([r.sweep.scores() for r in result.seeds], axis=0)
        assert result.sweep.scores() == pytest.approx(post)

    def test_seeded_runs_are_reproducible(self):
        a = run_experiment(self.experiment()).seeds[0].theta
        b = run_experiment(self.experiment()).seeds[0].theta
        assert np.array_equal(a, b)

    def test_config_echo(self):
        result = run_experiment(self.experiment())
        path = os.path.join(self.run_dir(), CONFIG_FILE)
        _, echoed = open_experiment(path, [('logging', 'log_type', 'none')])
        expected = result.config.override(seeds=(1,))
        assert echoed.to_dict() == expected.to_dict()

    def test_participants_are_notified(self):
        experiment = self.experiment()
        run_experiment(experiment)
        messages = [m for _, m in experiment.log_messages]
        assert any(m.startswith('Training rmrl_gts seed 1 from epoch 0')
                   for m in messages)
        assert any(m.startswith('Epoch 3:') for m in messages)
        assert 'Finished rmrl_gts seed 1' in messages


class TestResume(RunnerTest):

    def test_resume_reproduces_the_run(self):
        experiment = self.experiment()
        full = run_experiment(experiment)
        expected = {name: read_file(os.path.join(self.run_dir(), name))
                    for name in (RUN_FILE, PARTITIONS_FILE, CURVES_FILE)}
        resume = checkpoint_path(os.path.join(self.run_dir(),
                                              'checkpoints'), 1)

        resumed = run_experiment(experiment, resume=resume)
        assert np.array_equal(resumed.seeds[0].theta, full.seeds[0].theta)
        for name, content in expected.items():
            assert read_file(os.path.join(self.run_dir(), name)) == content

    def test_restore_checks_the_run(self):
        experiment = self.experiment()
        run_experiment(experiment)
        data = load_checkpoint(latest_checkpoint(
            os.path.join(self.run_dir(), 'checkpoints')))
        cfg = experiment.resolve()
        with pytest.raises(InputError):
            SeedRun(experiment, cfg, 2).restore(data)
        with pytest.raises(InputError):
            SeedRun(experiment, cfg, 1, 'uniform_maml').restore(data)
        other = cfg.override(meta=dataclasses.replace(cfg.meta, hidden=8))
        with pytest.raises(InputError):
            SeedRun(experiment, other, 1).restore(data)

    def test_abort_keeps_last_completed_epoch(self):
        experiment = self.experiment(('experiment', 'method',
                                      'failing_at_3'))
        with pytest.raises(RunError):
            run_experiment(experiment)
        directory = os.path.join(self.run_dir('failing_at_3'), 'checkpoints')
        assert latest_checkpoint(directory) == checkpoint_path(directory, 2)
        assert any(level == 'ERROR' and 'aborted at epoch 3' in message
                   for level, message in experiment.log_messages)
        assert 'Finished failing_at_3 seed 1' in \
            [m for _, m in experiment.log_messages]


class TestEvaluateAndCompare(RunnerTest):

    def test_evaluate_checkpoint(self):
        experiment = self.experiment()
        run_experiment(experiment)
        path = latest_checkpoint(os.path.join(self.run_dir(), 'checkpoints'))
        output = os.path.join(self.tmpdir, 'eval')
        sweep, summary = evaluate_checkpoint(experiment, path, (0.0, 2.0),
                                             1.0, output)
        assert sweep.difficulties.tolist() == [0.0, 1.0, 2.0]
        # [0, 3] is not covered by the sweep any more
        assert 'mean_value_v_0_3' not in summary['post_adaptation']
        assert 'bias_score_at_v_1' in summary['post_adaptation']
        assert os.path.isfile(os.path.join(output, SWEEP_FILE))
        assert read_json(os.path.join(output, SUMMARY_FILE)) == summary

    def test_evaluate_checkpoint_matches_run(self):
        experiment = self.experiment()
        result = run_experiment(experiment)
        path = latest_checkpoint(os.path.join(self.run_dir(), 'checkpoints'))
        sweep, _ = evaluate_checkpoint(experiment, path)
        assert sweep.scores().tolist() == \
            result.seeds[0].sweep.scores().tolist()

    def test_compare_runs(self):
        run_experiment(self.experiment())
        run_experiment(self.experiment(('experiment', 'method',
                                        'uniform_maml')))
        a = os.path.join(self.tmpdir, 'rmrl_gts')
        b = os.path.join(self.tmpdir, 'uniform_maml')
        report = compare_runs(a, b, [(0.0, 3.0)], [1.0])
        assert set(report) == {'a', 'b', 'deltas', 'per_task', 'a_dir',
                               'b_dir'}
        assert len(report['per_task']) == 7
        key = 'variance_value_v_0_3'
        assert report['deltas'][key] == pytest.approx(
            report['a'][key] - report['b'][key])

        same = compare_runs(a, a, [(0.0, 3.0)], [1.0])
        assert all(v == 0.0 for v in same['deltas'].values())

    def test_compare_missing_sweep(self):
        with pytest.raises(InputError):
            compare_runs(self.tmpdir, self.tmpdir, [(0.0, 3.0)], [])

    def test_epoch_scaling(self):
        experiment = self.experiment()
        cfg = experiment.resolve()
        rows = epoch_scaling(experiment, cfg, [1, 2], points=[0.0, 3.0, 10.0])
        assert [(r['method'], r['n_epoch']) for r in rows] == \
            [('rmrl_gts', 1), ('rmrl_gts', 2)]
        assert all(r['score_at_10'] == '' for r in rows)
        assert all(isinstance(r['score_at_3'], float) for r in rows)
        lines = read_file(os.path.join(self.tmpdir,
                                       'scaling.csv')).splitlines()
        assert lines[0] == 'method,n_epoch,score_at_0,score_at_3,score_at_10'
        assert len(lines) == 3
        assert os.path.isdir(os.path.join(self.tmpdir, 'epochs-2',
                                          'rmrl_gts', '1'))
