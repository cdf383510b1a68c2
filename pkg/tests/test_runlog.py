# -*- coding: utf-8 -*-

import os
import shutil

import numpy as np
import pytest

from guidedmeta.core import InputError
from guidedmeta.metrics import SweepEntry, SweepResult
from guidedmeta.regions import Schedule, initial_partition
from guidedmeta.runlog import (CHECKPOINT_FORMAT, CURVES_FILE, EPOCHS_FILE,
                               PARTITIONS_FILE, RUN_FILE, RunLog, align,
                               checkpoint_path, latest_checkpoint,
                               load_checkpoint, read_csv, read_sweep,
                               save_checkpoint, write_json, write_sweep,
                               write_table)
from guidedmeta.sampler import SamplingPlan
from guidedmeta.taskspace import TaskBounds
from guidedmeta.util.file import read_file

from tests.utils import mkdtemp


def _plan(epoch, *values):
    return SamplingPlan(epoch, tuple((np.array([v]), 'easy')
                                     for v in values))


def test_align_marks_left_out_tasks():
    plan = _plan(1, 0.5, 1.5, 2.5)
    rows = list(align(plan, [((0.5,), 1.0), ((2.5,), 3.0)]))
    assert rows == [((0.5,), 'easy', 1.0), ((1.5,), 'easy', None),
                    ((2.5,), 'easy', 3.0)]


class TestRunLog(object):

    def setup_method(self, method):
        self.tmpdir = mkdtemp()
        self.runlog = RunLog(os.path.join(self.tmpdir, 'run'), 1).open()

    def teardown_method(self, method):
        shutil.rmtree(self.tmpdir)

    def _write_epoch(self, epoch):
        plan = _plan(epoch, 0.5, 1.5)
        scores = [((0.5,), float(epoch)), ((1.5,), float(-epoch))]
        self.runlog.write_run(epoch, plan, scores)
        self.runlog.write_epoch(epoch, len(plan), scores, 0.25)

    def test_headers(self):
        assert read_file(self.runlog.path(RUN_FILE)) == \
            'epoch,task_0,region,r_mean\n'
        assert read_file(self.runlog.path(PARTITIONS_FILE)) == \
            'epoch,tau_middle1,tau_middle2\n'
        assert os.path.isdir(self.runlog.checkpoint_dir)

    def test_optional_logs(self):
        runlog = RunLog(os.path.join(self.tmpdir, 'uniform'), 1,
                        partitions=False, curves=False).open()
        assert sorted(os.listdir(runlog.directory)) == [
            'checkpoints', EPOCHS_FILE, RUN_FILE]
        runlog = RunLog(os.path.join(self.tmpdir, 'scores'), 1,
                        partitions=False).open()
        assert os.path.isfile(runlog.path(CURVES_FILE))
        assert not os.path.exists(runlog.path(PARTITIONS_FILE))

    def test_2d_header(self):
        runlog = RunLog(os.path.join(self.tmpdir, 'nav'), 2).open()
        assert read_file(runlog.path(RUN_FILE)) == \
            'epoch,task_0,task_1,region,r_mean\n'

    def test_rows(self):
        self._write_epoch(0)
        self.runlog.write_run(1, _plan(1, 2.0), [])
        rows = read_csv(self.runlog.path(RUN_FILE))
        assert [(r['epoch'], r['task_0'], r['r_mean']) for r in rows] == [
            ('0', '0.5', '0.0'), ('0', '1.5', '-0.0'), ('1', '2.0', '')]
        [epoch] = read_csv(self.runlog.path(EPOCHS_FILE))
        assert epoch['n_tasks'] == '2'
        assert epoch['n_scored'] == '2'

    def test_partition_rows(self):
        bounds = TaskBounds(0.0, 3.0)
        schedule = Schedule.create(200, 10, 1.0, bounds)
        self.runlog.write_partition(0, initial_partition(1.0, schedule,
                                                         bounds))
        [row] = read_csv(self.runlog.path(PARTITIONS_FILE))
        assert float(row['tau_middle1']) == 1.0
        assert float(row['tau_middle2']) == pytest.approx(1.5)

    def test_resume_keeps_completed_epochs(self):
        for epoch in range(4):
            self._write_epoch(epoch)
        self.runlog.open(resume_epoch=1)
        rows = read_csv(self.runlog.path(RUN_FILE))
        assert sorted({r['epoch'] for r in rows}) == ['0', '1']
        assert len(read_csv(self.runlog.path(EPOCHS_FILE))) == 2

    def test_fresh_open_truncates(self):
        self._write_epoch(0)
        self.runlog.open()
        assert read_csv(self.runlog.path(RUN_FILE)) == []


class TestSweepFiles(object):

    def setup_method(self, method):
        self.tmpdir = mkdtemp()

    def teardown_method(self, method):
        shutil.rmtree(self.tmpdir)

    def test_write_table(self):
        path = os.path.join(self.tmpdir, 'scaling.csv')
        write_table(path, ['method', 'n_epoch', 'score_at_3'],
                    [{'method': 'rmrl_gts', 'n_epoch': 200,
                      'score_at_3': 12.5},
                     {'method': 'uniform_maml', 'n_epoch': 200,
                      'score_at_3': ''}])
        assert read_file(path) == ('method,n_epoch,score_at_3\n'
                                   'rmrl_gts,200,12.5\n'
                                   'uniform_maml,200,\n')

    def test_write_and_read(self):
        sweep = SweepResult((SweepEntry((0.0,), 1.5, 1.0),
                             SweepEntry((0.5,), -2.0, 0.25)), 0.5,
                            {1: [1.0, -3.0], 2: [2.0, -1.0]})
        path = os.path.join(self.tmpdir, 'sweep.csv')
        write_sweep(path, sweep)
        assert read_file(path).splitlines()[0] == \
            'tau_0,pre,post,post_seed_1,post_seed_2'
        loaded = read_sweep(path)
        assert loaded.step == 0.5
        assert loaded.scores().tolist() == [1.5, -2.0]
        assert loaded.scores('pre').tolist() == [1.0, 0.25]
        assert loaded.per_seed == {'1': [1.0, -3.0], '2': [2.0, -1.0]}

    def test_empty_file(self):
        path = os.path.join(self.tmpdir, 'sweep.csv')
        write_sweep(path, SweepResult((), 0.5))
        with pytest.raises(InputError):
            read_sweep(path)


class TestCheckpoints(object):

    def setup_method(self, method):
        self.tmpdir = mkdtemp()

    def teardown_method(self, method):
        shutil.rmtree(self.tmpdir)

    def test_save_and_load(self):
        path = save_checkpoint(checkpoint_path(self.tmpdir, 7),
                               {'epoch': 7, 'theta': [0.1, -0.2]})
        assert os.path.basename(path) == 'epoch-00007.json'
        data = load_checkpoint(path)
        assert data['format'] == CHECKPOINT_FORMAT
        assert data['theta'] == [0.1, -0.2]

    def test_latest(self):
        assert latest_checkpoint(os.path.join(self.tmpdir, 'none')) is None
        assert latest_checkpoint(self.tmpdir) is None
        for epoch in (1, 10, 3):
            save_checkpoint(checkpoint_path(self.tmpdir, epoch), {})
        assert latest_checkpoint(self.tmpdir) == \
            checkpoint_path(self.tmpdir, 10)

    def test_not_a_checkpoint(self):
        path = os.path.join(self.tmpdir, 'other.json')
        write_json(path, {'epoch': 1})
        with pytest.raises(InputError):
            load_checkpoint(path)

    def test_unsupported_version(self):
        path = os.path.join(self.tmpdir, 'future.json')
        write_json(path, {'format': CHECKPOINT_FORMAT, 'version': 99})
        with pytest.raises(InputError):
            load_checkpoint(path)

    def test_unreadable(self):
        with pytest.raises(InputError):
            load_checkpoint(os.path.join(self.tmpdir, 'missing.json'))
