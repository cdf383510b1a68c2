# -*- coding: utf-8 -*-

"""On-disk artifacts of a run: CSV logs, JSON summaries and checkpoints."""

import csv
import json
import os

import numpy as np

from guidedmeta.core import InputError
from guidedmeta.metrics import SweepEntry, SweepResult
from guidedmeta.taskspace import task_key
from guidedmeta.util.file import AtomicFile, ensure_dir

CHECKPOINT_FORMAT = 'guidedmeta-checkpoint'
CHECKPOINT_VERSION = 1

RUN_FILE = 'run.csv'
PARTITIONS_FILE = 'partitions.csv'
CURVES_FILE = 'curves.csv'
EPOCHS_FILE = 'epochs.csv'
SWEEP_FILE = 'sweep.csv'
SUMMARY_FILE = 'summary.json'
SCALING_FILE = 'scaling.csv'
CONFIG_FILE = 'config.cfg'
CHECKPOINT_DIR = 'checkpoints'


def task_columns(dimension):
    return ['task_{}'.format(i) for i in range(dimension)]


def align(plan, scores):
    """Yield `(task, label, r_mean)` for every task of `plan`.

    `scores` holds the `(task, r_mean)` pairs of the tasks that were
    evaluated, in plan order; left-out tasks get `None`.
    """
    scores = list(scores)
    k = 0
    for tau, label in plan:
        r_mean = None
        if k < len(scores) and task_key(scores[k][0]) == task_key(tau):
            r_mean = scores[k][1]
            k += 1
        yield task_key(tau), label, r_mean


class RunLog(object):
    """Append-only CSV logs of one `(method, seed)` run directory.

    The partition and curve logs only exist for methods that produce
    partitions or score curves.
    """

    def __init__(self, directory, dimension=1, partitions=True, curves=True):
        self.directory = directory
        self.dimension = dimension
        self.headers = {
            RUN_FILE: ['epoch'] + task_columns(dimension) +
                      ['region', 'r_mean'],
            EPOCHS_FILE: ['epoch', 'n_tasks', 'n_scored', 'mean_r_mean',
                          'wall_time'],
        }
        if partitions:
            self.headers[PARTITIONS_FILE] = ['epoch', 'tau_middle1',
                                             'tau_middle2']
        if curves:
            self.headers[CURVES_FILE] = ['epoch', 'bin_center', 'f_bar', 'p']

    def path(self, name):
        return os.path.join(self.directory, name)

    @property
    def checkpoint_dir(self):
        return os.path.join(self.directory, CHECKPOINT_DIR)

    def open(self, resume_epoch=None):
        """Create fresh log files, or keep the rows up to `resume_epoch`."""
        ensure_dir(self.checkpoint_dir)
        for name, header in self.headers.items():
            rows = []
            if resume_epoch is not None and os.path.exists(self.path(name)):
                rows = [row for row in read_csv(self.path(name))
                        if int(row['epoch']) <= resume_epoch]
            write_table(self.path(name), header, rows)
        return self

    def _append(self, name, rows):
        with open(self.path(name), 'a', newline='') as f:
            csv.writer(f, lineterminator='\n').writerows(rows)

    def write_run(self, epoch, plan, scores):
        rows = []
        for tau, label, r_mean in align(plan, scores):
            rows.append([epoch] + list(tau) +
                        [label, '' if r_mean is None else r_mean])
        self._append(RUN_FILE, rows)

    def write_partition(self, epoch, partition):
        self._append(PARTITIONS_FILE, [[epoch, partition.tau_middle1,
                                        partition.tau_middle2]])

    def write_curve(self, epoch, curve, dist):
        self._append(CURVES_FILE, [[epoch, c, f, p] for c, f, p in zip(
            curve.centers, curve.f_bar, dist.p)])

    def write_epoch(self, epoch, n_tasks, scores, wall_time):
        values = [r for _, r in scores]
        mean = float(np.mean(values)) if values else ''
        self._append(EPOCHS_FILE, [[epoch, n_tasks, len(values), mean,
                                    round(wall_time, 6)]])


def write_table(path, header, rows):
    """Write the dicts `rows` as a CSV file with the columns `header`."""
    with AtomicFile(path, 'w') as f:
        writer = csv.DictWriter(f, header, lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)


def read_csv(path):
    with open(path, newline='') as f:
        return list(csv.DictReader(f))


def write_json(path, data):
    with AtomicFile(path, 'w') as f:
        json.dump(data, f, indent=2)
        f.write('\n')


def read_json(path):
    with open(path) as f:
        return json.load(f)


def write_sweep(path, sweep):
    dimension = len(sweep.entries[0].task) if sweep.entries else 1
    seeds = list(sweep.per_seed)
    header = ['tau_{}'.format(i) for i in range(dimension)] + \
        ['pre', 'post'] + ['post_seed_{}'.format(s) for s in seeds]
    with AtomicFile(path, 'w') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for i, entry in enumerate(sweep.entries):
            writer.writerow(list(entry.task) + [entry.pre, entry.post] +
                            [sweep.per_seed[s][i] for s in seeds])


def read_sweep(path):
    rows = read_csv(path)
    if not rows:
        raise InputError("Empty sweep file {}".format(path))
    columns = sorted(k for k in rows[0] if k.startswith('tau_'))
    entries = tuple(SweepEntry(tuple(float(row[c]) for c in columns),
                               float(row['post']), float(row['pre']))
                    for row in rows)
    seeds = [k[len('post_seed_'):] for k in rows[0]
             if k.startswith('post_seed_')]
    per_seed = {s: [float(row['post_seed_' + s]) for row in rows]
                for s in seeds}
    sweep = SweepResult(entries, 0.05, per_seed)
    if len(entries) > 1:
        d = sweep.difficulties
        sweep = SweepResult(entries, float(d[1] - d[0]), per_seed)
    return sweep


def checkpoint_path(directory, epoch):
    return os.path.join(directory, 'epoch-{:05d}.json'.format(epoch))


def save_checkpoint(path, data):
    payload = {'format': CHECKPOINT_FORMAT, 'version': CHECKPOINT_VERSION}
    payload.update(data)
    write_json(path, payload)
    return path


def load_checkpoint(path):
    try:
        data = read_json(path)
    except (OSError, ValueError) as e:
        raise InputError("Cannot read checkpoint {}: {}".format(path, e))
    if data.get('format') != CHECKPOINT_FORMAT:
        raise InputError("{} is not a checkpoint file".format(path))
    if data.get('version') != CHECKPOINT_VERSION:
        raise InputError("Unsupported checkpoint version {!r}"
                         .format(data.get('version')))
    return data


def latest_checkpoint(directory):
    """Path of the most recent checkpoint in `directory`, or `None`."""
    if not os.path.isdir(directory):
        return None
    names = sorted(n for n in os.listdir(directory)
                   if n.startswith('epoch-') and n.endswith('.json'))
    return os.path.join(directory, names[-1]) if names else None
