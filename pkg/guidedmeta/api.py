# -*- coding: utf-8 -*-

from guidedmeta.core import Interface


class IEnvironmentProvider(Interface):
    """Provider of a task-parameterized environment family.

    Implementations carry a `name` attribute matched against `[env] kind`
    and the class attributes `dimension` (task dimension, 1 or 2),
    `obs_dim`, `act_dim`, `default_n_batch`, `default_test_step` and
    `symbol` (the letter used for the task axis in summary labels).
    """

    def create_env(spec, bounds):
        """Return an environment instance for the given `EnvSpec` and
        training `TaskBounds`.
        """


class ISamplingMethod(Interface):
    """A task sampling strategy for the meta-training loop.

    Implementations carry a `name` attribute matched against
    `[experiment] method`, and the flags `uses_partition` and `uses_scores`
    telling the runner which curriculum state to maintain.
    """

    def plan(state, epoch, rng):
        """Return a `(SamplingPlan, ScoreCurve or None)` tuple for `epoch`.

        `state` is the runner's `CurriculumState`; the curve is the one the
        plan was drawn from, if any, and is only used for logging.
        """


class IExperimentParticipant(Interface):
    """Extension point interface for components that want to observe a
    training run.

    Participants are called in arbitrary order and must not change the run
    state they are given.
    """

    def run_started(run):
        """Called once per seed, before the first epoch is executed."""

    def epoch_finished(run, record):
        """Called after every epoch with the `EpochRecord` of that epoch."""

    def run_finished(run):
        """Called once per seed after the last epoch (or after an abort)."""
