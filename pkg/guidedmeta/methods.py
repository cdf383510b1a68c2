# -*- coding: utf-8 -*-

"""Task sampling strategies selectable with `[experiment] method`."""

from guidedmeta.api import ISamplingMethod
from guidedmeta.core import Component, StateError, implements
from guidedmeta.regions import full_partition
from guidedmeta.sampler import epoch0_grid, sample_batch, uniform_plan
from guidedmeta.scores import build_curve, probability


class SamplingMethod(Component):
    """Shared behaviour: the evenly spaced grid at epoch 0."""

    abstract = True

    implements(ISamplingMethod)

    name = None
    uses_partition = False
    uses_scores = False

    def plan(self, state, epoch, rng):
        if epoch == 0:
            return epoch0_grid(state.bounds, state.sampler.n_batch), None
        return self.later_plan(state, epoch, rng)

    def later_plan(self, state, epoch, rng):
        raise NotImplementedError

    def score_distribution(self, state):
        """`(curve, distribution)` from the score history, or
        `(None, None)` while too few bins are scored.
        """
        try:
            curve = build_curve(state.table)
        except StateError as e:
            self.log.debug("Sampling uniformly inside the regions: %s", e)
            return None, None
        return curve, probability(curve)


class GuidedTaskSampling(SamplingMethod):
    """Score-prioritized sampling inside the scheduled easy and middle
    regions.
    """

    name = 'rmrl_gts'
    uses_partition = True
    uses_scores = True

    def later_plan(self, state, epoch, rng):
        curve, dist = self.score_distribution(state)
        return sample_batch(state.partition, dist, state.sampler, rng,
                            epoch), curve


class RegionsOnly(SamplingMethod):
    """Uniform sampling inside the scheduled easy and middle regions."""

    name = 'approach1_only'
    uses_partition = True

    def later_plan(self, state, epoch, rng):
        return sample_batch(state.partition, None, state.sampler, rng,
                            epoch), None


class ScoresOnly(SamplingMethod):
    """Score-prioritized sampling with the whole distribution as the easy
    region.
    """

    name = 'approach2_only'
    uses_scores = True

    def later_plan(self, state, epoch, rng):
        curve, dist = self.score_distribution(state)
        return sample_batch(full_partition(state.bounds), dist,
                            state.sampler, rng, epoch), curve


class UniformSampling(SamplingMethod):
    """Plain MAML: tasks uniform over the bounds at every epoch."""

    name = 'uniform_maml'

    def plan(self, state, epoch, rng):
        return uniform_plan(state.bounds, state.sampler.n_batch, rng,
                            epoch), None
