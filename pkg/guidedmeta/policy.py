# -*- coding: utf-8 -*-

"""Gaussian feed-forward policy over a flat parameter vector and its
REINFORCE loss.

The parameter vector `theta` holds, in order, the weights and biases of
two `tanh` hidden layers, the linear output layer producing the action
mean, and one state-independent log standard deviation per action
dimension.
"""

import math

import numpy as np

from guidedmeta import autodiff
from guidedmeta.core import InputError

LOG_2PI = math.log(2.0 * math.pi)


class GaussianMLP(object):

    def __init__(self, obs_dim, act_dim, hidden=64):
        self.obs_dim = int(obs_dim)
        self.act_dim = int(act_dim)
        self.hidden = int(hidden)
        sizes = (self.obs_dim, self.hidden, self.hidden, self.act_dim)
        self.shapes = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            self.shapes.append((fan_in, fan_out))
            self.shapes.append((fan_out,))
        self.shapes.append((self.act_dim,))
        self.size = sum(int(np.prod(s)) for s in self.shapes)

    def __repr__(self):
        return '<GaussianMLP {}-{}-{}-{} ({} parameters)>'.format(
            self.obs_dim, self.hidden, self.hidden, self.act_dim, self.size)

    def architecture(self):
        return {'type': 'gaussian_mlp', 'obs_dim': self.obs_dim,
                'act_dim': self.act_dim, 'hidden': self.hidden,
                'size': self.size}

    @classmethod
    def from_architecture(cls, arch):
        return cls(arch['obs_dim'], arch['act_dim'], arch['hidden'])

    def init(self, rng):
        """Weights uniform in +-1/sqrt(fan_in), zero biases, unit std."""
        parts = []
        for shape in self.shapes[:-1]:
            if len(shape) == 2:
                bound = 1.0 / math.sqrt(shape[0])
                parts.append(rng.uniform(-bound, bound, size=shape).ravel())
            else:
                parts.append(np.zeros(shape))
        parts.append(np.zeros(self.act_dim))
        return np.concatenate(parts)

    def unpack(self, theta):
        """Split `theta` (array or tape `Var`) into its layer tensors."""
        if theta.shape != (self.size,):
            raise InputError("Expected {} parameters, got shape {}"
                             .format(self.size, theta.shape))
        tensors, offset = [], 0
        for shape in self.shapes:
            n = int(np.prod(shape))
            tensors.append(theta[offset:offset + n].reshape(*shape))
            offset += n
        return tensors

    def mean(self, theta, obs):
        w1, b1, w2, b2, w3, b3, _ = self.unpack(theta)
        h = np.tanh(obs @ w1 + b1)
        h = np.tanh(h @ w2 + b2)
        return h @ w3 + b3

    def sample(self, theta, obs, rng):
        """Actions for a batch of observations."""
        mu = self.mean(theta, obs)
        std = np.exp(theta[-self.act_dim:])
        return mu + std * rng.standard_normal(mu.shape)

    def log_prob(self, theta, obs, actions):
        """Log-density of `actions` as a tape node of shape `(n,)`."""
        w1, b1, w2, b2, w3, b3, log_std = self.unpack(theta)
        h = autodiff.tanh(autodiff.matmul(obs, w1) + b1)
        h = autodiff.tanh(autodiff.matmul(h, w2) + b2)
        mu = autodiff.matmul(h, w3) + b3
        z = (autodiff.constant(actions) - mu) * autodiff.exp(-log_std)
        per_dim = z * z * (-0.5) - log_std - 0.5 * LOG_2PI
        return per_dim.sum(axis=1)


def returns_to_go(rewards, gamma):
    """Discounted return from every step to the end of the episode."""
    returns = np.zeros(len(rewards))
    running = 0.0
    for t in range(len(rewards) - 1, -1, -1):
        running = rewards[t] + gamma * running
        returns[t] = running
    return returns


def advantages(trajectories, gamma):
    """Return-to-go minus the per-step mean over the batch, concatenated."""
    returns = [returns_to_go(tr.rewards, gamma) for tr in trajectories]
    longest = max((len(g) for g in returns), default=0)
    padded = np.zeros((len(returns), longest))
    mask = np.zeros((len(returns), longest), dtype=bool)
    for i, g in enumerate(returns):
        padded[i, :len(g)] = g
        mask[i, :len(g)] = True
    counts = np.maximum(mask.sum(axis=0), 1)
    baseline = padded.sum(axis=0) / counts
    return np.concatenate([g - baseline[:len(g)] for g in returns]) \
        if returns else np.empty(0)


def policy_loss(policy, theta, trajectories, gamma):
    """Negative REINFORCE objective with a mean-return baseline.

    `theta` is a tape `Var`; the result is a scalar `Var`. The loss is the
    mean over trajectories of `sum_t -log pi(a_t|s_t) * (G_t - b_t)`.
    """
    if not trajectories:
        raise InputError("policy_loss needs at least one trajectory")
    adv = advantages(trajectories, gamma)
    if adv.size == 0:
        return theta.sum() * 0.0
    obs = np.concatenate([tr.states for tr in trajectories])
    actions = np.concatenate([tr.actions for tr in trajectories])
    logp = policy.log_prob(theta, obs, actions)
    return (logp * adv).sum() * (-1.0 / len(trajectories))


def loss_and_grad(policy, theta, trajectories, gamma):
    """`(loss, d loss / d theta)` at the array `theta`."""
    return autodiff.gradient(
        lambda var: policy_loss(policy, var, trajectories, gamma), theta)
