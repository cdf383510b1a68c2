# -*- coding: utf-8 -*-

from guidedmeta.envs.base import EnvSpec, Environment, Trajectory, rollout
from guidedmeta.envs.navigation import NavigationEnvironment, nav_step
from guidedmeta.envs.velocity import VelocityEnvironment, vel_step
