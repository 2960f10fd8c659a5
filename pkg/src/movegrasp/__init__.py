"""Adversarial move-and-grasp: a kinematic grasping game, recurrent actor-critic
agents trained against a learned object mover, and a speed-bin evaluation harness."""

__version__ = "0.1.0"
