"""Lidar scene perception and driver characterization toolkit."""

from ._core import *  # noqa: F401,F403
