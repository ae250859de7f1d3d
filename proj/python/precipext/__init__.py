"""Wet-period segmentation, model fitting and precipitation anomaly tests."""

from ._precipext import *  # noqa: F401,F403
from ._precipext import __version__  # noqa: F401
