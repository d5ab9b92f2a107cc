"""Hypothesis testing and entropic fluctuations for finite quantum systems."""

from ._core import *  # noqa: F401,F403
from ._core import NumericalError, ValidationError, __version__  # noqa: F401
