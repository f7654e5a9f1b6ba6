"""Reconfigurable block cipher engine."""

from .engine import *  # noqa: F401,F403
from .engine import __all__
