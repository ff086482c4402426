"""Neumann/Steklov eigenvalue ratio laboratory (C++ core)."""

from ._nsratio import *  # noqa: F401,F403
from ._nsratio import __version__, InputError, ComputationError  # noqa: F401
