"""Rational multi-soliton dynamics for the half-wave maps equation."""

from ._hwm import *  # noqa: F401,F403
from ._hwm import __doc__  # noqa: F401

__version__ = "0.1.0"
