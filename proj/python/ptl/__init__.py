"""Prime counting, twin-prime constants, GPY divisor sums and progression error sums."""

from ._core import *  # noqa: F401,F403
from ._core import ArithmeticOverflow, ConvergenceError, DomainError, Error, ResourceError  # noqa: F401

__version__ = "0.1.0"
