"""Numerical toolkit for multidimensional Hausdorff operators.

Everything lives in the compiled core; this package just re-exports it.
"""

from ._hkit import *  # noqa: F401,F403
from ._hkit import __doc__  # noqa: F401

__version__ = "0.1.0"
