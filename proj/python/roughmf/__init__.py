"""Multi-factor Markovian approximation of the rough Heston model."""

from ._roughmf import *  # noqa: F401,F403
from ._roughmf import __doc__  # noqa: F401
