"""Fixed-design GLM maximum likelihood with Wald inference, regularity
diagnostics, and seeded Monte Carlo convergence experiments."""

from fdglm._core import *  # noqa: F401,F403
from fdglm._core import __version__  # noqa: F401
