"""Edge-triangle exponential random graphs.

Phase diagram of the replica-symmetric regime, exact mean-field laws,
brute-force enumeration for small graphs, a Glauber sampler and the
verification suites built on them.
"""

from ._edgetri import *  # noqa: F401,F403
from ._edgetri import EdgetriError, ExactDistribution, GraphState, PhasePortrait  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
