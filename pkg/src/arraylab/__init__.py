"""arraylab: a desk-scale pillar-array manipulation laboratory.

Deterministic quasi-static physics for a grid of vertically sliding pillars,
a frequency-domain action pipeline, tactile-only state estimation, three
episodic manipulation tasks, and a from-scratch PPO trainer.
"""

__version__ = "0.1.0"

from .backend import kernel_name  # noqa: F401  (which physics kernel is active)
