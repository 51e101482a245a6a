"""Adaptive sliding-mode control workbench.

Closed-loop simulation of the scalar plant s' = u + d under barrier-gain
adaptive relay controllers, with post-hoc convergence/chattering analysis
and a batch experiment runner.
"""

from barriersmc import analysis, controllers, experiment, gains, simkernel

__all__ = ["analysis", "controllers", "experiment", "gains", "simkernel"]
