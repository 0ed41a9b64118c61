"""Sequential plurality polls over social networks.

Library layout:

* `model`: instances, the voting rule, simulation.
* `graphkit`: graph helpers, tree decompositions, orientation counting.
* `oracle`: brute-force solvers enumerating acyclic orientations.
* `dpsolver`: dynamic programs over nice tree decompositions.
* `reductions`: hardness gadget generators and witness orders.
* `cli`: the `socialpolls` command line tool.
"""

from .model import (
    AgentPrefs,
    Instance,
    PollInputError,
    ResourceLimitError,
    ScoreFunction,
    Simulation,
    UnsupportedModeError,
    choice,
    instance_union,
    orientation_of,
    simulate_order,
    simulate_orientation,
    winners,
)

__all__ = [
    "AgentPrefs",
    "Instance",
    "PollInputError",
    "ResourceLimitError",
    "ScoreFunction",
    "Simulation",
    "UnsupportedModeError",
    "choice",
    "instance_union",
    "orientation_of",
    "simulate_order",
    "simulate_orientation",
    "winners",
]

__version__ = "0.1.0"
