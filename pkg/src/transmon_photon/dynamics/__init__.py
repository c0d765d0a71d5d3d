"""Open-system pulse simulation and the experiments built on it."""

from .engine import (
    LindbladConfig,
    PulseSegment,
    PulseSequence,
    SimulationTrace,
    evolve,
    rabi_pi_time,
    step_doubling_error,
)
from .experiments import (
    echo_experiment,
    purcell_sweep,
    rabi_chevron,
    ramsey_experiment,
    t1_experiment,
)

__all__ = [
    "LindbladConfig",
    "PulseSegment",
    "PulseSequence",
    "SimulationTrace",
    "evolve",
    "rabi_pi_time",
    "step_doubling_error",
    "echo_experiment",
    "purcell_sweep",
    "rabi_chevron",
    "ramsey_experiment",
    "t1_experiment",
]
