"""Design and simulation toolkit for a flux-tunable transmon coupled to a
quarter-wave CPW resonator, used as a single-photon source."""

from .kernels import AVAILABLE_BACKENDS, DEFAULT_BACKEND

__version__ = "0.1.0"

__all__ = ["AVAILABLE_BACKENDS", "DEFAULT_BACKEND", "__version__"]
