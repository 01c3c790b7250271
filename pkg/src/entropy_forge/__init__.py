"""entropy-forge: telegraph-noise entropy source simulation, time-bin
extraction, and randomness validation.

Subpackages follow the pipeline order: device (simulator), extraction
(edges to symbols), stats (first-line characterization), chaos
(determinism probes), sp90b (entropy assessment), apps (randomized
algorithm consumers), cli (command-line driver).
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401

__all__ = ["errors", "__version__"]
