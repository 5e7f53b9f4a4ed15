"""Random group presentations at density one-half.

Samplers for uniform freely reduced relator families, exact letter-position
laws, the colored coincidence bound, a certificate-checked triviality
pipeline, planar-diagram counting bounds, and the phase classifier for
vanishing rate functions.
"""

from . import diagrams, distribution, pigeonhole, thresholds, trivializer, words
from .rng import RandomSource

__version__ = "0.1.0"

__all__ = [
    "words",
    "distribution",
    "pigeonhole",
    "trivializer",
    "diagrams",
    "thresholds",
    "RandomSource",
    "__version__",
]
