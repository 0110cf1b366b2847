"""Spin-one DKP equation in one-dimensional Woods-Saxon potentials.

Closed-form transmission/reflection coefficients, transmission resonances,
particle and antiparticle bound-state spectra with critical-potential search,
and an independent direct-integration oracle for cross-checks.
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401
