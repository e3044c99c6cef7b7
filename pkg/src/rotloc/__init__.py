"""Localization radii of Dirac fermions in a rotating electromagnetic field.

Core library layout:

- ``params``          unit normalization and derived model parameters
- ``dirac_algebra``   4x4 Dirac matrices, matrix exponential, frame operators
- ``frame_transform`` rotating-frame coordinate map, Jacobian, radius bound
- ``characteristic``  cubic characteristic equation and singular-pair expansions
- ``wavefunction``    exact lab-frame wavefunction and equation-residual checks
- ``logquad``         signed log-domain scalars and overflow-safe quadrature
- ``localization``    lab/rotating-frame localization radii and growth-rate fits
- ``service``         FastAPI wrapper (pydantic request/response schemas)
- ``cli``             thin client over the service layer
"""

__version__ = "0.1.0"

from .errors import ConvergenceError, DegenerateStateError, DomainBoundError

__all__ = [
    "__version__",
    "ConvergenceError",
    "DegenerateStateError",
    "DomainBoundError",
]
