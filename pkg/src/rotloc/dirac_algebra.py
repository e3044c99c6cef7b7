"""4x4 Dirac matrices and the spinor operators of the rotating-frame change.

Representation: Dirac-Pauli, i.e. ``beta = diag(1, 1, -1, -1)`` and
``alpha_k`` with the Pauli matrix ``sigma_k`` on the off-diagonal blocks.
This choice pairs spinor components (1,3) and (2,4) the way the ground-state
spinor does, and the equation-residual check in :mod:`rotloc.wavefunction`
validates it empirically (residuals at rounding level).  Every report carries
the representation name so the convention is auditable.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm as _scipy_expm

from .errors import DomainBoundError

#: Largest operator norm accepted by :func:`mat_exp`.  The exponents used in
#: this problem stay below ~50; anything past the cap is almost certainly a
#: unit mistake and would overflow double precision anyway.
MATEXP_NORM_CAP = 200.0

REPRESENTATION = "dirac-pauli"

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _alpha(k: int) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    m[:2, 2:] = _SIGMA[k]
    m[2:, :2] = _SIGMA[k]
    return m


ALPHA1 = _alpha(0)
ALPHA2 = _alpha(1)
ALPHA3 = _alpha(2)
BETA = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)

for _m in (ALPHA1, ALPHA2, ALPHA3, BETA):
    _m.flags.writeable = False


def dirac_matrices() -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Return writable copies of (alpha1, alpha2, alpha3, beta)."""
    return ALPHA1.copy(), ALPHA2.copy(), ALPHA3.copy(), BETA.copy()


def mat_exp(m: np.ndarray) -> np.ndarray:
    """Matrix exponential of a 4x4 complex matrix.

    Delegates to the scaling-and-squaring Pade implementation in scipy;
    rejects inputs whose 2-norm exceeds :data:`MATEXP_NORM_CAP` (the result
    would be meaningless at double precision).
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    norm = np.linalg.norm(m, 2)
    if norm > MATEXP_NORM_CAP:
        raise OverflowError(
            f"matrix norm {norm:.3g} exceeds the cap {MATEXP_NORM_CAP}; "
            "the exponential would overflow double precision"
        )
    return _scipy_expm(m)


def boost_angles(r: float, omega_n: float) -> tuple[float, float]:
    """Rapidity ``Phi`` and rotation angle ``Phi1`` at cylindrical radius r.

    cosh(Phi) = 1/sqrt(1 - r^2 Omega^2),  sinh(Phi) = r Omega cosh(Phi),
    sin(Phi1) = -r Omega,                 cos(Phi1) = 1/cosh(Phi).
    """
    x = r * omega_n
    if x * x >= 1.0:
        raise DomainBoundError(
            f"r*Omega = {x:.6g} reaches the co-rotation bound; the rapidity "
            "diverges at r = lambda/(2 pi)"
        )
    return float(np.arctanh(x)), float(-np.arcsin(x))


def boost_operator(phi: float, phi1: float) -> tuple[np.ndarray, np.ndarray]:
    """Spinor operators (P, P~) for the rotating-frame change.

    P = exp(alpha2 alpha3 Phi1 / 2 + alpha2 Phi / 2), evaluated as a single
    matrix exponential: the two generators do not commute, so the factor
    order of a product form would be material and is avoided.  P~ = beta P beta.
    """
    gen = 0.5 * (ALPHA2 @ ALPHA3) * phi1 + 0.5 * ALPHA2 * phi
    p = mat_exp(gen)
    p_tilde = BETA @ p @ BETA
    return p, p_tilde
