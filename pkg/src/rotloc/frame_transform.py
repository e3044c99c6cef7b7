"""Rotating-frame coordinate transformation, its Jacobian, and the radius bound.

The map acts on cylindrical coordinates (phi, z, t) at fixed radius r and is
linear in them::

    phi~ = phi + Omega z - Omega t
    z~   = (-r^2 Omega phi + r^2 Omega^2 t) / g + z g
    t~   = (-r^2 Omega phi + t) / g,            g = sqrt(1 - r^2 Omega^2)

All quantities are in Compton units (lengths in hbar/mc, times in hbar/mc^2,
Omega dimensionless). The map exists only for r Omega < 1, i.e. physically
r <= lambda / 2 pi; its determinant equals 1 everywhere inside.

Near the boundary the matrix entries blow up like 1/g while the determinant
stays 1, so determinant evaluation is done in extended precision to keep the
cancellation harmless.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainBoundError

#: Strict-inequality margin for the domain r^2 Omega^2 < 1. Configurable per
#: call; integrals that reach the boundary do so through the sin(theta)
#: substitution, which regularizes it, not through this map.
DEFAULT_BOUNDARY_MARGIN = 1e-12


@dataclass(frozen=True)
class CylindricalEvent:
    """One event in cylindrical coordinates (Compton units)."""

    r: float
    phi: float
    z: float
    t: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"cylindrical radius must be nonnegative, got {self.r}")


def _check_domain(r, omega_n, margin):
    x2 = np.asarray(r, dtype=float) ** 2 * omega_n**2
    if np.any(x2 > 1.0 - margin):
        raise DomainBoundError(
            "r^2 Omega^2 = "
            f"{float(np.max(x2)):.12g} reaches the validity bound 1; the map "
            "exists only for r <= lambda/(2 pi)"
        )


def transform_matrix(r: float, omega_n: float, dtype=float,
                     margin: float = DEFAULT_BOUNDARY_MARGIN) -> np.ndarray:
    """3x3 matrix of the map acting on (phi, z, t) at fixed radius."""
    _check_domain(r, omega_n, margin)
    one = dtype(1)
    r = dtype(r)
    om = dtype(omega_n)
    g = np.sqrt(one - r * r * om * om)
    return np.array(
        [
            [one, om, -om],
            [-r * r * om / g, g, r * r * om * om / g],
            [-r * r * om / g, dtype(0), one / g],
        ]
    )


def to_rotating(e: CylindricalEvent, omega_n: float,
                margin: float = DEFAULT_BOUNDARY_MARGIN) -> CylindricalEvent:
    """Map a lab-frame event to the rotating frame. Radius is invariant."""
    m = transform_matrix(e.r, omega_n, margin=margin)
    phi, z, t = m @ np.array([e.phi, e.z, e.t])
    return CylindricalEvent(r=e.r, phi=float(phi), z=float(z), t=float(t))


def from_rotating(e: CylindricalEvent, omega_n: float,
                  margin: float = DEFAULT_BOUNDARY_MARGIN) -> CylindricalEvent:
    """Inverse map, obtained by solving the linear system at fixed radius.

    The forward formulas do not come with a published inverse; this one is
    derived, not quoted.
    """
    m = transform_matrix(e.r, omega_n, margin=margin)
    phi, z, t = np.linalg.solve(m, np.array([e.phi, e.z, e.t]))
    return CylindricalEvent(r=e.r, phi=float(phi), z=float(z), t=float(t))


def _det3(m: np.ndarray) -> np.ndarray:
    """Cofactor-expansion determinant; works on stacked (..., 3, 3) arrays."""
    a, b, c = m[..., 0, 0], m[..., 0, 1], m[..., 0, 2]
    d, e, f = m[..., 1, 0], m[..., 1, 1], m[..., 1, 2]
    g, h, i = m[..., 2, 0], m[..., 2, 1], m[..., 2, 2]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def jacobian_det(e: CylindricalEvent, omega_n: float,
                 margin: float = DEFAULT_BOUNDARY_MARGIN) -> float:
    """Determinant of d(phi~, z~, t~)/d(phi, z, t) from the analytic matrix.

    Evaluated in extended precision: entries grow like 1/sqrt(1 - r^2 Omega^2)
    while the determinant stays exactly 1.
    """
    m = transform_matrix(e.r, omega_n, dtype=np.longdouble, margin=margin)
    return float(_det3(m))


def jacobian_det_fd(e: CylindricalEvent, omega_n: float, step: float = 1.0,
                    margin: float = DEFAULT_BOUNDARY_MARGIN) -> float:
    """Finite-difference cross-check of :func:`jacobian_det`.

    The map is linear in (phi, z, t), so central differences are exact for
    any step; a large step keeps the rounding error of the divided
    differences small.
    """
    _check_domain(e.r, omega_n, margin)
    x0 = np.array([e.phi, e.z, e.t], dtype=np.longdouble)
    m = transform_matrix(e.r, omega_n, dtype=np.longdouble, margin=margin)
    cols = []
    for j in range(3):
        dx = np.zeros(3, dtype=np.longdouble)
        dx[j] = step
        cols.append((m @ (x0 + dx) - m @ (x0 - dx)) / (2 * np.longdouble(step)))
    jac = np.stack(cols, axis=-1)
    return float(_det3(jac))


def jacobian_dets_batch(r, phi, z, t, omega_n, step: float = 1.0,
                        margin: float = DEFAULT_BOUNDARY_MARGIN):
    """Vectorized (analytic, finite-difference) determinants for event arrays."""
    r = np.asarray(r, dtype=np.longdouble)
    _check_domain(r, omega_n, margin)
    om = np.longdouble(omega_n)
    g = np.sqrt(np.longdouble(1) - r * r * om * om)
    zero = np.zeros_like(r)
    one = np.ones_like(r)
    m = np.stack(
        [
            np.stack([one, om * one, -om * one], axis=-1),
            np.stack([-r * r * om / g, g, r * r * om * om / g], axis=-1),
            np.stack([-r * r * om / g, zero, one / g], axis=-1),
        ],
        axis=-2,
    )
    det_analytic = _det3(m)

    x0 = np.stack([np.asarray(phi, dtype=np.longdouble),
                   np.asarray(z, dtype=np.longdouble),
                   np.asarray(t, dtype=np.longdouble)], axis=-1)
    h = np.longdouble(step)
    cols = []
    for j in range(3):
        dx = np.zeros(3, dtype=np.longdouble)
        dx[j] = h
        fp = np.einsum("...ij,...j->...i", m, x0 + dx)
        fm = np.einsum("...ij,...j->...i", m, x0 - dx)
        cols.append((fp - fm) / (2 * h))
    jac = np.stack(cols, axis=-1)
    det_fd = _det3(jac)
    return np.asarray(det_analytic, dtype=float), np.asarray(det_fd, dtype=float)


def max_radius(omega_n: float) -> float:
    """Upper radius bound of the map in Compton units: 1/Omega.

    In physical units this is lambda/(2 pi) for the wavelength lambda that
    corresponds to Omega.
    """
    if omega_n <= 0:
        raise ValueError(f"omega_n must be positive, got {omega_n}")
    return 1.0 / omega_n
