"""Unit normalization and the derived model parameters.

Everything downstream works in Compton units: lengths in hbar/mc, times in
hbar/mc^2, frequencies as Omega -> hbar Omega / (m c^2), momenta in mc,
energies in mc^2.  This module is the only place physical units appear.

Sign conventions: the resonance parameter is

    e0 = -2 mu H_z / (hbar Omega),   mu = q hbar / (2 m c),

with the charge q = charge_sign * |e| (default negative).  e0 is required to
be positive; flipping the charge sign is compensated by flipping the field
direction or the wave polarization, and inputs that land at e0 <= 0 are
rejected rather than silently flipped.  The wave parameter h = |q| H / (m c
Omega) is kept nonnegative; its sign freedom is the same polarization freedom
and is tracked by the convention flags in reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import characteristic
from .constants import CODATA
from .errors import SignConventionError

#: |h| above this is flagged: the perturbative expansions assume small h.
H_SMALL_THRESHOLD = 0.1


@dataclass(frozen=True)
class PhysicalInput:
    """Physical description of the field configuration (CGS-Gaussian).

    omega: wave angular frequency, rad/s; h_z: constant magnetic field,
    gauss; h_wave: wave magnetic amplitude, gauss (nonnegative); mass: g;
    charge_sign: -1 or +1.
    """

    omega: float
    h_z: float
    h_wave: float
    mass: float = CODATA.m_e
    charge_sign: int = -1

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.mass <= 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.charge_sign not in (-1, 1):
            raise ValueError(f"charge_sign must be -1 or +1, got {self.charge_sign}")
        if self.h_wave < 0:
            raise ValueError(f"h_wave must be nonnegative, got {self.h_wave}")


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless model parameters consumed by every other module.

    omega_n: normalized frequency; h: wave-to-frequency ratio H/Omega;
    e0: resonance parameter (> 0); d: Gaussian decay rate Omega e0/2;
    d2: Gaussian displacement (exact, from the chosen root); p: longitudinal
    momentum (mc); energy: E (mc^2), leading order, accuracy ~h; kappa:
    1/omega_n; branch: singular-pair member; h_large: |h| >= 0.1 flag.
    """

    omega_n: float
    h: float
    e0: float
    d: float
    d2: float
    p: float
    energy: float
    kappa: float
    branch: int
    h_large: bool = False


def singular_momentum(e0: float, omega_n: float) -> float:
    """Momentum p = (1/e0 - e0)/2 + Omega/2 required by the singular pair."""
    if e0 <= 0:
        raise ValueError(f"e0 must be positive, got {e0}")
    return 0.5 * (1.0 / e0 - e0) + 0.5 * omega_n


def singular_energy(e0: float, omega_n: float) -> float:
    """Leading-order energy E = (1/e0 + e0)/2 + Omega/2 (accuracy ~h)."""
    if e0 <= 0:
        raise ValueError(f"e0 must be positive, got {e0}")
    return 0.5 * (1.0 / e0 + e0) + 0.5 * omega_n


def from_dimensionless(e0: float, h: float, omega_n: float,
                       branch: int = +1) -> ModelParams:
    """Assemble ModelParams for the singular state at given (e0, h, Omega).

    d2 is the exact displacement computed from the solved characteristic
    root of the requested branch; at h = 0 it degenerates to the
    leading-order value +/- sqrt(e0^2+1)/2.
    """
    if e0 <= 0:
        raise SignConventionError(
            f"e0 = {e0:.6g} must be positive; flip the constant-field "
            "direction or the wave polarization to keep the resonance "
            "parameter positive"
        )
    if omega_n <= 0:
        raise ValueError(f"omega_n must be positive, got {omega_n}")
    if h < 0:
        raise ValueError(f"h must be nonnegative, got {h}")
    if branch not in (-1, 1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")

    p = singular_momentum(e0, omega_n)
    if h > 0:
        roots = characteristic.solve_characteristic(
            characteristic.CharInput(e0=e0, h=h, b=2.0 * p - omega_n)
        )
        e_root = roots.roots[0 if branch == +1 else 1].real
        d2 = characteristic.gaussian_params(e0, e_root, h, omega_n).d2
    else:
        d2 = characteristic.d2_leading(e0, branch)

    return ModelParams(
        omega_n=omega_n,
        h=h,
        e0=e0,
        d=0.5 * omega_n * e0,
        d2=d2,
        p=p,
        energy=singular_energy(e0, omega_n),
        kappa=1.0 / omega_n,
        branch=branch,
        h_large=abs(h) >= H_SMALL_THRESHOLD,
    )


def normalize(inp: PhysicalInput, branch: int = +1) -> ModelParams:
    """Convert physical inputs to dimensionless model parameters.

    Rejects combinations that give e0 <= 0, naming the sign rule: with
    charge_sign = -1 the constant field must point along +z (h_z > 0); for
    charge_sign = +1 either flip the field or use the opposite polarization.
    """
    mc = inp.mass * CODATA.c
    omega_n = CODATA.hbar * inp.omega / (mc * CODATA.c)
    # e0 = -2 mu H_z / (hbar Omega) with mu = charge_sign |e| hbar / (2 m c)
    e0 = -inp.charge_sign * CODATA.e_abs * inp.h_z / (mc * inp.omega)
    if e0 <= 0:
        raise SignConventionError(
            f"resonance parameter e0 = {e0:.6g} is not positive for "
            f"charge_sign={inp.charge_sign}, h_z={inp.h_z}; flip the field "
            "direction or the wave polarization"
        )
    h = CODATA.e_abs * inp.h_wave / (mc * inp.omega)
    return from_dimensionless(e0=e0, h=h, omega_n=omega_n, branch=branch)


def denormalize(params: ModelParams, mass: float = CODATA.m_e,
                charge_sign: int = -1) -> PhysicalInput:
    """Recover the physical inputs that :func:`normalize` maps to ``params``."""
    mc = mass * CODATA.c
    omega = params.omega_n * mc * CODATA.c / CODATA.hbar
    h_z = -charge_sign * params.e0 * mc * omega / CODATA.e_abs
    h_wave = params.h * mc * omega / CODATA.e_abs
    return PhysicalInput(omega=omega, h_z=h_z, h_wave=h_wave, mass=mass,
                         charge_sign=charge_sign)


def char_input(params: ModelParams) -> characteristic.CharInput:
    """CharInput consistent with the stored momentum: b = 2p - Omega."""
    return characteristic.CharInput(
        e0=params.e0, h=params.h, b=2.0 * params.p - params.omega_n
    )


def exact_root(params: ModelParams) -> float:
    """The characteristic root of the stored branch (exact, polished)."""
    if params.h == 0.0:
        return params.e0
    roots = characteristic.solve_characteristic(char_input(params))
    return roots.roots[0 if params.branch == +1 else 1].real


def wavelength_compton(omega_n: float) -> float:
    """Driving wavelength in Compton units: lambda = 2 pi / Omega."""
    return 2.0 * np.pi / omega_n
