"""Physical constants (CODATA 2018), CGS-Gaussian units.

All magnetic fields are in gauss, masses in grams, frequencies in rad/s.
The whole constant set lives in this one table so that a different choice
(or a different particle) cannot silently shift dimensionless results:
every downstream module works in Compton units and never touches these.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class CodataConstants:
    hbar: float = 1.054571817e-27        # erg s
    c: float = 2.99792458e10             # cm/s
    m_e: float = 9.1093837015e-28        # g
    e_abs: float = 4.80320471257e-10     # statC, |elementary charge|
    mu_b: float = 9.2740100783e-21       # erg/G, Bohr magneton |e|hbar/(2 m_e c)


CODATA = CodataConstants()


def compton_length(mass: float) -> float:
    """Reduced Compton wavelength hbar/(m c) in cm."""
    return CODATA.hbar / (mass * CODATA.c)
