"""Cubic characteristic equation for the light-front energy variable.

With ``E`` the light-front combination (energy minus longitudinal momentum),
``e0`` the resonance parameter and ``b = 2p - Omega``, the equation reads::

    E (E + b) - 1 - E h^2 / (E - e0) = 0

Clearing the denominator gives the cubic

    (E - e0) [E (E + b) - 1] - E h^2 = 0
    <=>  E^3 + (b - e0) E^2 - (1 + e0 b + h^2) E + e0 = 0.

At the singular momentum, b = 1/e0 - e0, the h = 0 cubic factors exactly as
(E - e0)^2 (E + 1/e0): a double root at e0 plus a third root at -1/e0.  For
small h the double root splits into the singular pair

    E(+/-) = e0 +/- h e0/sqrt(e0^2+1) + h^2 E2 + ...

whose odd orders carry opposite signs across the pair.  The h^2 coefficient
E2 is not given in closed form anywhere authoritative; it is fitted
numerically here (Richardson extrapolation over h) and reported as derived.

Root finding: companion-matrix eigenvalues followed by Newton polish on the
cleared cubic.  This stays robust near the double root, where closed-form
cubic solutions lose half the digits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DegenerateStateError

#: |b - (1/e0 - e0)| below this is treated as the singular configuration.
SINGULAR_B_TOL = 1e-9

#: Two roots closer than this, outside the singular configuration, trigger an
#: ill-conditioning warning.
ILL_CONDITIONED_GAP = 1e-8


@dataclass(frozen=True)
class CharInput:
    e0: float
    h: float
    b: float

    def __post_init__(self):
        if self.e0 <= 0:
            raise ValueError(f"e0 must be positive, got {self.e0}")
        if self.h < 0:
            raise ValueError(f"h must be nonnegative, got {self.h}")


@dataclass(frozen=True)
class CharRoots:
    """All three roots of the cleared cubic plus classification metadata.

    In the singular configuration the roots are ordered (plus branch, minus
    branch, third root); otherwise by descending real part.  ``residuals``
    are relative residuals of the cleared cubic at each root.
    """

    roots: tuple[complex, complex, complex]
    classification: str               # "singular_pair" | "generic"
    pair_slope: float | None          # e0/sqrt(e0^2+1) when singular
    residuals: tuple[float, float, float]
    warnings: tuple[str, ...] = field(default=())


def cubic_coefficients(inp: CharInput) -> np.ndarray:
    """Monic coefficients [1, c2, c1, c0] of the cleared cubic."""
    return np.array(
        [1.0, inp.b - inp.e0, -(1.0 + inp.e0 * inp.b + inp.h**2), inp.e0]
    )


def cleared_cubic(e, inp: CharInput):
    c = cubic_coefficients(inp)
    return ((e + c[1]) * e + c[2]) * e + c[3]


def _cubic_derivative(e, inp: CharInput):
    c = cubic_coefficients(inp)
    return (3.0 * e + 2.0 * c[1]) * e + c[2]


def relative_residual(e, inp: CharInput) -> float:
    """|cubic(E)| scaled by the magnitude sum of its Horner terms."""
    c = cubic_coefficients(inp)
    a = abs(e)
    scale = ((a + abs(c[1])) * a + abs(c[2])) * a + abs(c[3])
    return float(abs(cleared_cubic(e, inp)) / scale)


def singular_b(e0: float) -> float:
    """The b value at which the h=0 cubic acquires its double root."""
    return 1.0 / e0 - e0


def solve_characteristic(inp: CharInput,
                         singular_b_tol: float = SINGULAR_B_TOL) -> CharRoots:
    """Solve the cleared cubic; flag and order the singular configuration."""
    is_singular = abs(inp.b - singular_b(inp.e0)) <= singular_b_tol
    warnings: list[str] = []

    if is_singular and inp.h == 0.0:
        # Exact factorization (E - e0)^2 (E + 1/e0); eigenvalue methods can
        # place a double root only to ~sqrt(eps).
        roots = np.array([inp.e0, inp.e0, -1.0 / inp.e0], dtype=complex)
    else:
        roots = np.roots(cubic_coefficients(inp)).astype(complex)
        for _ in range(3):
            f = cleared_cubic(roots, inp)
            fp = _cubic_derivative(roots, inp)
            step = np.where(np.abs(fp) > 0, f / np.where(fp == 0, 1, fp), 0.0)
            roots = roots - step

    if is_singular:
        # pair = two roots nearest e0, plus branch first
        order = np.argsort(np.abs(roots - inp.e0))
        pair = sorted(order[:2], key=lambda i: -roots[i].real)
        roots = roots[[pair[0], pair[1], order[2]]]
        pair_slope = inp.e0 / np.sqrt(inp.e0**2 + 1.0)
    else:
        roots = roots[np.argsort(-roots.real)]
        pair_slope = None
        gaps = [abs(roots[i] - roots[j]) for i in range(3) for j in range(i + 1, 3)]
        if min(gaps) < ILL_CONDITIONED_GAP:
            warnings.append(
                f"two roots within {min(gaps):.3g} of each other outside the "
                "singular configuration; results may be ill-conditioned"
            )

    residuals = tuple(relative_residual(e, inp) for e in roots)
    return CharRoots(
        roots=tuple(complex(e) for e in roots),
        classification="singular_pair" if is_singular else "generic",
        pair_slope=pair_slope,
        residuals=residuals,
        warnings=tuple(warnings),
    )


def singular_expansion(e0: float, h: float, order: int = 1) -> tuple[float, float]:
    """Perturbative singular-pair roots E(+), E(-) to the requested order.

    Order 1 is the closed-form slope +/- e0/sqrt(e0^2+1); order 2 adds the
    numerically fitted h^2 coefficient (identical for both branches).
    """
    if e0 <= 0:
        raise ValueError(f"e0 must be positive, got {e0}")
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    slope = e0 / np.sqrt(e0**2 + 1.0)
    e_plus = e0 + h * slope
    e_minus = e0 - h * slope
    if order == 2:
        e2 = second_order_coefficient(e0)
        e_plus += h * h * e2
        e_minus += h * h * e2
    return float(e_plus), float(e_minus)


@lru_cache(maxsize=128)
def second_order_coefficient(e0: float) -> float:
    """Fitted h^2 coefficient of the singular-pair expansion.

    Uses the branch-averaged root shift (odd orders cancel across the pair)
    at two step sizes with Richardson extrapolation; accuracy ~1e-8.
    """
    def estimate(h):
        inp = CharInput(e0=e0, h=h, b=singular_b(e0))
        r = solve_characteristic(inp)
        mean = 0.5 * (r.roots[0].real + r.roots[1].real)
        return (mean - e0) / h**2

    h0 = 1e-2
    a, b = estimate(h0), estimate(h0 / 2)
    return float((4.0 * b - a) / 3.0)


@dataclass(frozen=True)
class GaussianParams:
    """Gaussian envelope decay rate d (Compton^-2) and displacement d2 (Compton^-1)."""

    d: float
    d2: float


def gaussian_params(e0: float, e_root: float, h: float,
                    omega_n: float) -> GaussianParams:
    """Exact envelope parameters d = Omega e0 / 2 and d2 = e0 h / (2 (E - e0)).

    For the singular roots d2 approaches +/- sqrt(e0^2+1)/2 as h -> 0.
    """
    d = 0.5 * omega_n * e0
    if d <= 0:
        raise ValueError(f"d = Omega e0 / 2 must be positive, got {d}")
    if abs(e_root - e0) < 1e-14:
        raise DegenerateStateError(
            "E coincides with e0 (h = 0 singular point); the displacement "
            "d2 = e0 h / (2 (E - e0)) is undefined there"
        )
    d2 = e0 * h / (2.0 * (e_root - e0))
    return GaussianParams(d=float(d), d2=float(d2))


def d2_leading(e0: float, branch: int) -> float:
    """Leading-order displacement +/- sqrt(e0^2+1)/2 for the singular pair."""
    if branch not in (-1, 1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    return branch * 0.5 * np.sqrt(e0**2 + 1.0)
