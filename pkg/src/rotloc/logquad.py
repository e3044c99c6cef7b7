"""Signed log-domain scalars and overflow-safe 1D quadrature.

The rotating-frame integrals are Bessel-weighted densities whose values grow
like exp(c * kappa) with kappa up to 1e9, far beyond double range.  Two
ingredients keep everything finite:

* :class:`LogValue`: a signed log-magnitude scalar closed under + and *.
* :func:`integrate_scaled`: adaptive Gauss-Legendre quadrature of integrands
  supplied in offset-exponential form ``prefactor * exp(exponent)``, where the
  caller also supplies the analytic maximum of the exponent.  The quadrature
  runs entirely on the offset integrand (values O(1)) and reattaches the
  offset in log space at the end.

Precision note: for offsets of order 1e9 a double carries only ~1e-7 absolute
resolution, so integrand callables must return the exponent *already reduced
by the offset* (computed in a cancellation-free form).  Folding the offset
into the callable's output and subtracting it here would destroy the relative
accuracy the quadrature otherwise achieves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import i0e as _i0e, i1e as _i1e

from .errors import ConvergenceError

#: Gauss-Legendre nodes per panel.  The integrands are analytic on the closed
#: interval, so per-panel convergence is geometric; 20 nodes is past the knee.
GL_NODES = 20

#: Hard cap on the number of panels before adaptivity gives up.
PANEL_CAP = 1 << 14

#: Soft bound of the offset-integrand invariant |prefactor * exp(exponent)| <= 10.
OFFSET_INTEGRAND_BOUND = 10.0


# ---------------------------------------------------------------------------
# LogValue
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogValue:
    """A real number stored as (sign, log|value|).

    sign is -1, 0 or +1; sign == 0 means exactly zero and log_mag is ignored
    (kept at -inf).  Addition and multiplication never leave the
    representation, so quantities like exp(1e9) are ordinary citizens.
    """

    sign: int
    log_mag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if self.sign == 0 and self.log_mag != -math.inf:
            object.__setattr__(self, "log_mag", -math.inf)

    @staticmethod
    def zero() -> "LogValue":
        return LogValue(0, -math.inf)

    @staticmethod
    def from_float(x: float) -> "LogValue":
        if x == 0.0:
            return LogValue.zero()
        return LogValue(1 if x > 0 else -1, math.log(abs(x)))

    @staticmethod
    def from_log(sign: int, log_mag: float) -> "LogValue":
        if sign == 0 or log_mag == -math.inf:
            return LogValue.zero()
        return LogValue(sign, log_mag)

    def to_float(self) -> float:
        """Plain float value; overflows to +/-inf, underflows to 0."""
        if self.sign == 0:
            return 0.0
        if self.log_mag > 709.0:
            return math.inf * self.sign
        return self.sign * math.exp(self.log_mag)

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0 or other.sign == 0:
            return LogValue.zero()
        return LogValue(self.sign * other.sign, self.log_mag + other.log_mag)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.sign == 0:
            raise ZeroDivisionError("division by LogValue zero")
        if self.sign == 0:
            return LogValue.zero()
        return LogValue(self.sign * other.sign, self.log_mag - other.log_mag)

    def __neg__(self) -> "LogValue":
        return LogValue(-self.sign, self.log_mag)

    def __add__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        big, small = (self, other) if self.log_mag >= other.log_mag else (other, self)
        delta = small.log_mag - big.log_mag      # <= 0
        if self.sign == other.sign:
            return LogValue(big.sign, big.log_mag + math.log1p(math.exp(delta)))
        if delta == 0.0:
            return LogValue.zero()
        return LogValue(big.sign, big.log_mag + math.log1p(-math.exp(delta)))

    def __sub__(self, other: "LogValue") -> "LogValue":
        return self + (-other)

    def scaled(self, factor: float) -> "LogValue":
        """Multiply by an ordinary float."""
        return self * LogValue.from_float(factor)


# ---------------------------------------------------------------------------
# Scaled modified Bessel functions
# ---------------------------------------------------------------------------

def bessel_i0_scaled(u):
    """Exponentially scaled modified Bessel function of order zero.

    Returns ``(I0(u) * exp(-|u|), |u|)``: the scaled value and the log
    correction that restores the true magnitude.  Even in u; accepts arrays.
    """
    u = np.asarray(u, dtype=float)
    value = _i0e(u)
    correction = np.abs(u)
    if value.ndim == 0:
        return float(value), float(correction)
    return value, correction


def bessel_i0_prime_scaled(u):
    """Scaled derivative ``I0'(u) * exp(-|u|) = I1(u) * exp(-|u|)``; odd in u."""
    u = np.asarray(u, dtype=float)
    value = _i1e(u)
    return float(value) if value.ndim == 0 else value


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScaledIntegrand:
    """Integrand in offset-exponential form on [a, b] (default [0, pi/2]).

    ``eval(theta)`` returns ``(prefactor, exponent_rel)`` arrays, the value
    of the integrand being ``prefactor * exp(exponent_rel + exponent_offset)``.
    ``exponent_offset`` must be the analytic maximum of the full exponent on
    the interval, so that ``prefactor * exp(exponent_rel)`` stays O(1) (the
    engine checks a bound of 10).  ``exponent_rel`` must be computed in a
    cancellation-free form, NOT as (full exponent) - offset; see module note.

    ``endpoint_scale`` optionally names the width over which the integrand
    varies near the endpoint given by ``concentrated_at``; the initial panel
    layout is then graded geometrically toward that endpoint.
    """

    eval: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
    exponent_offset: float
    a: float = 0.0
    b: float = math.pi / 2
    endpoint_scale: float | None = None
    concentrated_at: str = "left"       # "left" | "right"


@dataclass(frozen=True)
class QuadratureInfo:
    panels: int
    refinements: int
    achieved_rel: float
    converged: bool
    raw: float = 0.0     # integral of the offset integrand (linear domain)


@lru_cache(maxsize=8)
def _gl_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _initial_breakpoints(f: ScaledIntegrand) -> np.ndarray:
    a, b = f.a, f.b
    if f.endpoint_scale is None or f.endpoint_scale >= (b - a) / 4:
        return np.array([a, b])
    widths = []
    w = min(f.endpoint_scale, (b - a) / 8)
    total = 0.0
    while total + w < (b - a):
        widths.append(w)
        total += w
        w *= 2.0
    widths.append((b - a) - total)
    pts = np.concatenate([[0.0], np.cumsum(widths)])
    pts[-1] = b - a
    if f.concentrated_at == "left":
        return a + pts
    return b - pts[::-1]


def _panel_sum(f: ScaledIntegrand, breakpoints: np.ndarray) -> float:
    """Fixed-order Gauss-Legendre sum of the offset integrand over panels."""
    x, w = _gl_nodes(GL_NODES)
    lo = breakpoints[:-1][:, None]
    hi = breakpoints[1:][:, None]
    half = 0.5 * (hi - lo)
    theta = lo + half * (x[None, :] + 1.0)
    pref, exp_rel = f.eval(theta.ravel())
    vals = np.asarray(pref, dtype=float) * np.exp(np.asarray(exp_rel, dtype=float))
    bad = np.max(np.abs(vals)) if vals.size else 0.0
    if bad > 5 * OFFSET_INTEGRAND_BOUND:
        raise ValueError(
            f"offset integrand reaches {bad:.3g}; exponent_offset does not "
            "bound the exponent (invariant |prefactor*exp| <= 10)"
        )
    vals = vals.reshape(theta.shape)
    # deterministic reduction: per-panel dot, then left-to-right panel sum
    per_panel = (vals @ w) * half[:, 0]
    return float(np.add.reduce(per_panel))


def _refine(breakpoints: np.ndarray) -> np.ndarray:
    mids = 0.5 * (breakpoints[:-1] + breakpoints[1:])
    out = np.empty(breakpoints.size + mids.size)
    out[0::2] = breakpoints
    out[1::2] = mids
    return out


def integrate_scaled_info(f: ScaledIntegrand,
                          rel_tol: float = 1e-12) -> tuple[LogValue, QuadratureInfo]:
    """Adaptive panel-doubling quadrature; returns (LogValue, convergence info)."""
    if rel_tol < 1e-13:
        raise ValueError(f"rel_tol must be >= 1e-13, got {rel_tol}")
    breakpoints = _initial_breakpoints(f)
    prev = _panel_sum(f, breakpoints)
    refinements = 0
    while True:
        breakpoints = _refine(breakpoints)
        refinements += 1
        cur = _panel_sum(f, breakpoints)
        scale = max(abs(cur), abs(prev))
        achieved = abs(cur - prev) / scale if scale > 0 else 0.0
        if achieved <= rel_tol:
            info = QuadratureInfo(
                panels=breakpoints.size - 1,
                refinements=refinements,
                achieved_rel=achieved,
                converged=True,
                raw=cur,
            )
            if cur == 0.0:
                return LogValue.zero(), info
            return (
                LogValue(1 if cur > 0 else -1,
                         math.log(abs(cur)) + f.exponent_offset),
                info,
            )
        if breakpoints.size - 1 >= PANEL_CAP:
            raise ConvergenceError(
                f"quadrature did not reach rel_tol={rel_tol:g} within "
                f"{PANEL_CAP} panels (last delta {achieved:.3g})",
                last_estimates=(prev, cur),
            )
        prev = cur


def integrate_scaled(f: ScaledIntegrand, rel_tol: float = 1e-12) -> LogValue:
    """Adaptive Gauss-Legendre integral of a scaled integrand as a LogValue."""
    value, _ = integrate_scaled_info(f, rel_tol)
    return value
