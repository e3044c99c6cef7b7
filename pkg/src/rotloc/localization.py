"""Localization radii in the lab and rotating frames.

Lab frame: the transverse density is a displaced Gaussian, so the mean
squared radius has the closed moment form ``<r^2> = 1/d + (d2/d)^2``; a 2D
quadrature of the actual wavefunction cross-checks it.  The commonly quoted
closed form ``lambda * sqrt((e0^2+1)/(pi e0^2))`` is also exposed (it is
what the lab/rotating comparison is quoted against), although it exceeds the
moment value by an asymptotic factor ``2 sqrt(pi)``; both numbers appear in
reports.

Rotating frame: for the singular pair, the squared-radius ratio reduces to
three theta-integrals of Bessel-weighted densities::

    eta   = int_0^{pi/2} I0(u) Y sin(theta) dtheta
    sigma = int_0^{pi/2} I0'(u) Y sin^2(theta) dtheta
    xi    = int_0^{pi/2} I0(u) Y sin(theta) cos^2(theta) dtheta

with u = branch * kappa * sqrt(e0^2+1) sin(theta) and Y = exp(-kappa (e0/2)
sin^2 theta) in the decaying convention (the one consistent with the
evolution system in kappa; the growing reading remains selectable for
audit).  The integrals grow like exp(c * kappa) with kappa ~ 1e9, so they are
evaluated by the offset quadrature of :mod:`rotloc.logquad`, in the variable
tau = pi/2 - theta where the mass concentrates at tau = 0 and floats are
dense.

All three integrands share one exponent and therefore one offset, so ratios
are formed on the raw offset values in linear arithmetic at full double
precision; LogValues carry the absolute magnitudes for reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import i0e, i1e

from . import wavefunction
from .errors import ConvergenceError
from .logquad import LogValue, ScaledIntegrand, integrate_scaled_info
from .params import ModelParams

Y_DECAYING = "decaying"
Y_GROWING = "growing"


class FitQualityError(RuntimeError):
    """A rate fit deviates from its model beyond the stated tolerance."""


# ---------------------------------------------------------------------------
# Rotating-frame integrals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RotIntegrals:
    """The three theta-integrals, as LogValues and as shared-offset raw values.

    ``*_scaled`` are the linear-domain integrals of the offset integrands;
    all three share ``offset``, so any ratio or signed combination of them
    can be formed in ordinary floats without precision loss.  At kappa = 0
    they equal (1, 0, 1/3) exactly up to quadrature tolerance.
    """

    eta: LogValue
    sigma: LogValue
    xi: LogValue
    eta_scaled: float
    sigma_scaled: float
    xi_scaled: float
    offset: float
    kappa: float
    e0: float
    branch: int
    y_convention: str
    panels: int
    achieved_rel: float


def _exponent_terms(kappa: float, e0: float, y_convention: str):
    """(offset, rate at the endpoint, exponent_rel callable in tau)."""
    a0 = math.sqrt(e0**2 + 1.0)
    b = 0.5 * e0
    if y_convention == Y_DECAYING:
        offset = kappa * (a0 - b)

        def exponent_rel(s, tau):
            # exp argument kappa*(a0 s - b s^2) minus its max at s=1,
            # cancellation-free: -kappa (1-s)(a0 - b(1+s)), 1-s = 2 sin^2(tau/2)
            return -kappa * (2.0 * np.sin(tau / 2.0) ** 2) * (a0 - b * (1.0 + s))

        curvature = a0 - 2.0 * b
    elif y_convention == Y_GROWING:
        offset = kappa * (a0 + b)

        def exponent_rel(s, tau):
            return -kappa * (2.0 * np.sin(tau / 2.0) ** 2) * (a0 + b * (1.0 + s))

        curvature = a0 + 2.0 * b
    else:
        raise ValueError(f"unknown y_convention {y_convention!r}")
    width = 1.0 / math.sqrt(1.0 + kappa * max(curvature, 0.0))
    return offset, width, exponent_rel


def _bessel_integrand(kappa: float, e0: float, branch: int, kind: str,
                      y_convention: str) -> ScaledIntegrand:
    """Scaled integrand in tau = pi/2 - theta for eta/sigma/xi and friends."""
    a0 = math.sqrt(e0**2 + 1.0)
    offset, width, exponent_rel = _exponent_terms(kappa, e0, y_convention)

    def eval_(tau):
        s = np.cos(tau)
        u = branch * kappa * a0 * s
        if kind == "eta":
            pref = i0e(u) * s
        elif kind == "sigma":
            pref = i1e(u) * s**2
        elif kind == "xi":
            pref = i0e(u) * s * np.sin(tau) ** 2
        elif kind == "sin3":
            pref = i0e(u) * s**3
        elif kind == "sin4":
            pref = i1e(u) * s**4
        else:
            raise ValueError(f"unknown integrand kind {kind!r}")
        return pref, exponent_rel(s, tau)

    return ScaledIntegrand(
        eval=eval_,
        exponent_offset=offset,
        endpoint_scale=width,
        concentrated_at="left",
    )


def rot_integrals(kappa: float, e0: float, branch: int = +1,
                  rel_tol: float = 1e-12,
                  y_convention: str = Y_DECAYING) -> RotIntegrals:
    """Evaluate (eta, sigma, xi) without overflow for any kappa >= 0."""
    if kappa < 0:
        raise ValueError(f"kappa must be nonnegative, got {kappa}")
    if e0 <= 0:
        raise ValueError(f"e0 must be positive, got {e0}")
    if branch not in (-1, 1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")

    values, raws, infos = {}, {}, {}
    for kind in ("eta", "sigma", "xi"):
        f = _bessel_integrand(kappa, e0, branch, kind, y_convention)
        values[kind], infos[kind] = integrate_scaled_info(f, rel_tol)
        raws[kind] = infos[kind].raw
    return RotIntegrals(
        eta=values["eta"],
        sigma=values["sigma"],
        xi=values["xi"],
        eta_scaled=raws["eta"],
        sigma_scaled=raws["sigma"],
        xi_scaled=raws["xi"],
        offset=_exponent_terms(kappa, e0, y_convention)[0],
        kappa=kappa,
        e0=e0,
        branch=branch,
        y_convention=y_convention,
        panels=max(i.panels for i in infos.values()),
        achieved_rel=max(i.achieved_rel for i in infos.values()),
    )


def rot_numerator_direct(kappa: float, e0: float, branch: int = +1,
                         rel_tol: float = 1e-12,
                         y_convention: str = Y_DECAYING) -> tuple[float, float, float]:
    """Direct quadratures of the two numerator integrals (shared offset).

    Returns (int I0 Y sin^3, int I0' Y sin^4, offset) as offset-scaled raw
    values.  These cross-check the reduction identities

        int I0 Y sin^3  = eta - xi
        int I0' Y sin^4 = sigma -/+ (sqrt(e0^2+1)/e0) xi + sigma/(kappa e0)

    which are easy to mistranscribe; the identities are what the radius
    assembly uses, this direct route is the audit.
    """
    out = []
    for kind in ("sin3", "sin4"):
        f = _bessel_integrand(kappa, e0, branch, kind, y_convention)
        _, info = integrate_scaled_info(f, rel_tol)
        out.append(info.raw)
    offset = _exponent_terms(kappa, e0, y_convention)[0]
    return out[0], out[1], offset


# ---------------------------------------------------------------------------
# Evolution system in kappa
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OdeResiduals:
    """Relative residuals of the three evolution equations at one point."""

    res_sigma: float
    res_xi: float
    res_eta: float
    fd_step: float
    warnings: tuple[str, ...] = field(default=())

    def max(self) -> float:
        return max(self.res_sigma, self.res_xi, self.res_eta)


def _rebased(kappa: float, e0: float, branch: int, rel_tol: float,
             y_convention: str, offset_ref: float) -> np.ndarray:
    ints = rot_integrals(kappa, e0, branch, rel_tol, y_convention)
    factor = math.exp(ints.offset - offset_ref)
    return np.array([ints.eta_scaled, ints.sigma_scaled, ints.xi_scaled]) * factor


def ode_residual(kappa: float, e0: float, branch: int = +1,
                 fd_step: float = 1e-4, rel_tol: float = 1e-12,
                 y_convention: str = Y_DECAYING) -> OdeResiduals:
    """Check d(eta, sigma, xi)/d kappa against the evolution system.

    Derivatives are central differences of the quadratures at ``fd_step``;
    a half-step estimate provides a Richardson consistency diagnostic.  The
    eta equation is the assignment

        eta_k = +/- sqrt(e0^2+1) sigma - (e0/2) eta + (e0/2) xi

    (its commonly printed form carries a spurious trailing "= 0"; treating
    that literally, as a constraint, would show up here as an O(1) residual,
    and does not).
    """
    if not kappa >= fd_step > 0:
        raise ValueError(f"need kappa >= fd_step > 0, got kappa={kappa}, fd_step={fd_step}")
    a0 = math.sqrt(e0**2 + 1.0)
    b = 0.5 * e0
    sgn = branch
    offset_ref = _exponent_terms(kappa, e0, y_convention)[0]

    center = _rebased(kappa, e0, branch, rel_tol, y_convention, offset_ref)
    plus = _rebased(kappa + fd_step, e0, branch, rel_tol, y_convention, offset_ref)
    minus = _rebased(kappa - fd_step, e0, branch, rel_tol, y_convention, offset_ref)
    deriv = (plus - minus) / (2.0 * fd_step)

    half = fd_step / 2.0
    plus_h = _rebased(kappa + half, e0, branch, rel_tol, y_convention, offset_ref)
    minus_h = _rebased(kappa - half, e0, branch, rel_tol, y_convention, offset_ref)
    deriv_h = (plus_h - minus_h) / (2.0 * half)

    eta, sig, xi = center
    rhs = np.array([
        sgn * a0 * eta - sgn * 0.5 * a0 * xi - b * sig - 1.5 / kappa * sig,
        (e0**2 + 1.0) / (2.0 * e0) * xi - sgn * a0 / (2.0 * kappa * e0) * sig
        - 1.5 / kappa * xi + 0.5 / kappa * eta,
        sgn * a0 * sig - b * eta + b * xi,
    ])
    # order: derivative vector is (eta, sigma, xi); rhs rows are (sigma, xi, eta)
    lhs = np.array([deriv[1], deriv[2], deriv[0]])
    lhs_h = np.array([deriv_h[1], deriv_h[2], deriv_h[0]])

    scales = np.maximum(np.abs(lhs), np.abs(rhs))
    scales = np.where(scales == 0.0, 1.0, scales)
    res = np.abs(lhs - rhs) / scales

    warnings = []
    fd_gap = np.max(np.abs(lhs - lhs_h) / scales)
    if fd_gap > 1e-3:
        warnings.append(
            f"central-difference estimates at step and half-step differ by "
            f"{fd_gap:.2e}: fd_step={fd_step:g} is too large for kappa={kappa:g}"
        )
    if fd_gap > 0 and fd_gap < 10 * rel_tol:
        warnings.append(
            f"half-step consistency {fd_gap:.2e} is at the quadrature noise "
            f"floor: fd_step={fd_step:g} may be too small"
        )
    return OdeResiduals(
        res_sigma=float(res[0]), res_xi=float(res[1]), res_eta=float(res[2]),
        fd_step=fd_step, warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# Lab-frame radius
# ---------------------------------------------------------------------------

def lab_radius_closed(e0: float) -> float:
    """Quoted lab-frame localization radius in units of the wavelength:
    sqrt((e0^2 + 1) / (pi e0^2))."""
    if e0 <= 0:
        raise ValueError(f"e0 must be positive, got {e0}")
    return math.sqrt((e0**2 + 1.0) / (math.pi * e0**2))


def lab_moment_closed(d: float, d2: float) -> float:
    """Gaussian-moment identity <r^2> = 1/d + (d2/d)^2 (Compton units^2)."""
    return 1.0 / d + (d2 / d) ** 2


@dataclass(frozen=True)
class LabRadius:
    """Lab-frame radius, numeric and closed-form, in both unit systems."""

    numeric_compton: float
    moment_compton: float
    numeric_lambda: float
    closed_lambda: float
    rel_moment_mismatch: float   # numeric vs Gaussian-moment identity


def lab_radius_numeric(params: ModelParams, e_root: float,
                       rel_tol: float = 1e-10) -> LabRadius:
    """<r^2>^(1/2) by 2D quadrature of the actual wavefunction density."""
    norm = wavefunction.integrate_density_xy(e_root, params, "one", rel_tol)
    r2 = wavefunction.integrate_density_xy(e_root, params, "r2", rel_tol)
    mean_r2 = r2 / norm
    gs = wavefunction.ground_spinor(e_root, params.e0, params.h, params.omega_n)
    d2 = wavefunction.e_root_d2(gs, params)
    moment = lab_moment_closed(params.d, d2)
    lam = 2.0 * math.pi * params.kappa
    return LabRadius(
        numeric_compton=math.sqrt(mean_r2),
        moment_compton=math.sqrt(moment),
        numeric_lambda=math.sqrt(mean_r2) / lam,
        closed_lambda=lab_radius_closed(params.e0),
        rel_moment_mismatch=abs(mean_r2 - moment) / moment,
    )


# ---------------------------------------------------------------------------
# Rotating-frame radius and the full report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalizationReport:
    """Lab and rotating-frame radii with convergence metadata.

    ``ratio_rot_over_bound`` is rot_rms divided by the domain bound
    lambda/(2 pi); it approaches 1 from below as kappa grows.  ``lab_rms``
    uses the quoted closed form; ``lab_moment_lambda`` carries the
    Gaussian-moment value for the same parameters, for transparency.
    """

    lab_rms_lambda: float
    lab_rms_compton: float
    lab_moment_lambda: float
    rot_rms_lambda: float
    rot_rms_compton: float
    ratio_rot_over_bound: float
    lab_over_rot: float
    kappa: float
    e0: float
    branch: int
    y_convention: str
    convergence: dict
    warnings: tuple[str, ...] = field(default=())


def rot_radius(kappa: float, e0: float, branch: int = +1,
               rel_tol: float = 1e-12,
               y_convention: str = Y_DECAYING) -> LocalizationReport:
    """Rotating-frame rms radius via the reduced numerator/denominator.

    Denominator: eta + g sigma with the bilinear ratio
    g = -/+ e0/sqrt(e0^2+1) (the common 4 h^2 e0^2 factor of the densities
    cancels and is factored out analytically, so nothing depends on h).
    Numerator: kappa^2 [ (eta - xi) + g (sigma -/+ (sqrt(e0^2+1)/e0) xi
    + sigma/(kappa e0)) ] using the reduction identities.
    """
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    warnings = []
    if kappa < 10:
        warnings.append(
            f"kappa={kappa:g} < 10: the large-kappa behavior is not "
            "meaningful here, values are exact quadratures only"
        )
    ints = rot_integrals(kappa, e0, branch, rel_tol, y_convention)
    a0 = math.sqrt(e0**2 + 1.0)
    g = -branch * e0 / a0
    eta, sig, xi = ints.eta_scaled, ints.sigma_scaled, ints.xi_scaled
    den = eta + g * sig
    num = (eta - xi) + g * (sig - branch * (a0 / e0) * xi + sig / (kappa * e0))
    if den <= 0 or num <= 0:
        raise ConvergenceError(
            f"nonpositive reduced numerator/denominator (num={num:.3g}, "
            f"den={den:.3g}); quadrature tolerance too loose",
            last_estimates=(num, den),
        )
    ratio = math.sqrt(num / den)
    lab_lambda = lab_radius_closed(e0)
    lam_compton = 2.0 * math.pi * kappa
    d2_sq = (e0**2 + 1.0) / 4.0
    d = e0 / (2.0 * kappa)
    moment_lambda = math.sqrt(lab_moment_closed(d, math.sqrt(d2_sq))) / lam_compton
    rot_lambda = ratio / (2.0 * math.pi)
    return LocalizationReport(
        lab_rms_lambda=lab_lambda,
        lab_rms_compton=lab_lambda * lam_compton,
        lab_moment_lambda=moment_lambda,
        rot_rms_lambda=rot_lambda,
        rot_rms_compton=ratio * kappa,
        ratio_rot_over_bound=ratio,
        lab_over_rot=lab_lambda / rot_lambda,
        kappa=kappa,
        e0=e0,
        branch=branch,
        y_convention=y_convention,
        convergence={
            "panels": ints.panels,
            "achieved_rel": ints.achieved_rel,
            "rel_tol": rel_tol,
        },
        warnings=tuple(warnings),
    )


def sweep(kappa_from: float, kappa_to: float, points: int, e0: float,
          branch: int = +1, rel_tol: float = 1e-12,
          y_convention: str = Y_DECAYING) -> list[dict]:
    """Log-spaced kappa sweep; rows carry the CSV columns of the CLI."""
    if points < 2:
        raise ValueError(f"need at least 2 points, got {points}")
    if not 0 < kappa_from < kappa_to:
        raise ValueError(f"need 0 < kappa_from < kappa_to, got {kappa_from}, {kappa_to}")
    rows = []
    for kappa in np.geomspace(kappa_from, kappa_to, points):
        kappa = float(kappa)
        ints = rot_integrals(kappa, e0, branch, rel_tol, y_convention)
        report = rot_radius(kappa, e0, branch, rel_tol, y_convention)
        rows.append(
            {
                "kappa": kappa,
                "e0": e0,
                "branch": branch,
                "eta_log": ints.eta.log_mag,
                "sigma_log": ints.sigma.log_mag,
                "xi_log": ints.xi.log_mag,
                "rot_rms_over_bound": report.ratio_rot_over_bound,
            }
        )
    return rows


# ---------------------------------------------------------------------------
# Asymptotic growth-rate fits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuantityRateFit:
    slope: float
    log_power: float            # coefficient of log(kappa) in the fit
    matched_rate_name: str
    matched_rate: float
    slope_rel_error: float      # |slope - matched| / |matched|
    fit_max_residual: float     # max |log X - model| over the grid


@dataclass(frozen=True)
class RateFit:
    rates: dict[str, float]
    quantities: dict[str, QuantityRateFit]
    kappa_grid: tuple[float, ...]
    e0: float
    branch: int


def candidate_rates(e0: float, branch: int) -> dict[str, float]:
    """The three predicted exponential rates (per unit kappa)."""
    a0 = math.sqrt(e0**2 + 1.0)
    return {
        "rho1": (e0**2 + 1.0) / (2.0 * e0),
        "rho2": branch * a0 - 0.5 * e0,
        "rho3": -branch * a0 - 0.5 * e0,
    }


def asymptotic_coefficients(kappa_grid, e0: float, branch: int = +1,
                            rel_tol: float = 1e-12,
                            y_convention: str = Y_DECAYING,
                            fit_tol: float = 0.1) -> RateFit:
    """Fit log(eta), log(sigma), log(xi) to slope*kappa + p*log(kappa) + c.

    The log(kappa) regressor absorbs the algebraic prefactors so the
    exponential slope is unbiased; each fitted slope is matched against the
    three predicted rates and the relative slope error is reported.  Raises
    :class:`FitQualityError` when the model misfits beyond ``fit_tol`` (in
    log units).
    """
    grid = np.asarray(sorted(float(k) for k in kappa_grid))
    if grid.size < 4:
        raise ValueError("need at least 4 grid points for a 3-parameter fit")
    if grid[0] < 100.0:
        raise ValueError(f"grid must satisfy kappa >= 100, got min {grid[0]}")
    if grid[-1] / grid[0] < 10.0:
        raise ValueError("grid must span at least one decade")

    logs = {"eta": [], "sigma": [], "xi": []}
    for kappa in grid:
        ints = rot_integrals(kappa, e0, branch, rel_tol, y_convention)
        logs["eta"].append(ints.eta.log_mag)
        logs["sigma"].append(ints.sigma.log_mag)
        logs["xi"].append(ints.xi.log_mag)

    rates = candidate_rates(e0, branch)
    design = np.stack([grid, np.log(grid), np.ones_like(grid)], axis=1)
    quantities = {}
    for name, ys in logs.items():
        ys = np.asarray(ys)
        coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
        resid = np.max(np.abs(design @ coef - ys))
        if resid > fit_tol:
            raise FitQualityError(
                f"log {name} deviates from slope*kappa + p*log(kappa) + c by "
                f"{resid:.3g} (> {fit_tol}) over the grid"
            )
        slope = float(coef[0])
        matched = min(rates, key=lambda r: abs(slope - rates[r]))
        quantities[name] = QuantityRateFit(
            slope=slope,
            log_power=float(coef[1]),
            matched_rate_name=matched,
            matched_rate=rates[matched],
            slope_rel_error=abs(slope - rates[matched]) / abs(rates[matched]),
            fit_max_residual=float(resid),
        )
    return RateFit(
        rates=rates,
        quantities=quantities,
        kappa_grid=tuple(float(k) for k in grid),
        e0=e0,
        branch=branch,
    )


def physical_lengths(report: LocalizationReport, omega: float,
                     c_cm_s: float = 2.99792458e10) -> dict[str, float]:
    """Physical lengths (cm) for a given angular frequency omega (rad/s)."""
    lam_cm = 2.0 * math.pi * c_cm_s / omega
    return {
        "lambda_cm": lam_cm,
        "bound_cm": lam_cm / (2.0 * math.pi),
        "lab_rms_cm": report.lab_rms_lambda * lam_cm,
        "rot_rms_cm": report.rot_rms_lambda * lam_cm,
    }
