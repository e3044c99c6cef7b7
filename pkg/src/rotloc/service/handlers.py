"""Request -> report functions shared by the HTTP routes and the CLI.

Handlers take the validated pydantic request and return a plain dict shaped
like the corresponding response model.  Keeping them as ordinary functions
lets the CLI run them in-process (no sockets) while the FastAPI app exposes
the identical surface over HTTP.
"""

from __future__ import annotations

import numpy as np

from .. import __version__, characteristic, dirac_algebra, frame_transform
from .. import localization, params, wavefunction
from . import schemas


def _conventions(branch: int | None = None,
                 y_convention: str = localization.Y_DECAYING,
                 convention: wavefunction.Convention | None = None) -> dict:
    conv = convention or wavefunction.PINNED_CONVENTION
    return {
        "matrix_representation": dirac_algebra.REPRESENTATION,
        "y_convention": y_convention,
        "corotating_sense": "co" if conv.rotation_sense == -1 else "counter",
        "polarization": "positive" if conv.polarization == +1 else "negative",
        "branch": branch,
    }


def _q(value: float, unit: str) -> dict:
    return {"value": float(value), "unit": unit}


def health() -> dict:
    return {
        "schema": schemas.SCHEMA_VERSION,
        "status": "ok",
        "version": __version__,
        "conventions": _conventions(),
    }


def normalize(req: schemas.NormalizeRequest) -> dict:
    phys = params.PhysicalInput(
        omega=req.omega, h_z=req.h_z, h_wave=req.h_wave,
        mass=req.mass, charge_sign=req.charge_sign,
    )
    mp = params.normalize(phys, branch=req.branch)
    return {
        "schema": schemas.SCHEMA_VERSION,
        "conventions": _conventions(branch=mp.branch),
        "omega_n": _q(mp.omega_n, "dimensionless (hbar omega / m c^2)"),
        "e0": _q(mp.e0, "dimensionless"),
        "h": _q(mp.h, "dimensionless (H/Omega)"),
        "d": _q(mp.d, "Compton^-2"),
        "d2": _q(mp.d2, "Compton^-1"),
        "p": _q(mp.p, "mc"),
        "energy": _q(mp.energy, "mc^2"),
        "kappa": _q(mp.kappa, "dimensionless (lambda/lambda_C)"),
        "h_large": mp.h_large,
    }


def roots(req: schemas.RootsRequest) -> dict:
    result = characteristic.solve_characteristic(
        characteristic.CharInput(e0=req.e0, h=req.h, b=req.b),
        singular_b_tol=req.singular_b_tol,
    )
    return {
        "schema": schemas.SCHEMA_VERSION,
        "conventions": _conventions(),
        "roots": [{"re": r.real, "im": r.imag} for r in result.roots],
        "classification": result.classification,
        "pair_slope": result.pair_slope,
        "residuals": list(result.residuals),
        "warnings": list(result.warnings),
        "tolerances": {"rel_tol": 1e-12},
    }


def localize_lab(req: schemas.LocalizeLabRequest) -> dict:
    mp = params.from_dimensionless(req.e0, req.h, req.omega_n, req.branch)
    e_root = params.exact_root(mp)
    lab = localization.lab_radius_numeric(mp, e_root, rel_tol=req.rel_tol)
    return {
        "schema": schemas.SCHEMA_VERSION,
        "conventions": _conventions(branch=req.branch),
        "closed_form": _q(lab.closed_lambda, "lambda"),
        "numeric": _q(lab.numeric_lambda, "lambda"),
        "numeric_compton": _q(lab.numeric_compton, "Compton"),
        "moment_compton": _q(lab.moment_compton, "Compton"),
        "rel_moment_mismatch": lab.rel_moment_mismatch,
        "tolerances": {"rel_tol": req.rel_tol},
    }


def localize_rot(req: schemas.LocalizeRotRequest) -> dict:
    rep = localization.rot_radius(
        req.kappa, req.e0, req.branch, req.rel_tol, req.y_convention
    )
    physical = None
    if req.omega is not None:
        physical = localization.physical_lengths(rep, req.omega)
    return {
        "schema": schemas.SCHEMA_VERSION,
        "conventions": _conventions(branch=req.branch,
                                    y_convention=req.y_convention),
        "kappa": rep.kappa,
        "e0": rep.e0,
        "lab_rms": _q(rep.lab_rms_lambda, "lambda"),
        "lab_moment": _q(rep.lab_moment_lambda, "lambda"),
        "rot_rms": _q(rep.rot_rms_lambda, "lambda"),
        "rot_rms_compton": _q(rep.rot_rms_compton, "Compton"),
        "ratio_rot_over_bound": _q(rep.ratio_rot_over_bound,
                                   "fraction of lambda/(2 pi)"),
        "lab_over_rot": _q(rep.lab_over_rot, "dimensionless"),
        "physical": physical,
        "tolerances": {
            "rel_tol": rep.convergence["rel_tol"],
            "achieved_rel": rep.convergence["achieved_rel"],
            "panels": rep.convergence["panels"],
        },
        "warnings": list(rep.warnings),
    }


def sweep(req: schemas.SweepRequest) -> dict:
    rows = localization.sweep(
        req.kappa_from, req.kappa_to, req.points, req.e0, req.branch, req.rel_tol
    )
    return {
        "schema": schemas.SCHEMA_VERSION,
        "conventions": _conventions(branch=req.branch),
        "rows": rows,
        "tolerances": {"rel_tol": req.rel_tol},
    }


def verify_dirac(req: schemas.VerifyDiracRequest) -> dict:
    reports = []
    worst = 0.0
    for branch in req.branches:
        mp = params.from_dimensionless(req.e0, req.h, req.omega_n, branch)
        e_root = params.exact_root(mp)
        points = wavefunction.sample_points(mp, req.n_points, req.seed)
        residuals = wavefunction.sweep_conventions(e_root, mp, points)
        selected = min(residuals, key=residuals.get)
        worst = max(worst, residuals[selected])
        reports.append(
            {
                "branch": branch,
                "e_root": e_root,
                "residuals": [
                    {"convention": k, "max_residual": v}
                    for k, v in sorted(residuals.items())
                ],
                "selected_convention": selected,
                "selected_residual": residuals[selected],
                "achieves_1e_minus_10": residuals[selected] <= 1e-10,
            }
        )
    return {
        "schema": schemas.SCHEMA_VERSION,
        "conventions": _conventions(),
        "e0": req.e0,
        "h": req.h,
        "omega_n": req.omega_n,
        "n_points": req.n_points,
        "seed": req.seed,
        "reports": reports,
        "max_selected_residual": worst,
    }


def verify_ode(req: schemas.VerifyOdeRequest) -> dict:
    grid = []
    worst = 0.0
    for e0 in req.e0s:
        for kappa in req.kappas:
            for branch in req.branches:
                res = localization.ode_residual(
                    kappa, e0, branch, req.fd_step, req.rel_tol, req.y_convention
                )
                worst = max(worst, res.max())
                grid.append(
                    {
                        "kappa": kappa,
                        "e0": e0,
                        "branch": branch,
                        "res_sigma": res.res_sigma,
                        "res_xi": res.res_xi,
                        "res_eta": res.res_eta,
                        "warnings": list(res.warnings),
                    }
                )
    return {
        "schema": schemas.SCHEMA_VERSION,
        "conventions": _conventions(y_convention=req.y_convention),
        "fd_step": req.fd_step,
        "grid": grid,
        "max_residual": worst,
    }


def verify_transform(req: schemas.VerifyTransformRequest) -> dict:
    rng = np.random.default_rng(req.seed)
    x2 = rng.uniform(0.0, 1.0 - req.boundary_gap, req.n_events)
    r = np.sqrt(x2) / req.omega_n
    phi = rng.uniform(-np.pi, np.pi, req.n_events)
    z = rng.uniform(-10.0, 10.0, req.n_events)
    t = rng.uniform(-10.0, 10.0, req.n_events)
    det_a, det_fd = frame_transform.jacobian_dets_batch(
        r, phi, z, t, req.omega_n, step=req.fd_scale, margin=req.boundary_gap / 2
    )
    return {
        "schema": schemas.SCHEMA_VERSION,
        "conventions": _conventions(),
        "n_events": req.n_events,
        "seed": req.seed,
        "omega_n": req.omega_n,
        "boundary_gap": req.boundary_gap,
        "max_abs_det_minus_one_analytic": float(np.max(np.abs(det_a - 1.0))),
        "max_abs_det_minus_one_fd": float(np.max(np.abs(det_fd - 1.0))),
    }


def transform(req: schemas.TransformRequest) -> dict:
    mapper = (frame_transform.to_rotating if req.direction == "to_rotating"
              else frame_transform.from_rotating)
    out = []
    for ev in req.events:
        event = frame_transform.CylindricalEvent(r=ev.r, phi=ev.phi, z=ev.z, t=ev.t)
        mapped = mapper(event, req.omega_n)
        out.append(
            {
                "r": mapped.r,
                "phi": mapped.phi,
                "z": mapped.z,
                "t": mapped.t,
                "jacobian_det": frame_transform.jacobian_det(event, req.omega_n),
            }
        )
    max_r = (frame_transform.max_radius(req.omega_n)
             if req.omega_n > 0 else float("inf"))
    return {
        "schema": schemas.SCHEMA_VERSION,
        "conventions": _conventions(),
        "direction": req.direction,
        "omega_n": req.omega_n,
        "max_radius_compton": _q(max_r, "Compton (= lambda/(2 pi) physically)"),
        "events": out,
    }


def wavefunction_at(req: schemas.WavefunctionRequest) -> dict:
    mp = params.from_dimensionless(req.e0, req.h, req.omega_n, req.branch)
    e_root = params.exact_root(mp)
    value = wavefunction.psi_lab(e_root, mp, req.x, req.y, req.z, req.t)
    point = (np.array([req.x]), np.array([req.y]),
             np.array([req.z]), np.array([req.t]))
    residual = wavefunction.residual_check(e_root, mp, point)
    return {
        "schema": schemas.SCHEMA_VERSION,
        "conventions": _conventions(branch=req.branch),
        "e_root": e_root,
        "components": [{"re": c.real, "im": c.imag} for c in np.asarray(value)],
        "density": float(np.sum(np.abs(value) ** 2)),
        "residual": residual,
        "point": {"x": req.x, "y": req.y, "z": req.z, "t": req.t},
    }
