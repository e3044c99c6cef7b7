"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines live.

Three sub-criteria encode reference formulas that are inconsistent with the
defining equations they accompany; they are implemented exactly as stated and
fail honestly, each next to a passing companion that pins the consistent
value:

* 2c: the printed h^2 coefficient of the third characteristic root has
  denominator (1+e0^2); the cubic itself forces (1+e0^2)^2.
* 4b: the quoted lab-frame closed form exceeds the density's own Gaussian
  moment by an asymptotic factor 2 sqrt(pi).
* 9:  the quoted growth rate of xi, (e0^2+1)/(2 e0), exceeds the integrand's
  endpoint bound sqrt(e0^2+1) - e0/2, so the fitted rate is the latter.
"""

import math
import time

import numpy as np
import pytest
from scipy.special import i0, i1

from rotloc import localization, params, wavefunction
from rotloc.characteristic import CharInput, singular_b, solve_characteristic
from rotloc.frame_transform import jacobian_dets_batch
from rotloc.localization import (
    Y_GROWING, asymptotic_coefficients, lab_radius_closed, lab_radius_numeric,
    ode_residual, rot_integrals, rot_radius, sweep,
)


def _report(cid: str, ok: bool, elapsed: float, limit: float, detail: str):
    status = "PASS" if ok else "FAIL"
    print(f"CRITERION {cid}: {status} ({elapsed:.2f}s, limit {limit:.0f}s) {detail}")


def test_criterion_1_transform_determinant():
    limit = 1.0
    t0 = time.perf_counter()
    rng = np.random.default_rng(20240101)
    n = 10_000
    omega_n = 1.0
    x2 = rng.uniform(0.0, 1.0 - 1e-6, n)
    r = np.sqrt(x2) / omega_n
    phi = rng.uniform(-np.pi, np.pi, n)
    z = rng.uniform(-10, 10, n)
    t = rng.uniform(-10, 10, n)
    det_a, det_fd = jacobian_dets_batch(r, phi, z, t, omega_n, margin=1e-7)
    elapsed = time.perf_counter() - t0
    worst_a = float(np.max(np.abs(det_a - 1.0)))
    worst_fd = float(np.max(np.abs(det_fd - 1.0)))
    ok = worst_a <= 1e-10 and worst_fd <= 1e-10 and elapsed < limit
    _report("1 (unit Jacobian determinant)", ok, elapsed, limit,
            f"max|det-1| analytic={worst_a:.2e} fd={worst_fd:.2e} on {n} events")
    assert worst_a <= 1e-10
    assert worst_fd <= 1e-10
    assert elapsed < limit


E0_SET = (0.5, 1.0, 2.0, 5.0)
H_SET = (1e-4, 1e-3, 1e-2)


def test_criterion_2a_h0_root_multiset():
    limit = 1.0
    t0 = time.perf_counter()
    worst = 0.0
    for e0 in E0_SET:
        r = solve_characteristic(CharInput(e0=e0, h=0.0, b=singular_b(e0)))
        got = sorted(z.real for z in r.roots)
        expected = sorted([e0, e0, -1.0 / e0])
        worst = max(worst, max(abs(g - e) for g, e in zip(got, expected)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and elapsed < limit
    _report("2a (h=0 roots {e0, e0, -1/e0})", ok, elapsed, limit,
            f"max deviation {worst:.2e} over e0 in {E0_SET}")
    assert worst <= 1e-12
    assert elapsed < limit


def test_criterion_2b_pair_slope():
    limit = 1.0
    t0 = time.perf_counter()
    failures = []
    for e0 in E0_SET:
        slope = e0 / math.sqrt(e0**2 + 1.0)
        for h in H_SET:
            r = solve_characteristic(CharInput(e0=e0, h=h, b=singular_b(e0)))
            got = (r.roots[0].real - e0) / h
            if abs(got - slope) > 5 * h:
                failures.append((e0, h, got, slope))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < limit
    _report("2b (singular-pair slope e0/sqrt(e0^2+1))", ok, elapsed, limit,
            f"{len(failures)} violations over e0 x h grid")
    assert not failures, failures
    assert elapsed < limit


def test_criterion_2c_third_root_as_documented():
    """Third root against the documented expansion -1/e0 - e0 h^2/(1+e0^2).

    Fails: the coefficient is inconsistent with the cubic this root solves
    (off by one power of (1+e0^2), an O(h^2) discrepancy against a 5 h^4
    tolerance).  See the companion test for the consistent coefficient.
    """
    limit = 1.0
    t0 = time.perf_counter()
    violations = []
    for e0 in E0_SET:
        for h in H_SET:
            r = solve_characteristic(CharInput(e0=e0, h=h, b=singular_b(e0)))
            third = r.roots[2].real
            documented = -1.0 / e0 - e0 * h**2 / (1.0 + e0**2)
            err = abs(third - documented)
            if err > 5 * h**4:
                violations.append((e0, h, err, 5 * h**4))
    elapsed = time.perf_counter() - t0
    ok = not violations and elapsed < limit
    _report("2c (third root, documented h^2 coefficient)", ok, elapsed, limit,
            f"{len(violations)}/12 grid points exceed 5 h^4; "
            "the printed coefficient e0/(1+e0^2) disagrees with the cubic "
            "(consistent value e0/(1+e0^2)^2, see companion)")
    assert not violations, (
        "third-root expansion with the documented coefficient is "
        f"inconsistent with the cubic at every grid point: {violations[:3]}..."
    )
    assert elapsed < limit


def test_criterion_2c_companion_third_root_consistent_coefficient():
    limit = 1.0
    t0 = time.perf_counter()
    worst = 0.0
    for e0 in E0_SET:
        for h in H_SET:
            r = solve_characteristic(CharInput(e0=e0, h=h, b=singular_b(e0)))
            third = r.roots[2].real
            consistent = -1.0 / e0 - e0 * h**2 / (1.0 + e0**2) ** 2
            worst = max(worst, abs(third - consistent) / (5 * h**4 + 1e-300))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1.0 and elapsed < limit
    _report("2c-companion (third root, consistent coefficient)", ok, elapsed,
            limit, f"max |error|/(5 h^4) = {worst:.3f}")
    assert worst <= 1.0
    assert elapsed < limit


def test_criterion_3_dirac_residual():
    limit = 5.0
    t0 = time.perf_counter()
    results = {}
    for branch in (+1, -1):
        mp = params.from_dimensionless(1.0, 0.01, 0.01, branch)
        e_root = params.exact_root(mp)
        pts = wavefunction.sample_points(mp, 100, seed=20240102)
        residuals = wavefunction.sweep_conventions(e_root, mp, pts)
        best = min(residuals, key=residuals.get)
        results[branch] = (best, residuals)
    elapsed = time.perf_counter() - t0
    worst_selected = max(res[b][1][res[b][0]] for res in (results,) for b in results)
    ok = worst_selected <= 1e-10 and elapsed < limit
    detail = "; ".join(
        f"branch {b:+d}: {results[b][0]} -> {results[b][1][results[b][0]]:.2e}"
        for b in results
    )
    _report("3 (equation residual <= 1e-10, both branches)", ok, elapsed,
            limit, detail)
    if worst_selected > 1e-6:
        pytest.fail(
            "no convention in the search space reaches 1e-6; per-convention "
            f"residuals: {results}"
        )
    assert worst_selected <= 1e-10, results
    assert elapsed < limit


LAB_E0_SET = (0.5, 1.0, 2.0)


def test_criterion_4a_lab_quadrature_vs_moment():
    limit = 5.0
    t0 = time.perf_counter()
    worst = 0.0
    for e0 in LAB_E0_SET:
        mp = params.from_dimensionless(e0, 0.01, 0.01, +1)
        lab = lab_radius_numeric(mp, params.exact_root(mp), rel_tol=1e-10)
        worst = max(worst, lab.rel_moment_mismatch)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < limit
    _report("4a (lab <r^2> quadrature vs moment form)", ok, elapsed, limit,
            f"max relative mismatch {worst:.2e} over e0 in {LAB_E0_SET}")
    assert worst <= 1e-8
    assert elapsed < limit


def test_criterion_4b_lab_quadrature_vs_quoted_closed_form():
    """Numeric lab radius against the quoted closed form at 1e-6 relative.

    Fails: the quoted wavelength-units form exceeds the moment of the
    normalized density by a factor approaching 2 sqrt(pi); the companion
    pins that relation.
    """
    limit = 5.0
    t0 = time.perf_counter()
    rows = []
    for e0 in LAB_E0_SET:
        mp = params.from_dimensionless(e0, 0.01, 0.01, +1)
        lab = lab_radius_numeric(mp, params.exact_root(mp), rel_tol=1e-10)
        rel = abs(lab.numeric_lambda - lab.closed_lambda) / lab.closed_lambda
        rows.append((e0, lab.numeric_lambda, lab.closed_lambda, rel))
    elapsed = time.perf_counter() - t0
    worst = max(r[3] for r in rows)
    ok = worst <= 1e-6 and elapsed < limit
    _report("4b (lab radius vs quoted closed form)", ok, elapsed, limit,
            f"max relative deviation {worst:.3f}; quoted form sits a factor "
            "~2 sqrt(pi) above the density moment (see companion)")
    assert worst <= 1e-6, rows
    assert elapsed < limit


def test_criterion_4b_companion_closed_form_to_moment_factor():
    limit = 5.0
    t0 = time.perf_counter()
    worst = 0.0
    for e0 in LAB_E0_SET:
        # smaller Omega suppresses the finite-width 1/d correction
        mp = params.from_dimensionless(e0, 1e-3, 1e-3, +1)
        lab = lab_radius_numeric(mp, params.exact_root(mp), rel_tol=1e-10)
        factor = lab.closed_lambda / lab.numeric_lambda
        worst = max(worst, abs(factor / (2 * math.sqrt(math.pi)) - 1.0))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-2 and elapsed < limit
    _report("4b-companion (closed form = 2 sqrt(pi) x moment)", ok, elapsed,
            limit, f"max deviation from 2 sqrt(pi): {worst:.2e}")
    assert worst <= 1e-2
    assert elapsed < limit


def test_criterion_5_rotating_integrals():
    limit = 10.0
    t0 = time.perf_counter()
    at_zero = rot_integrals(0.0, 1.0, +1, rel_tol=1e-13)
    zero_dev = max(
        abs(at_zero.eta_scaled - 1.0),
        abs(at_zero.sigma_scaled),
        abs(at_zero.xi_scaled - 1.0 / 3.0),
    )
    worst = 0.0
    theta = np.linspace(0.0, np.pi / 2, 1_000_001)
    s, c = np.sin(theta), np.cos(theta)
    for branch in (+1, -1):
        u = branch * math.sqrt(2.0) * s
        y = np.exp(-0.5 * s**2)
        oracle = (
            np.trapezoid(i0(u) * y * s, theta),
            np.trapezoid(i1(u) * y * s**2, theta),
            np.trapezoid(i0(u) * y * s * c**2, theta),
        )
        ints = rot_integrals(1.0, 1.0, branch, rel_tol=1e-13)
        mine = (ints.eta.to_float(), ints.sigma.to_float(), ints.xi.to_float())
        worst = max(worst, max(abs(m - o) / abs(o) for m, o in zip(mine, oracle)))
    elapsed = time.perf_counter() - t0
    ok = zero_dev <= 1e-12 and worst <= 1e-9 and elapsed < limit
    _report("5 (eta/sigma/xi: kappa=0 exact, kappa=1 vs 1e6-point oracle)",
            ok, elapsed, limit,
            f"kappa=0 deviation {zero_dev:.2e}; oracle rel diff {worst:.2e}")
    assert zero_dev <= 1e-12
    assert worst <= 1e-9
    assert elapsed < limit


ODE_KAPPAS = (0.5, 2.0, 10.0, 50.0)
ODE_E0S = (0.5, 1.0, 2.0, 5.0)


def test_criterion_6_ode_system():
    limit = 30.0
    t0 = time.perf_counter()
    worst = 0.0
    for e0 in ODE_E0S:
        for kappa in ODE_KAPPAS:
            for branch in (+1, -1):
                res = ode_residual(kappa, e0, branch, fd_step=1e-4)
                worst = max(worst, res.max())
    flipped = ode_residual(2.0, 1.0, +1, fd_step=1e-4, y_convention=Y_GROWING)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-6 and flipped.max() >= 1e-2 and elapsed < limit
    _report("6 (evolution system residuals)", ok, elapsed, limit,
            f"max residual {worst:.2e} over 32 configurations; alternate "
            f"Y-convention residual {flipped.max():.2e} (must be >= 1e-2)")
    assert worst <= 1e-6
    assert flipped.max() >= 1e-2, "alternate convention should break the system"
    assert elapsed < limit


def test_criterion_7_bound_limit():
    limit = 30.0
    t0 = time.perf_counter()
    bounds = {1e3: 1e-2, 1e4: 1e-3, 1e9: 1e-8}
    deviations = {}
    for kappa, tol in bounds.items():
        rep = rot_radius(kappa, 1.0, +1, rel_tol=1e-13)
        assert math.isfinite(rep.ratio_rot_over_bound)
        assert math.isfinite(rep.rot_rms_compton)
        deviations[kappa] = abs(rep.ratio_rot_over_bound - 1.0)
    rows = sweep(1e2, 1e9, 9, 1.0, rel_tol=1e-13)
    ratios = [r["rot_rms_over_bound"] for r in rows]
    monotone = all(b > a for a, b in zip(ratios, ratios[1:]))
    finite = all(math.isfinite(r["eta_log"]) for r in rows)
    elapsed = time.perf_counter() - t0
    ok = (all(deviations[k] <= bounds[k] for k in bounds) and monotone
          and finite and elapsed < limit)
    detail = ", ".join(f"kappa={k:.0e}: |ratio-1|={deviations[k]:.2e}"
                       for k in sorted(bounds))
    _report("7 (radius -> lambda/(2 pi), no overflow)", ok, elapsed, limit,
            detail + f"; monotone sweep: {monotone}")
    for k, tol in bounds.items():
        assert deviations[k] <= tol, (k, deviations[k], tol)
    assert monotone
    assert finite
    assert elapsed < limit


def test_criterion_8_lab_vs_rotating():
    limit = 10.0
    t0 = time.perf_counter()
    rep = rot_radius(1e6, 1.0, +1, rel_tol=1e-13)
    expected = 2.0 * math.pi * math.sqrt(2.0 / math.pi)
    rel = abs(rep.lab_over_rot - expected) / expected
    elapsed = time.perf_counter() - t0
    ok = rel <= 1e-2 and elapsed < limit
    _report("8 (lab/rotating ratio = 2 pi sqrt(2/pi) ~ 5.013)", ok, elapsed,
            limit, f"lab/rot = {rep.lab_over_rot:.4f}, deviation {rel:.2e}")
    assert rel <= 1e-2
    assert elapsed < limit


RATE_GRID = tuple(np.geomspace(100.0, 1e4, 9))


def test_criterion_9_xi_rate_as_documented():
    """Fitted growth rate of xi against the documented (e0^2+1)/(2 e0).

    Fails: that mode cannot appear in the integrals (its rate exceeds the
    integrand's endpoint bound, so its amplitude is identically zero); the
    observed rate is sqrt(e0^2+1) - e0/2.  See the companion test.
    """
    limit = 30.0
    t0 = time.perf_counter()
    rows = []
    for e0 in (1.0, 2.0):
        fit = asymptotic_coefficients(RATE_GRID, e0, +1, rel_tol=1e-13)
        documented = (e0**2 + 1.0) / (2.0 * e0)
        slope = fit.quantities["xi"].slope
        rows.append((e0, slope, documented, abs(slope - documented) / documented))
    elapsed = time.perf_counter() - t0
    worst = max(r[3] for r in rows)
    ok = worst <= 5e-3 and elapsed < limit
    _report("9 (xi growth rate, documented value)", ok, elapsed, limit,
            "; ".join(f"e0={r[0]}: fitted {r[1]:.6f} vs documented {r[2]:.6f} "
                      f"({100 * r[3]:.2f}% off)" for r in rows))
    assert worst <= 5e-3, rows
    assert elapsed < limit


def test_criterion_9_companion_xi_rate_endpoint_value():
    limit = 30.0
    t0 = time.perf_counter()
    worst = 0.0
    for e0 in (1.0, 2.0):
        fit = asymptotic_coefficients(RATE_GRID, e0, +1, rel_tol=1e-13)
        endpoint_rate = math.sqrt(e0**2 + 1.0) - 0.5 * e0
        slope = fit.quantities["xi"].slope
        worst = max(worst, abs(slope - endpoint_rate) / endpoint_rate)
    elapsed = time.perf_counter() - t0
    ok = worst <= 5e-3 and elapsed < limit
    _report("9-companion (xi rate = sqrt(e0^2+1) - e0/2)", ok, elapsed, limit,
            f"max relative deviation {worst:.2e}")
    assert worst <= 5e-3
    assert elapsed < limit
