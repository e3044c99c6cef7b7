"""Command-line front end: a thin client over the compute service.

Every subcommand builds a request, sends it through the service surface and
prints the machine-readable report.  By default the request is executed
in-process (the same handler functions the HTTP routes use); with
``--server URL`` it is POSTed to a running instance instead, so the CLI
doubles as a remote client.

Exit codes: 0 success; 1 malformed configuration; 2 domain errors (e.g. a
radius beyond lambda/(2 pi) or a sign-convention violation); 3 convergence
failures.  Output goes to standard output unless ``--out PATH`` is given.
Identical configuration and seed produce byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import sys

import click
import pydantic

from .errors import ConvergenceError, DomainBoundError, SignConventionError
from .service import handlers, schemas

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3

ROUTES = {
    "/params/normalize": (handlers.normalize, schemas.NormalizeRequest),
    "/roots": (handlers.roots, schemas.RootsRequest),
    "/localize/lab": (handlers.localize_lab, schemas.LocalizeLabRequest),
    "/localize/rot": (handlers.localize_rot, schemas.LocalizeRotRequest),
    "/sweep": (handlers.sweep, schemas.SweepRequest),
    "/verify/dirac": (handlers.verify_dirac, schemas.VerifyDiracRequest),
    "/verify/ode": (handlers.verify_ode, schemas.VerifyOdeRequest),
    "/verify/transform": (handlers.verify_transform, schemas.VerifyTransformRequest),
    "/transform": (handlers.transform, schemas.TransformRequest),
    "/wavefunction": (handlers.wavefunction_at, schemas.WavefunctionRequest),
}


class RemoteError(RuntimeError):
    def __init__(self, exit_code: int, detail: str):
        super().__init__(detail)
        self.exit_code = exit_code


def call_service(path: str, payload: dict, server: str | None) -> dict:
    """Run a request in-process, or POST it to ``server`` when given."""
    if server is None:
        handler, model = ROUTES[path]
        return handler(model(**payload))
    import httpx

    resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
    if resp.status_code == 200:
        return resp.json()
    if resp.status_code == 422:
        raise RemoteError(EXIT_USAGE, resp.text)
    body = {}
    try:
        body = resp.json()
    except ValueError:
        pass
    error_type = body.get("error_type", "")
    if error_type == "domain":
        raise RemoteError(EXIT_DOMAIN, body.get("detail", resp.text))
    if error_type == "convergence":
        raise RemoteError(EXIT_CONVERGENCE, body.get("detail", resp.text))
    raise RemoteError(EXIT_CONVERGENCE, resp.text)


def emit(ctx, text: str):
    out = ctx.obj.get("out")
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def emit_json(ctx, report: dict):
    emit(ctx, json.dumps(report, sort_keys=True, indent=2) + "\n")


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["kappa", "e0", "branch", "eta_log", "sigma_log", "xi_log",
              "rot_rms_over_bound"]
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(row[k]) if isinstance(row[k], float) else row[k]
                         for k in header])
    return buf.getvalue()


@click.group()
@click.option("--server", default=None, envvar="ROTLOC_SERVER",
              help="URL of a running service; default runs in-process.")
@click.option("--out", default=None, type=click.Path(dir_okay=False),
              help="Write the report to this file instead of stdout.")
@click.pass_context
def cli(ctx, server, out):
    """Localization radii of fermions in rotating electromagnetic fields."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server
    ctx.obj["out"] = out


_REL_TOL = click.option("--rel-tol", default=1e-12, show_default=True,
                        envvar="ROTLOC_REL_TOL",
                        help="Quadrature relative tolerance (1e-13..1e-3).")


@cli.command()
@click.option("--e0", required=True, type=float)
@click.option("--h", default=0.0, show_default=True, type=float)
@click.option("--b", default=0.0, show_default=True, type=float)
@click.pass_context
def roots(ctx, e0, h, b):
    """Solve the characteristic cubic; report roots and residuals."""
    report = call_service("/roots", {"e0": e0, "h": h, "b": b},
                          ctx.obj["server"])
    emit_json(ctx, report)


@cli.command()
@click.option("--omega-n", required=True, type=float)
@click.option("--r", required=True, type=float)
@click.option("--phi", default=0.0, type=float)
@click.option("--z", default=0.0, type=float)
@click.option("--t", default=0.0, type=float)
@click.option("--direction", default="to_rotating", show_default=True,
              type=click.Choice(["to_rotating", "from_rotating"]))
@click.pass_context
def transform(ctx, omega_n, r, phi, z, t, direction):
    """Map one event between the lab and rotating frames."""
    payload = {
        "omega_n": omega_n,
        "events": [{"r": r, "phi": phi, "z": z, "t": t}],
        "direction": direction,
    }
    report = call_service("/transform", payload, ctx.obj["server"])
    emit_json(ctx, report)


@cli.group()
def localize():
    """Localization radii."""


@localize.command("lab")
@click.option("--e0", required=True, type=float)
@click.option("--omega-n", default=0.01, show_default=True, type=float)
@click.option("--h", default=0.01, show_default=True, type=float)
@click.option("--branch", default=1, show_default=True, type=click.Choice([1, -1]))
@click.option("--rel-tol", default=1e-10, show_default=True,
              envvar="ROTLOC_REL_TOL")
@click.pass_context
def localize_lab(ctx, e0, omega_n, h, branch, rel_tol):
    """Lab-frame radius: closed form plus wavefunction quadrature."""
    payload = {"e0": e0, "omega_n": omega_n, "h": h, "branch": branch,
               "rel_tol": rel_tol}
    report = call_service("/localize/lab", payload, ctx.obj["server"])
    emit_json(ctx, report)


@localize.command("rot")
@click.option("--kappa", required=True, type=float)
@click.option("--e0", required=True, type=float)
@click.option("--branch", default=1, show_default=True, type=click.Choice([1, -1]))
@click.option("--y-convention", default="decaying", show_default=True,
              type=click.Choice(["decaying", "growing"]))
@click.option("--omega", default=None, type=float,
              help="Physical angular frequency (rad/s) for cm output.")
@_REL_TOL
@click.pass_context
def localize_rot(ctx, kappa, e0, branch, y_convention, omega, rel_tol):
    """Rotating-frame radius via log-domain Bessel quadrature."""
    payload = {"kappa": kappa, "e0": e0, "branch": branch,
               "y_convention": y_convention, "rel_tol": rel_tol}
    if omega is not None:
        payload["omega"] = omega
    report = call_service("/localize/rot", payload, ctx.obj["server"])
    emit_json(ctx, report)


@cli.command()
@click.option("--kappa-from", required=True, type=float)
@click.option("--kappa-to", required=True, type=float)
@click.option("--points", required=True, type=int)
@click.option("--e0", required=True, type=float)
@click.option("--branch", default=1, show_default=True, type=click.Choice([1, -1]))
@click.option("--format", "fmt", default="csv", show_default=True,
              type=click.Choice(["csv", "json"]))
@_REL_TOL
@click.pass_context
def sweep(ctx, kappa_from, kappa_to, points, e0, branch, fmt, rel_tol):
    """Log-spaced kappa sweep (CSV columns: kappa, e0, branch, eta_log,
    sigma_log, xi_log, rot_rms_over_bound)."""
    payload = {"kappa_from": kappa_from, "kappa_to": kappa_to,
               "points": points, "e0": e0, "branch": branch,
               "rel_tol": rel_tol}
    report = call_service("/sweep", payload, ctx.obj["server"])
    if fmt == "csv":
        emit(ctx, sweep_csv(report["rows"]))
    else:
        emit_json(ctx, report)


@cli.group()
def verify():
    """Verification runs (equation residuals, evolution system, Jacobian)."""


@verify.command("dirac")
@click.option("--e0", default=1.0, show_default=True, type=float)
@click.option("--h", default=0.01, show_default=True, type=float)
@click.option("--omega-n", default=0.01, show_default=True, type=float)
@click.option("--n-points", default=100, show_default=True, type=int)
@click.option("--seed", default=12345, show_default=True, type=int)
@click.pass_context
def verify_dirac(ctx, e0, h, omega_n, n_points, seed):
    """Substitute the wavefunction into the equation; sweep conventions."""
    payload = {"e0": e0, "h": h, "omega_n": omega_n, "n_points": n_points,
               "seed": seed}
    report = call_service("/verify/dirac", payload, ctx.obj["server"])
    emit_json(ctx, report)


@verify.command("ode")
@click.option("--kappas", default="0.5,2,10,50", show_default=True)
@click.option("--e0s", default="0.5,1,2,5", show_default=True)
@click.option("--fd-step", default=1e-4, show_default=True, type=float)
@click.option("--y-convention", default="decaying", show_default=True,
              type=click.Choice(["decaying", "growing"]))
@_REL_TOL
@click.pass_context
def verify_ode(ctx, kappas, e0s, fd_step, y_convention, rel_tol):
    """Residuals of the evolution system for the three integrals."""
    payload = {
        "kappas": [float(v) for v in kappas.split(",")],
        "e0s": [float(v) for v in e0s.split(",")],
        "fd_step": fd_step,
        "y_convention": y_convention,
        "rel_tol": rel_tol,
    }
    report = call_service("/verify/ode", payload, ctx.obj["server"])
    emit_json(ctx, report)


@verify.command("transform")
@click.option("--n-events", default=10000, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--omega-n", default=1.0, show_default=True, type=float)
@click.option("--boundary-gap", default=1e-6, show_default=True, type=float)
@click.pass_context
def verify_transform(ctx, n_events, seed, omega_n, boundary_gap):
    """Unit-determinant check of the frame map on random events."""
    payload = {"n_events": n_events, "seed": seed, "omega_n": omega_n,
               "boundary_gap": boundary_gap}
    report = call_service("/verify/transform", payload, ctx.obj["server"])
    emit_json(ctx, report)


@cli.command()
@click.option("--e0", default=1.0, show_default=True, type=float)
@click.option("--h", default=0.01, show_default=True, type=float)
@click.option("--omega-n", default=0.01, show_default=True, type=float)
@click.option("--branch", default=1, show_default=True, type=click.Choice([1, -1]))
@click.option("--at", default="0,0,0,0", show_default=True,
              help="Evaluation point x,y,z,t (Compton units).")
@click.pass_context
def wavefunction(ctx, e0, h, omega_n, branch, at):
    """Wavefunction components and equation residual at one point."""
    try:
        x, y, z, t = (float(v) for v in at.split(","))
    except ValueError as exc:
        raise click.UsageError(f"--at expects x,y,z,t, got {at!r}") from exc
    payload = {"e0": e0, "h": h, "omega_n": omega_n, "branch": branch,
               "x": x, "y": y, "z": z, "t": t}
    report = call_service("/wavefunction", payload, ctx.obj["server"])
    emit_json(ctx, report)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("rotloc.service.app:app", host=host, port=port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False, obj={})
        return EXIT_OK
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return EXIT_USAGE
    except pydantic.ValidationError as exc:
        click.echo(f"invalid configuration: {exc}", err=True)
        return EXIT_USAGE
    except (DomainBoundError, SignConventionError) as exc:
        click.echo(f"domain error: {exc}", err=True)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        click.echo(f"convergence failure: {exc}", err=True)
        return EXIT_CONVERGENCE
    except RemoteError as exc:
        click.echo(f"service error: {exc}", err=True)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
