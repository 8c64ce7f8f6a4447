"""Command line front end: simplify, verify, invariant and random.

Exit codes: 0 success or equivalent, 1 not equivalent or not reduced,
2 bad input, 3 numeric failure.
"""

from __future__ import annotations

import json
import sys

import click
import numpy as np

from .circuit import Circuit, circuit_unitary, parse, random_circuit, serialize
from .errors import CircuitFormatError, DcnotError, NotAnInvariant
from .invariants import (
    diagonalize_g2,
    diagonalize_g3,
    factor_tensor_product,
    g2_closed,
    lo_rhs_equivalent,
    quad_invariant,
    split_parts,
)
from .linalg import phase_distance
from .optimizer import OptimizeConfig, optimize

EXIT_OK, EXIT_DIFFERENT, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


def _fail(code: int, msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _load(path: str) -> Circuit:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse(fh.read())
    except OSError as exc:
        _fail(EXIT_INPUT, f"{path}: {exc.strerror}")
    except CircuitFormatError as exc:
        _fail(EXIT_INPUT, f"{path}: {exc}")
    except DcnotError as exc:
        _fail(EXIT_INPUT, f"{path}: {exc}")


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        click.echo(text, nl=False)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _mat(M) -> list:
    return [[[float(np.real(x)), float(np.imag(x))] for x in row] for row in np.asarray(M)]


@click.group()
def cli():
    """Reduce and inspect circuits built from dressed CNOTs."""


@cli.command()
@click.argument("in_path")
@click.argument("out_path", required=False)
@click.option("--tol", type=float, default=1e-6, show_default=True, help="Certificate tolerance per rewrite.")
@click.option("--max-iter", type=int, default=64, show_default=True)
@click.option("--verify/--no-verify", default=False, help="Fail with code 1 if the end-to-end check fails.")
@click.option("--report", type=click.Choice(["json", "text"]), default="text", show_default=True)
def simplify(in_path, out_path, tol, max_iter, verify, report):
    """Reduce the DC-NOT count of IN_PATH and write the result."""
    c = _load(in_path)
    try:
        out, rep = optimize(c, OptimizeConfig(tol=tol, max_iter=max_iter))
    except DcnotError as exc:
        _fail(EXIT_NUMERIC, str(exc))
    if out_path is not None:
        _write(serialize(out), out_path)
    if report == "json":
        click.echo(json.dumps(rep.as_dict()))
    else:
        click.echo(f"dcnots: {rep.initial_dcnot_count} -> {rep.final_dcnot_count}")
        click.echo(f"passes: {', '.join(f'{r}@{p}' for r, p in rep.passes_applied) or 'none'}")
        click.echo(f"residual: {rep.total_residual:.3g}  defect: {rep.verify_defect:.3g}  verified: {rep.verified}")
        if out_path is None:
            _write(serialize(out), None)
    if verify and not rep.verified:
        sys.exit(EXIT_DIFFERENT)
    if c.nbits == 2 and rep.final_dcnot_count > 3:
        sys.exit(EXIT_DIFFERENT)


@cli.command()
@click.argument("a_path")
@click.argument("b_path")
@click.option("--mode", type=click.Choice(["lo-rhs", "exact"]), default="lo-rhs", show_default=True)
@click.option("--tol", type=float, default=1e-6, show_default=True)
def verify(a_path, b_path, mode, tol):
    """Check whether two circuits agree (exit 0) or not (exit 1)."""
    a, b = _load(a_path), _load(b_path)
    if a.nbits != b.nbits:
        _fail(EXIT_INPUT, f"bit counts differ ({a.nbits} vs {b.nbits})")
    A, B = circuit_unitary(a), circuit_unitary(b)
    if mode == "exact":
        d = phase_distance(A, B)
        ok = d <= tol
        click.echo(f"exact: distance {d:.3g} -> {'equivalent' if ok else 'different'}")
    elif a.nbits == 2:
        ok, zeta = lo_rhs_equivalent(A, B, tol=tol)
        click.echo(f"lo-rhs: {'equivalent' if ok else 'different'} (phase {zeta:.6g})")
    else:
        try:
            tf = factor_tensor_product(B.conj().T @ A, a.nbits, tol=tol)
            ok = True
            click.echo(f"lo-rhs: equivalent (residual {tf.residual:.3g})")
        except DcnotError:
            ok = False
            click.echo("lo-rhs: different")
    sys.exit(EXIT_OK if ok else EXIT_DIFFERENT)


@cli.command()
@click.argument("in_path")
@click.option("--diagonalize", is_flag=True, help="Also recover principal parameters and vectors.")
def invariant(in_path, diagonalize):
    """Print the quadratic invariant of a 2-qubit circuit."""
    c = _load(in_path)
    if c.nbits != 2:
        _fail(EXIT_INPUT, "invariants are reported for 2-qubit circuits")
    M = quad_invariant(circuit_unitary(c), 2)
    parts = split_parts(M)
    out = {
        "invariant": _mat(M),
        "lam_r": parts.lam_r,
        "lam_i": parts.lam_i,
        "Gamma_r": parts.gamma_r().tolist(),
        "Gamma_i": parts.gamma_i().tolist(),
    }
    dcs = c.dcnots()
    if 1 <= len(dcs) <= 4 and len(dcs) == len(c.gates):
        pairs = [g.oriented(0, 1) for g in dcs]
        out["closed_form_defect"] = float(np.linalg.norm(g2_closed(len(pairs), pairs) - M))
    if diagonalize:
        try:
            if len(dcs) == 3:
                params, rec = diagonalize_g3(M)
                out["principal"] = {"beta": params.beta, "beta1": params.beta1, "beta2": params.beta2, "xi": params.xi}
            else:
                params, rec = diagonalize_g2(M)
                out["principal"] = {"alpha": params.alpha, "alpha_prime": params.alpha_prime}
        except NotAnInvariant as exc:
            click.echo(json.dumps(out, indent=1))
            _fail(EXIT_NUMERIC, f"{exc} (residual {exc.residual:.3g})")
        out["vectors"] = [[list(map(float, u)), list(map(float, v))] for u, v in rec]
        out["recovered_defect"] = float(np.linalg.norm(g2_closed(len(rec), rec) - M))
    click.echo(json.dumps(out, indent=1))


@cli.command()
@click.option("--nbits", type=int, default=2, show_default=True)
@click.option("--dcnots", type=int, default=4, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", default=None, help="Output file (stdout if omitted).")
def random(nbits, dcnots, seed, output):
    """Write a seeded random circuit (numpy PCG64, normalized Gaussian vectors)."""
    if not 2 <= nbits <= 3:
        _fail(EXIT_INPUT, "nbits must be 2 or 3")
    if dcnots < 0:
        _fail(EXIT_INPUT, "dcnots must be non-negative")
    c = random_circuit(np.random.default_rng(seed), nbits, dcnots)
    _write(serialize(c), output)


def main(argv=None) -> None:
    cli.main(args=argv, prog_name="dcnot")


if __name__ == "__main__":
    main()
