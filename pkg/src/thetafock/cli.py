"""Command-line front end.

Commands (selected with ``--command``):

* ``verify``      run the invariant suite, write a JSON report (+ figure)
* ``gram-table``  CSV of numeric vs analytic Gram entries (+ heatmap figure)
* ``eval-theta``  CSV of theta values at the document's points
* ``eval-basis``  CSV of basis-element values at the document's points
* ``bargmann``    CSV of transform images (theta-kernel path) at complex points

Exit status: 0 when all checks pass (or the evaluation succeeded), 1 when a
verification check fails, 2 on a validation error; validation errors emit a
machine-readable JSON error object.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import bargmann as bg
from . import report as rpt
from . import space as sps
from .errors import SpecError, ThetaFockError
from .specio import InputDocument, load_document, parse_complex_vector, parse_indices
from .theta import ThetaParams, theta_eval

COMMANDS = ("verify", "gram-table", "eval-theta", "eval-basis", "bargmann")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str
    output_path: str
    tolerance: float = 1e-9
    seed: int = 0
    figures: bool = True

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise SpecError(f"unknown command {self.command!r}; choose from {COMMANDS}")
        if self.tolerance <= 0:
            raise SpecError("tolerance must be positive")


def _write_json(path: str, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _fmt(value) -> str:
    return repr(float(value))


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_verify(config: RunConfig, doc: InputDocument) -> int:
    checks = rpt.run_verification(doc.space, seed=config.seed)
    payload = rpt.report_dict(checks, seed=config.seed, command="verify")
    _write_json(config.output_path, payload)
    if config.figures:
        rpt.render_residual_figure(checks, _figure_path(config.output_path, "residuals"))
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.check_name}  max_residual={c.max_residual:.3e}  tol={c.tolerance:.1e}")
    return 0 if payload["all_pass"] else 1


def _cmd_gram_table(config: RunConfig, doc: InputDocument) -> int:
    indices, numeric, analytic = rpt.gram_table(doc.space)
    rows = []
    for i, a in enumerate(indices):
        for j, b in enumerate(indices):
            rows.append(
                [
                    " ".join(map(str, a.gamma_star_coords)),
                    " ".join(map(str, a.k)),
                    " ".join(map(str, b.gamma_star_coords)),
                    " ".join(map(str, b.k)),
                    _fmt(numeric[i, j].real),
                    _fmt(numeric[i, j].imag),
                    _fmt(analytic[i, j]),
                    _fmt(abs(numeric[i, j] - analytic[i, j])),
                ]
            )
    _write_csv(config.output_path, ["gamma_a", "k_a", "gamma_b", "k_b", "numeric_re", "numeric_im", "analytic", "abs_error"], rows)
    if config.figures:
        rpt.render_gram_figure(indices, numeric, _figure_path(config.output_path, "gram"))
    return 0


def _cmd_eval_theta(config: RunConfig, doc: InputDocument) -> int:
    section = doc.theta_section
    if not section:
        raise SpecError('document lacks a "theta" section')
    omega = np.asarray(section["omega"]["re"], dtype=float) + 1j * np.asarray(section["omega"].get("im", 0.0), dtype=float)
    r = omega.shape[0]
    alpha = np.asarray(section.get("alpha", np.zeros(r)), dtype=float)
    beta = np.asarray(section.get("beta", np.zeros(r)), dtype=float)
    rows = []
    for entry in section["points"]:
        z = parse_complex_vector(entry, r)
        val = theta_eval(ThetaParams(alpha, beta, z, omega, tolerance=config.tolerance))
        rows.append([_fmt(v) for v in z.real] + [_fmt(v) for v in z.imag] + [_fmt(val.real), _fmt(val.imag)])
    header = [f"z_re_{j}" for j in range(r)] + [f"z_im_{j}" for j in range(r)] + ["re", "im"]
    _write_csv(config.output_path, header, rows)
    return 0


def _cmd_eval_basis(config: RunConfig, doc: InputDocument) -> int:
    section = doc.basis_eval_section
    if not section:
        raise SpecError('document lacks a "basis_eval" section')
    space = doc.space
    indices = parse_indices(section["indices"], space.lattice.rank, space.complement_dim)
    points = np.asarray(section["points"], dtype=float).reshape(-1, space.lattice.dimension)
    rows = []
    for idx in indices:
        vals = sps.basis_e_eval(space, idx, points)
        for x, v in zip(points, np.atleast_1d(vals)):
            rows.append(
                [" ".join(map(str, idx.gamma_star_coords)), " ".join(map(str, idx.k))]
                + [_fmt(c) for c in x]
                + [_fmt(v.real), _fmt(v.imag)]
            )
    header = ["gamma_star", "k"] + [f"x_{j}" for j in range(space.lattice.dimension)] + ["re", "im"]
    _write_csv(config.output_path, header, rows)
    return 0


def _cmd_bargmann(config: RunConfig, doc: InputDocument) -> int:
    section = doc.bargmann_section
    if not section:
        raise SpecError('document lacks a "bargmann" section')
    space = doc.space
    cfg = bg.TransformConfig.build(space, tolerance=config.tolerance)
    indices = parse_indices(section["indices"], space.lattice.rank, space.complement_dim)
    d = space.lattice.dimension
    rows = []
    for idx in indices:
        f = lambda pts, idx=idx: sps.basis_e_eval(space, idx, pts)
        for entry in section["points"]:
            z = parse_complex_vector(entry, d)
            val = bg.bargmann_theta(cfg, f, z).value
            rows.append(
                [" ".join(map(str, idx.gamma_star_coords)), " ".join(map(str, idx.k))]
                + [_fmt(v) for v in z.real]
                + [_fmt(v) for v in z.imag]
                + [_fmt(val.real), _fmt(val.imag)]
            )
    header = (
        ["gamma_star", "k"]
        + [f"z_re_{j}" for j in range(d)]
        + [f"z_im_{j}" for j in range(d)]
        + ["re", "im"]
    )
    _write_csv(config.output_path, header, rows)
    return 0


def _figure_path(out_path: str, suffix: str) -> str:
    p = Path(out_path)
    return str(p.with_name(p.stem + f"_{suffix}.png"))


_HANDLERS = {
    "verify": _cmd_verify,
    "gram-table": _cmd_gram_table,
    "eval-theta": _cmd_eval_theta,
    "eval-basis": _cmd_eval_basis,
    "bargmann": _cmd_bargmann,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        doc = load_document(config.input_path)
        return _HANDLERS[config.command](config, doc)
    except ThetaFockError as exc:
        payload = {"schema_version": rpt.SCHEMA_VERSION, "error": {"code": exc.code, "message": str(exc)}}
        text = json.dumps(payload, indent=2, sort_keys=True)
        print(text, file=sys.stderr)
        try:
            _write_json(config.output_path, payload)
        except OSError:
            pass
        return 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="thetafock", description="evaluate and verify theta-type quasi-periodic spaces")
    parser.add_argument("--command", required=True, choices=COMMANDS)
    parser.add_argument("--spec", required=True, help="path to the JSON input document")
    parser.add_argument("--out", default=None, help="output path (default derived from the command)")
    parser.add_argument("--tol", type=float, default=1e-9, help="tolerance for evaluation commands")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized verification draws")
    parser.add_argument("--no-figures", action="store_true", help="skip figure rendering on the report path")
    args = parser.parse_args(argv)

    default_ext = "json" if args.command == "verify" else "csv"
    out = args.out or f"{args.command.replace('-', '_')}_report.{default_ext}"
    config = RunConfig(
        command=args.command,
        input_path=args.spec,
        output_path=out,
        tolerance=args.tol,
        seed=args.seed,
        figures=not args.no_figures,
    )
    return run(config)


if __name__ == "__main__":
    raise SystemExit(main())
