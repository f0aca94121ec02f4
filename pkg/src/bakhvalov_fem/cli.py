"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 reference mismatch under
``--check``, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .exceptions import BakhvalovError, ConfigError
from .fem import solve
from .interpolation import pi_interpolate
from .mesh import MeshParams, build_mesh, format_mesh, mesh_diagnostics
from .metrics import energy_error_continuous, energy_norm_discrete_diff
from .problem import manufactured_solution, test_problem
from .quadrature import QuadratureRule
from .study import StudyConfig, check_against_reference, run_study, table_config

log = logging.getLogger("bakhvalov_fem")

EXIT_OK, EXIT_CONFIG, EXIT_MISMATCH, EXIT_NUMERIC = 0, 1, 2, 3


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(p: argparse.ArgumentParser, grid_defaults: bool) -> None:
    d = (lambda v: v) if grid_defaults else (lambda v: None)
    p.add_argument("--eps1", type=_floats, default=d((1e-8,)), help="comma list of eps1 values")
    p.add_argument("--eps2", type=_floats, default=d((1e-4,)), help="comma list of eps2 values")
    p.add_argument("--n", type=_ints, default=d((16,)), help="comma list of mesh sizes N")
    p.add_argument("--tau", type=float, default=2.0)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--grade-below-n", action="store_true",
                   help="keep a layer graded when mu_j < N as long as its transition point is admissible")
    p.add_argument("--quad-points", type=int, default=1,
                   help="Gauss points per assembly panel (default 1, the midpoint rule)")
    p.add_argument("--quad-panels", type=int, default=1, help="assembly panels per element")
    p.add_argument("--format", choices=("csv", "md"), default="csv")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bakhvalov-fem",
        description="Linear FEM on Bakhvalov meshes for -eps1 u'' + eps2 b u' + c u = f.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("solve", help="solve one cell and dump the discrete solution"), True)
    _common(sub.add_parser("study", help="sweep a parameter grid"), True)
    t = sub.add_parser("table", help="regenerate one of the published tables")
    _common(t, False)
    t.add_argument("--id", type=int, required=True, choices=range(1, 7))
    t.add_argument("--check", action="store_true", help="compare with the stored reference values")
    _common(sub.add_parser("mesh-inspect", help="dump a mesh with its size diagnostics"), True)
    return parser


def _single(args, name):
    vals = getattr(args, name)
    if len(vals) != 1:
        raise ConfigError(f"--{name} takes a single value for this command, got {len(vals)}")
    return vals[0]


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _quad(args) -> QuadratureRule:
    return QuadratureRule(args.quad_points, args.quad_panels)


def cmd_solve(args) -> int:
    eps1, eps2, N = _single(args, "eps1"), _single(args, "eps2"), _single(args, "n")
    ms = manufactured_solution(eps1, eps2)
    mesh = build_mesh(ms.mu0, ms.mu1, MeshParams(N, args.tau, args.p, not args.grade_below_n))
    u_h = solve(test_problem(eps1, eps2), mesh, _quad(args))
    rep = energy_error_continuous(ms.u, ms.du, u_h, eps1)
    eI = energy_norm_discrete_diff(pi_interpolate(ms, mesh).u_I, u_h, eps1)
    summary = (f"# e_energy {rep.e_energy:.17g}\n# e_superclose {eI:.17g}\n"
               f"# quad_delta {rep.quad_refinement_delta:.17g}\n# residual {u_h.residual:.3g}\n")
    _emit(format_mesh(mesh, u_h.values) + summary, args.out)
    return EXIT_OK


def cmd_mesh_inspect(args) -> int:
    eps1, eps2, N = _single(args, "eps1"), _single(args, "eps2"), _single(args, "n")
    ms = manufactured_solution(eps1, eps2)
    mesh = build_mesh(ms.mu0, ms.mu1, MeshParams(N, args.tau, args.p, not args.grade_below_n))
    diag = mesh_diagnostics(mesh)
    lines = []
    for side in (diag.left, diag.right):
        if side is None:
            continue
        for name, lo, val, hi, ok in side.brackets:
            lines.append(f"# {side.side} {name}: {lo:.6g} <= {val:.6g} <= {hi:.6g} "
                         f"{'ok' if ok else 'VIOLATED'}")
        lines.append(f"# {side.side} monotone {side.monotone}")
        for m, v in side.scaled_products.items():
            lines.append(f"# {side.side} max (mu N h)^{m} exp(-p mu x) = {v:.6g}")
        lines.append(f"# {side.side} T argmax {side.T_argmax} of {len(side.T)} "
                     f"(endpoint {side.T_at_endpoint}), mu N^2 T_max = {side.T_scaled:.6g}")
    lines.append(f"# central equidistant {diag.central_equidistant}")
    lines += [f"# notice: {n}" for n in diag.notices]
    _emit(format_mesh(mesh) + "\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _sweep(args, cfg: StudyConfig, reference_id: int | None = None) -> int:
    table = run_study(cfg)
    for r in table.failures:
        log.error("cell eps1=%g eps2=%g N=%d failed: %s", r.eps1, r.eps2, r.N, r.error)
    _emit(table.render(cfg.output_format), args.out)
    if reference_id is not None and cfg.check_mode:
        report = check_against_reference(table, reference_id)
        sys.stderr.write(report.summary() + "\n")
        if not report.passed:
            return EXIT_MISMATCH
    return EXIT_NUMERIC if table.failures else EXIT_OK


def cmd_study(args) -> int:
    cfg = StudyConfig(args.eps1, args.eps2, args.n, tau=args.tau, p=args.p, quad=_quad(args),
                      require_mu_ge_n=not args.grade_below_n, output_format=args.format, jobs=args.jobs)
    return _sweep(args, cfg)


def cmd_table(args) -> int:
    overrides = dict(tau=args.tau, p=args.p, quad=_quad(args), output_format=args.format,
                     require_mu_ge_n=not args.grade_below_n,
                     check_mode=args.check, jobs=args.jobs)
    if args.eps1 is not None:
        overrides["eps1_list"] = args.eps1
    if args.n is not None:
        overrides["n_list"] = args.n
    if args.eps2 is not None:
        raise ConfigError("table grids fix eps2; drop --eps2")
    return _sweep(args, table_config(args.id, **overrides), args.id)


COMMANDS = {"solve": cmd_solve, "study": cmd_study, "table": cmd_table,
            "mesh-inspect": cmd_mesh_inspect}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except BakhvalovError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERIC
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
