"""Command line: ``spinsusy {matrices,spectrum,state,verify,symmetry-check}``.

Exit codes: 0 success, 1 identity failure, 2 usage error, 3 numerical tolerance failure.
Reports go to ``--output`` or, by default, to ``$SPINSUSY_OUTDIR`` (else the
working directory).
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from .halfint import HalfInt
from .oracle import PlaneGrid, RadialGrid, symmetry_residuals
from .radial import RadialBlock, check_kappa, reduce
from .report import TOLERANCE, dumps, reports_to_csv, spectrum_report, write_atomic
from .spinalg import (
    CouplingSet,
    UnitDirection,
    matrix_to_json,
    mu_base,
    mu_hat,
    nonneg_labels,
    projectors,
    spin_matrices,
    unitary_reduce,
)
from .susy import Branch, InadmissibleBlock, eigenstate, select_branch

EXIT_OK, EXIT_IDENTITY, EXIT_USAGE, EXIT_TOLERANCE = 0, 1, 2, 3
OUTDIR_ENV = "SPINSUSY_OUTDIR"
# observed order below this counts as "not decreasing" in symmetry-check
MIN_ORDER = 1.0


class UsageError(Exception):
    pass


# -- argument types ------------------------------------------------------------


def halfint_arg(text: str) -> HalfInt:
    try:
        return HalfInt.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be positive (bound states need lambda > 0), got {text}")
    return v


def direction_arg(text: str) -> UnitDirection:
    try:
        x, y = (float(t) for t in text.split(","))
        return UnitDirection.from_vector(x, y)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'nx,ny' with a non-zero vector: {exc}") from None


def label_map(text: str) -> dict[HalfInt, float]:
    """Parse 'nu=value,nu=value'."""
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"expected nu=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[HalfInt.parse(k)] = float(v)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return out


def couplings_from(args, s: HalfInt) -> CouplingSet:
    if getattr(args, "lambdas", None):
        try:
            cs = CouplingSet(s, args.lambdas)
        except ValueError as exc:
            raise UsageError(f"--lambdas: {exc}") from None
        if any(not v > 0 for v in cs.lambdas.values()):
            raise UsageError("--lambdas: every coupling must be positive")
        return cs
    return CouplingSet.uniform(s, args.lam)


def check_spin_kappa(s: HalfInt, kappa: HalfInt) -> None:
    try:
        check_kappa(s, kappa)
    except ValueError as exc:
        raise UsageError(f"--kappa: {exc}") from None


def output_path(args, default_name: str) -> Path:
    if args.output:
        return Path(args.output)
    return Path(os.environ.get(OUTDIR_ENV, ".")) / default_name


def emit(args, doc: dict) -> None:
    """JSON to stdout, and to ``--output`` when given."""
    text = dumps(doc)
    if args.output:
        write_atomic(args.output, text)
    sys.stdout.write(text)


# -- commands ------------------------------------------------------------------


def cmd_matrices(args) -> int:
    s = args.spin
    rep = spin_matrices(s)
    n = args.n
    b = couplings_from(args, s).lambdas
    d = {nu: 0.0 for nu in nonneg_labels(s)}
    for nu, v in (args.d or {}).items():
        if nu not in d:
            raise UsageError(f"--d: {nu} is not a channel of spin {s}")
        if nu.twice == 0 and v != 0.0:
            raise UsageError("--d: the nu=0 channel has no d parameter")
        d[nu] = v
    reduced, u = unitary_reduce(rep, b, d)
    doc = {
        "spin": str(s),
        "direction": [n.nx, n.ny],
        "sx": matrix_to_json(rep.sx),
        "sy": matrix_to_json(rep.sy),
        "sz": matrix_to_json(rep.sz),
        "projectors": {str(nu): matrix_to_json(p) for nu, p in projectors(rep, n).items()},
        "mu_base": matrix_to_json(mu_base(rep, n)),
        "mu_hat": matrix_to_json(mu_hat(rep, n, reduced)),
        "reduction": {
            "b": {str(k): v for k, v in sorted(b.items())},
            "d": {str(k): v for k, v in sorted(d.items())},
            "lambdas": {str(k): v for k, v in sorted(reduced.lambdas.items())},
            "U": matrix_to_json(u),
        },
    }
    emit(args, doc)
    return EXIT_OK


def _grid_override(args, block: RadialBlock) -> RadialGrid | None:
    if args.r_max is None and args.n_points is None:
        return None
    base = RadialGrid.default(float(select_branch(block).j), args.levels, block.lambda_t)
    return RadialGrid(args.r_max or base.r_max, args.n_points or base.n_points)


def cmd_spectrum(args) -> int:
    s, kappa = args.spin, args.kappa
    check_spin_kappa(s, kappa)
    if args.levels < 1:
        raise UsageError("--levels must be at least 1")
    cs = couplings_from(args, s)
    reports = [spectrum_report(b, args.levels, _grid_override(args, b)) for b in reduce(s, kappa, cs)]
    ok = all(r.passed() for r in reports)
    if args.format == "csv":
        text = reports_to_csv(reports)
        write_atomic(output_path(args, "spectrum.csv"), text)
        sys.stdout.write(text)
    else:
        doc = {
            "spin": str(s),
            "kappa": str(kappa),
            "tolerance": TOLERANCE,
            "passed": ok,
            "reports": [r.to_json() for r in reports],
        }
        text = dumps(doc)
        write_atomic(output_path(args, "spectrum.json"), text)
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_TOLERANCE


def state_radii(block: RadialBlock, n: int, count: int) -> np.ndarray:
    """Log-spaced up to the core scale (2J+1)/lambda, then linear through the tail."""
    if count < 4:
        raise UsageError("--points must be at least 4")
    scale = (2.0 * (float(select_branch(block).j) + n) + 1.0) / block.lambda_t
    log_part = np.geomspace(1e-3 * scale, scale, count // 2, endpoint=False)
    lin_part = np.linspace(scale, 30.0 * scale * (n + 1), count - count // 2)
    return np.concatenate([log_part, lin_part])


def cmd_state(args) -> int:
    try:
        block = RadialBlock(args.kappa, args.nu, args.lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.level < 0:
        raise UsageError("--level must be non-negative")
    branch = None if args.branch == "auto" else Branch(args.branch)
    try:
        psi, e = eigenstate(block, args.level, branch=branch)
    except InadmissibleBlock as exc:
        raise UsageError(f"inadmissible block {block.label}: {exc}") from None
    r = state_radii(block, args.level, args.points)
    vals = psi.evaluate(r)
    used = branch.value if branch else select_branch(block).branch.value
    names = ["phi_0"] if block.size == 1 else [f"phi_{block.nu}", f"phi_-{block.nu}"]
    lines = [
        f"# block={block.label} lambda={block.lambda_t!r} n={args.level} E={e!r} branch={used}",
        ",".join(["r", *names]),
    ]
    for i, ri in enumerate(r):
        lines.append(",".join(repr(float(v)) for v in (ri, *vals[:, i])))
    text = "\n".join(lines) + "\n"
    write_atomic(output_path(args, "state.csv"), text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    results = run_suite(args.max_spin, args.seed, args.samples, sign_flip=args.flip_mu_sign)
    ok = all(r.passed for r in results)
    doc = {
        "max_spin": str(args.max_spin),
        "seed": args.seed,
        "samples": args.samples,
        "passed": ok,
        "results": [r.to_json() for r in results],
    }
    emit(args, doc)
    return EXIT_OK if ok else EXIT_IDENTITY


def cmd_symmetry_check(args) -> int:
    s = args.spin
    cs = couplings_from(args, s)
    grid = PlaneGrid(args.extent, args.grid)
    coarse = symmetry_residuals(s, cs, grid, control=args.control)
    fine = symmetry_residuals(s, cs, grid.refined(), control=args.control)
    orders = {k: (math.log2(coarse[k] / fine[k]) if fine[k] > 0 else float("inf")) for k in coarse}
    decreasing = {k: orders[k] >= MIN_ORDER for k in coarse}
    doc = {
        "spin": str(s),
        "control": args.control,
        "grids": [grid.to_json(), grid.refined().to_json()],
        "residuals": [coarse, fine],
        "orders": orders,
        "decreasing": decreasing,
        "passed": all(decreasing.values()),
    }
    emit(args, doc)
    return EXIT_OK if doc["passed"] else EXIT_TOLERANCE


# -- parser --------------------------------------------------------------------


def _add_couplings(p):
    p.add_argument("--lambda", dest="lam", type=positive_float, default=1.0, help="uniform coupling (default 1)")
    p.add_argument("--lambdas", type=label_map, help="per-channel couplings 'nu=val,...'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinsusy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", help="output file (default: $SPINSUSY_OUTDIR/<command>.<fmt>)")

    p = sub.add_parser("matrices", help="spin matrices, projectors, mu and its unitary reduction")
    p.add_argument("--spin", type=halfint_arg, required=True)
    p.add_argument("--n", type=direction_arg, default=UnitDirection(1.0, 0.0), help="direction 'nx,ny'")
    _add_couplings(p)
    p.add_argument("--d", type=label_map, help="d-parameters of the extended family 'nu=val,...'")
    common(p)
    p.set_defaults(func=cmd_matrices)

    p = sub.add_parser("spectrum", help="analytic vs finite-difference levels of every block")
    p.add_argument("--spin", type=halfint_arg, required=True)
    p.add_argument("--kappa", type=halfint_arg, required=True)
    _add_couplings(p)
    p.add_argument("--levels", type=int, default=3)
    p.add_argument("--r-max", type=positive_float)
    p.add_argument("--n-points", type=int)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("state", help="sampled normalised eigenstate of one block as CSV")
    p.add_argument("--kappa", type=halfint_arg, required=True)
    p.add_argument("--nu", type=halfint_arg, required=True)
    p.add_argument("--lambda", dest="lam", type=positive_float, default=1.0)
    p.add_argument("--level", type=int, default=0)
    p.add_argument("--branch", choices=("auto", "primary", "dual", "scalar"), default="auto")
    p.add_argument("--points", type=int, default=400)
    common(p)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("verify", help="seeded identity suite")
    p.add_argument("--max-spin", type=halfint_arg, default=HalfInt(5))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--flip-mu-sign", action="store_true", help=argparse.SUPPRESS)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("symmetry-check", help="commutator residuals of J_z, A_x, A_y on a plane grid")
    p.add_argument("--spin", type=halfint_arg, default=HalfInt(1))
    _add_couplings(p)
    p.add_argument("--extent", type=positive_float, default=20.0)
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--control", action="store_true", help="random Hermitian interaction (negative control)")
    common(p)
    p.set_defaults(func=cmd_symmetry_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"spinsusy {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
