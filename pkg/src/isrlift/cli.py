"""Command-line interface.

Subcommands: reduce, spectrum, detect, cospectral, lift, verify, eigvecs.
Exit codes: 0 certified/verified, 1 rejected/falsified, 2 input error,
3 numerical-regime condition (singular shift, ambiguous pairing,
degenerate-spectrum escalation).
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import __version__
from .errors import (
    ConvergenceError,
    CrossGroupOverlap,
    DimensionMismatch,
    IsrError,
    NotLatentSymmetry,
    NotNormal,
    NotSelfAdjoint,
    PairingAmbiguous,
    ParseError,
    ResidualNotVanishing,
    SharedEigenvalue,
    SingularMatrix,
    SingularShift,
    SingularSymmetry,
    VerificationFailed,
)
from .exact import Matrix
from .formats import (
    parse_index_spec,
    parse_rational,
    poly_str,
    ratfun_str,
    read_graph,
    read_matrix,
    write_matrix_text,
)
from .lifting import lift_symmetry, verify_lift
from .params import DEFAULT_TOL
from .reduction import (
    PartitionedOperator,
    eval_exact_matrix,
    isr_eval,
    isr_exact,
    reduced_spectrum,
    spectral_identity,
)
from .report import RunReport, fmt
from .symmetry import (
    SymmetryCandidate,
    automorphism_extends_swap,
    check_isr_commutation,
    check_latent_symmetry,
    commutant_basis,
    eigenvector_dichotomy,
    find_cospectral_pairs,
)

_INPUT_ERRORS = (
    ParseError,
    NotSelfAdjoint,
    DimensionMismatch,
    SingularMatrix,
    OSError,
    ValueError,
)
_REJECT_ERRORS = (
    NotNormal,
    SingularSymmetry,
    NotLatentSymmetry,
    VerificationFailed,
    CrossGroupOverlap,
    ResidualNotVanishing,
)
_REGIME_ERRORS = (SingularShift, PairingAmbiguous, SharedEigenvalue, ConvergenceError)


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--mode",
        choices=("exact", "float"),
        default=None,
        help="computation mode; default: exact for rational/gaussian input, float otherwise",
    )
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="base tolerance")
    common.add_argument(
        "--kmax", type=int, default=None, help="power-block truncation (default n-1)"
    )
    common.add_argument(
        "--samples", type=int, default=10, help="number of sampled shift points"
    )
    common.add_argument("--seed", type=int, default=0, help="seed for all sampling")
    common.add_argument(
        "--output",
        choices=("text", "structured"),
        default="text",
        help="report format (structured = JSON)",
    )
    return common


def build_parser():
    parser = argparse.ArgumentParser(
        prog="isrlift",
        description="Isospectral reductions, latent symmetries, and commuting lifts.",
    )
    parser.add_argument("--version", action="version", version=f"isrlift {__version__}")
    common = _common_parser()
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", parents=[common], help="compute the reduction")
    p.add_argument("matrix", help="matrix file")
    p.add_argument("-s", "--subset", required=True, help="retained indices, e.g. 1,3-5")
    p.add_argument("--at", default=None, help="comma list of shift points to evaluate")
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("spectrum", parents=[common], help="reduced spectrum and identity")
    p.add_argument("matrix")
    p.add_argument("-s", "--subset", required=True)
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("detect", parents=[common], help="certify or search symmetries")
    p.add_argument("matrix")
    p.add_argument("-s", "--subset", required=True)
    p.add_argument("-t", "--symmetry", default=None, help="candidate matrix file")
    p.set_defaults(handler=cmd_detect)

    p = sub.add_parser("cospectral", parents=[common], help="scan a graph for cospectral pairs")
    p.add_argument("graph", help="graph file")
    p.set_defaults(handler=cmd_cospectral)

    p = sub.add_parser("lift", parents=[common], help="lift a certified symmetry")
    p.add_argument("matrix")
    p.add_argument("-s", "--subset", required=True)
    p.add_argument("-t", "--symmetry", required=True)
    p.add_argument("-o", "--out", default=None, help="write the extension matrix here")
    p.set_defaults(handler=cmd_lift)

    p = sub.add_parser("verify", parents=[common], help="verify a supplied extension")
    p.add_argument("matrix")
    p.add_argument("-s", "--subset", required=True)
    p.add_argument("-t", "--symmetry", required=True)
    p.add_argument("-q", "--extension", required=True, help="extension matrix file")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("eigvecs", parents=[common], help="classify eigenvectors")
    p.add_argument("matrix")
    p.add_argument("-s", "--subset", required=True)
    p.add_argument("-t", "--symmetry", required=True)
    p.set_defaults(handler=cmd_eigvecs)
    return parser


def _load_matrix(path, mode):
    m, field = read_matrix(path)
    if mode is None:
        mode = "exact" if field in ("rational", "gaussian") else "float"
    if mode == "exact" and field == "float":
        raise ValueError("exact mode requires a rational or gaussian matrix file")
    if mode == "float" and isinstance(m, Matrix):
        m = m.to_numpy()
    return m, mode


def _new_report(args, extra_params=None):
    params = {
        "kmax": args.kmax,
        "samples": args.samples,
    }
    if extra_params:
        params.update(extra_params)
    return RunReport(
        command=args.command,
        params=params,
        mode=getattr(args, "resolved_mode", args.mode),
        seed=args.seed,
        tolerances={"tol": args.tol},
    )


def _matrix_lines(m):
    if isinstance(m, Matrix):
        return ["  ".join(str(x) for x in row) for row in m.data]
    arr = np.asarray(m)
    return ["  ".join(fmt(complex(x)) if np.iscomplexobj(arr) else fmt(float(x)) for x in row) for row in arr]


def cmd_reduce(args):
    h, mode = _load_matrix(args.matrix, args.mode)
    args.resolved_mode = mode
    op = PartitionedOperator(h, parse_index_spec(args.subset), tol=args.tol)
    report = _new_report(args, {"matrix": args.matrix, "subset": args.subset, "at": args.at})
    report.add_input("matrix", args.matrix)
    if mode == "exact":
        r = isr_exact(op)
        lines = []
        for i in range(r.rows):
            for j in range(r.cols):
                lines.append(f"R[{i + 1},{j + 1}] = {ratfun_str(r[i, j])}")
        report.add_section("reduction", lines)
        if args.at:
            for chunk in args.at.split(","):
                lam = parse_rational(chunk)
                try:
                    vals = eval_exact_matrix(r, lam)
                except ZeroDivisionError:
                    raise SingularShift(lam) from None
                report.add_section(
                    f"evaluation at {chunk.strip()}", _matrix_lines(vals)
                )
    else:
        if not args.at:
            raise ValueError("float mode needs --at with at least one shift point")
        for chunk in args.at.split(","):
            lam = float(chunk)
            vals = isr_eval(op, lam)
            report.add_section(f"evaluation at {fmt(lam)}", _matrix_lines(vals))
    return report, 0


def cmd_spectrum(args):
    h, mode = _load_matrix(args.matrix, args.mode)
    args.resolved_mode = mode
    op = PartitionedOperator(h, parse_index_spec(args.subset), tol=args.tol)
    report = _new_report(args, {"matrix": args.matrix, "subset": args.subset})
    report.add_input("matrix", args.matrix)
    code = 0
    if mode == "exact":
        p_full, p_comp, ok = spectral_identity(op)
        report.add_section(
            "characteristic polynomials",
            [
                f"full:       {poly_str(p_full)}",
                f"complement: {poly_str(p_comp)}",
                f"identity holds: {fmt(ok)}",
            ],
        )
        report.verdict = bool(ok)
        if not ok:
            code = 1
    spec = reduced_spectrum(op)
    report.spectra["reduced spectrum"] = spec
    return report, code


def _load_candidate(path, op, mode):
    t, field = read_matrix(path)
    if mode == "float" and isinstance(t, Matrix):
        t = t.to_numpy()
    if not op.is_exact and isinstance(t, Matrix):
        t = t.to_numpy()
    return t


def cmd_detect(args):
    h, mode = _load_matrix(args.matrix, args.mode)
    args.resolved_mode = mode
    op = PartitionedOperator(h, parse_index_spec(args.subset), tol=args.tol)
    report = _new_report(
        args, {"matrix": args.matrix, "subset": args.subset, "symmetry": args.symmetry}
    )
    report.add_input("matrix", args.matrix)
    if args.symmetry is None:
        basis = commutant_basis(op, k_max=args.kmax, tol=args.tol)
        lines = [f"commutant dimension: {len(basis)}"]
        for i, b in enumerate(basis):
            cand = SymmetryCandidate(b)
            flags = []
            if cand.is_normal(args.tol):
                flags.append("normal")
            if cand.is_invertible(args.tol):
                flags.append("invertible")
            lines.append(f"element {i + 1} [{', '.join(flags) or 'degenerate'}]:")
            lines.extend(f"    {row}" for row in _matrix_lines(b))
        report.add_section("commutant basis", lines)
        return report, 0
    report.add_input("symmetry", args.symmetry)
    t = _load_candidate(args.symmetry, op, mode)
    cert_pb = check_latent_symmetry(op, t, k_max=args.kmax, tol=args.tol)
    cert_isr = check_isr_commutation(
        op, t, n_samples=args.samples, seed=args.seed, tol=args.tol
    )
    report.add_certificate("power blocks", cert_pb)
    report.add_certificate("reduction commutation", cert_isr)
    verdict = cert_pb.verdict and cert_isr.verdict
    report.verdict = verdict
    return report, 0 if verdict else 1


def cmd_cospectral(args):
    h = read_graph(args.graph)
    if args.mode == "float" and isinstance(h, Matrix):
        h = h.to_numpy()
    args.resolved_mode = "exact" if isinstance(h, Matrix) else "float"
    n = h.rows if isinstance(h, Matrix) else h.shape[0]
    report = _new_report(args, {"graph": args.graph})
    report.add_input("graph", args.graph)
    pairs = find_cospectral_pairs(h, k_max=args.kmax, tol=args.tol)
    lines = [f"vertices: {n}", f"cospectral pairs: {len(pairs)}"]
    check_autom = n <= 8
    if not check_autom:
        report.add_note("automorphism annotation skipped for n > 8")
    for u, v in pairs:
        op = PartitionedOperator(h, (u, v), tol=args.tol)
        exch = (
            Matrix([[0, 1], [1, 0]])
            if isinstance(h, Matrix)
            else np.array([[0.0, 1.0], [1.0, 0.0]])
        )
        cert = check_latent_symmetry(op, exch, k_max=args.kmax, tol=args.tol)
        if check_autom:
            tag = "automorphic" if automorphism_extends_swap(h, u, v) else "latent-only"
        else:
            tag = "unchecked"
        lines.append(
            f"({u}, {v}): {tag}, certificate max_residual={fmt(cert.max_residual)}"
        )
    report.add_section("cospectral scan", lines)
    return report, 0


def cmd_lift(args):
    h, mode = _load_matrix(args.matrix, args.mode)
    args.resolved_mode = mode
    op = PartitionedOperator(h, parse_index_spec(args.subset), tol=args.tol)
    report = _new_report(
        args,
        {
            "matrix": args.matrix,
            "subset": args.subset,
            "symmetry": args.symmetry,
            "out": args.out,
        },
    )
    report.add_input("matrix", args.matrix)
    report.add_input("symmetry", args.symmetry)
    t = _load_candidate(args.symmetry, op, mode)
    lift = lift_symmetry(op, t, tol=args.tol, seed=args.seed)
    report.add_certificate("power blocks", lift.certificate)
    dims = lift.bundle.dimension_summary()
    report.add_section(
        "invariant subspaces",
        [
            "eigenvalue groups: "
            + ", ".join(fmt(g.value) for g in lift.bundle.groups),
            f"multiplicities:    {dims['multiplicities']}",
            f"subspace dims:     {dims['dimensions']}",
            f"residual counts:   {dims['residual_counts']}",
            f"complement dim:    {dims['complement_dimension']}",
            f"mode:              {lift.mode}",
        ],
    )
    report.residuals.update(lift.residuals)
    q_text = write_matrix_text(lift.matrix)
    report.q_matrix = q_text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(q_text)
        report.add_note(f"extension written to {args.out}")
    report.verdict = True
    return report, 0


def cmd_verify(args):
    h, mode = _load_matrix(args.matrix, args.mode)
    args.resolved_mode = mode
    op = PartitionedOperator(h, parse_index_spec(args.subset), tol=args.tol)
    report = _new_report(
        args,
        {
            "matrix": args.matrix,
            "subset": args.subset,
            "symmetry": args.symmetry,
            "extension": args.extension,
        },
    )
    report.add_input("matrix", args.matrix)
    report.add_input("symmetry", args.symmetry)
    report.add_input("extension", args.extension)
    t = _load_candidate(args.symmetry, op, mode)
    q, _field = read_matrix(args.extension)
    rep = verify_lift(op, t, q, tol=args.tol)
    report.residuals.update(rep.residuals)
    if rep.spectrum_distance is not None:
        report.residuals["spectrum_distance"] = rep.spectrum_distance
    lines = [f"tolerance: {fmt(rep.tolerance)}"]
    if rep.degenerate:
        report.add_note("operator spectrum is degenerate; eigenvector matching skipped")
    else:
        worst = max((e.residual for e in rep.eigen), default=0.0)
        lines.append(f"worst eigenvector residual: {fmt(worst)}")
        for e in rep.eigen:
            lines.append(
                f"eigenvalue {fmt(e.value)}: extension eigenvalue {fmt(e.rayleigh)} "
                f"(residual {fmt(e.residual)}, matches {fmt(e.matched)})"
            )
    report.add_section("eigenvector consistency", lines)
    report.verdict = rep.verdict
    return report, 0 if rep.verdict else 1


def cmd_eigvecs(args):
    h, mode = _load_matrix(args.matrix, args.mode)
    args.resolved_mode = mode
    op = PartitionedOperator(h, parse_index_spec(args.subset), tol=args.tol)
    report = _new_report(
        args, {"matrix": args.matrix, "subset": args.subset, "symmetry": args.symmetry}
    )
    report.add_input("matrix", args.matrix)
    report.add_input("symmetry", args.symmetry)
    t = _load_candidate(args.symmetry, op, mode)
    cert = check_latent_symmetry(op, t, k_max=args.kmax, tol=args.tol)
    report.add_certificate("power blocks", cert)
    if not cert.verdict:
        report.verdict = False
        report.add_note("candidate is not a certified latent symmetry")
        return report, 1
    import warnings as _warnings

    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore")
        rep = eigenvector_dichotomy(op, t)
    labels = {"a": "symmetric", "b": "vanishing", "c": "NEITHER"}
    lines = []
    for e in rep.entries:
        detail = f"|x_S| = {fmt(e.subset_norm)}"
        if e.label == "a":
            detail += f", residual {fmt(e.residual)}, eigenvalue {fmt(e.matched)}"
        elif e.label == "c":
            detail += f", best residual {fmt(e.residual)}"
        lines.append(f"{e.index + 1}: value {fmt(e.value)} -> {labels[e.label]} ({detail})")
    report.add_section("eigenvector classification", lines)
    if rep.degenerate:
        report.add_note("operator spectrum is (numerically) degenerate; falsification disabled")
    code = 0
    if any(e.label == "c" for e in rep.entries):
        code = 3 if rep.degenerate else 1
        report.verdict = False
    else:
        report.verdict = True
    return report, code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        report, code = args.handler(args)
    except _REJECT_ERRORS as exc:
        print(f"isrlift: rejected: {exc}", file=sys.stderr)
        return 1
    except _REGIME_ERRORS as exc:
        print(f"isrlift: numerical regime: {exc}", file=sys.stderr)
        return 3
    except _INPUT_ERRORS as exc:
        print(f"isrlift: input error: {exc}", file=sys.stderr)
        return 2
    except IsrError as exc:
        print(f"isrlift: error: {exc}", file=sys.stderr)
        return 2
    report.timings["total"] = time.perf_counter() - t0
    if args.output == "structured":
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.render_text())
    return code


if __name__ == "__main__":
    raise SystemExit(main())
