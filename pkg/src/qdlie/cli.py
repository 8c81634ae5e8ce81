"""``qdlie`` command line: classify, flow, enumerate, oplab, catalog.

Exit codes: 0 success, 1 input error, 2 experiment FAIL, 3 INCONCLUSIVE.
JSON goes to ``--output`` (default stdout) with sorted keys and no
timings, so equal inputs and seeds give byte-identical files.
"""

import argparse
import os
import sys

import numpy as np

from . import io as qio
from .catalog import CATALOG_NAMES, all_entries, catalog
from .classifier import GroupSpec, classify, count_classes, enumerate_classes
from .exceptions import InvalidInputError, QdlieError
from .flows import FlowKind, classify_flow, oracle_classify_flow, trajectory
from .operators import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    Grid,
    SymbolFunction,
    beta_identity_defect,
    check_unitary,
    cokernel_witness,
    compactness_ladder,
    covariance_check,
    fourier_symbol_check,
    index_signature,
    product_conv_operator,
)
from .spectra import BOUNDARY_FACTOR, CLUSTER_FACTOR, SPEC_REL_TOL, spectral_tolerance

EXIT_OK, EXIT_INPUT, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2, 3
OPLAB_EXPERIMENTS = ("unitary", "witness", "index", "compactness", "covariance")


def _spectral_tolerances(D=None):
    out = {"spec_rel_tol": SPEC_REL_TOL, "cluster_factor": CLUSTER_FACTOR,
           "boundary_factor": BOUNDARY_FACTOR}
    if D is not None:
        out["eps_spec"] = spectral_tolerance(D)
    return out


def _group_from_args(args):
    if args.catalog:
        return GroupSpec.from_catalog(args.catalog)
    if args.structure:
        obj = qio.read_json(args.structure)
        if not isinstance(obj, dict) or "structure_constants" not in obj:
            raise InvalidInputError(f'{args.structure}: expected {{"structure_constants": ...}}')
        return GroupSpec.from_structure_constants(obj["structure_constants"])
    if args.matrix:
        return qio.load_group(args.matrix)
    raise InvalidInputError("classify needs --matrix, --structure or --catalog")


def cmd_classify(args):
    spec = _group_from_args(args)
    type_i = {"auto": None, "assume": True, "deny": False}[args.type_i]
    if spec.variant.value == "CATALOG":
        entry = catalog(spec.name)
        rep, spec = entry.report, entry.spec
    else:
        rep = classify(spec, type_i_assumed=type_i, seed=args.seed)
    D = spec.matrix
    body = {"group": spec.to_dict(), "report": rep.to_dict()}
    params = {"seed": args.seed, "type_i": args.type_i}
    return qio.report("classify", body, _spectral_tolerances(D), params), EXIT_OK, None


def cmd_flow(args):
    if not args.matrix:
        raise InvalidInputError("flow needs --matrix")
    D = qio.load_matrix(args.matrix)
    exact = classify_flow(D)
    body = {"spectral": exact.to_dict()}
    code = EXIT_OK
    if args.oracle:
        orc = oracle_classify_flow(D)
        agree = orc.kind is FlowKind.INCONCLUSIVE or orc.kind is exact.kind
        body["oracle"] = orc.to_dict()
        body["agreement"] = None if orc.kind is FlowKind.INCONCLUSIVE else orc.kind is exact.kind
        if not agree:
            code = EXIT_FAIL
    csv = None
    if args.csv:
        n = D.shape[0]
        v = np.array([float(x) for x in args.vector.split(",")]) if args.vector else np.eye(n)[0]
        ts, U, L = trajectory(D, v, 1, args.t_end, args.step)
        with np.errstate(over="ignore"):
            X = np.exp(L)[:, None] * U
        cols = ("t",) + tuple(f"v_{i + 1}" for i in range(n)) + ("log_norm",)
        csv = (args.csv, qio.csv_text(cols, np.column_stack([ts, X, L])))
    params = {"oracle": bool(args.oracle)}
    return qio.report("flow", body, _spectral_tolerances(D), params), code, csv


def cmd_enumerate(args):
    m = args.dim
    classes = enumerate_classes(m)
    body = {"m": m, "count": count_classes(m), "classes": [c.to_dict() for c in classes],
            "non_quasidiagonal": [c.to_dict() for c in classes if c.non_quasidiagonal]}
    csv = None
    if args.csv:
        rows = [[c.n0, c.pair[0], c.pair[1], int(c.non_quasidiagonal)] for c in classes]
        csv = (args.csv, qio.csv_text(("n0", "n_a", "n_b", "non_quasidiagonal"), rows))
    return qio.report("enumerate", body, {}, {"dim": m}), EXIT_OK, csv


def _status_code(status):
    return {PASS: EXIT_OK, FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_INCONCLUSIVE}[status]


def cmd_oplab(args):
    exp = args.experiment
    sym = SymbolFunction.parse(args.symbol) if args.symbol else None
    L = args.L if args.L is not None else 30.0
    if exp == "unitary":
        grid = Grid(L, args.N or 4096)
        tol = args.tol if args.tol is not None else 1e-3
        res = check_unitary(grid, trials=args.trials, tol=tol, seed=args.seed)
        tols = {"unitary_defect": tol, "fourier_rtol": 1e-2, "beta_identity": 1e-6}
        extra = {"fourier_symbol": fourier_symbol_check(grid).to_dict(),
                 "beta_identity": beta_identity_defect(grid).to_dict()}
        body = {**res.to_dict(), "checks": extra}
        status = res.status
        if any(e["status"] != PASS for e in extra.values()):
            status = FAIL
        body["status"] = status
        rows = (res.columns, res.rows)
    elif exp == "witness":
        grid = Grid(L, args.N or 2048)
        sym = sym or SymbolFunction.logistic()
        w = cokernel_witness(sym, grid)
        tol = args.tol if args.tol is not None else 1e-6
        ok = w.adjoint_residual <= tol and w.forward_residual >= 0.1
        tols = {"adjoint_residual": tol, "forward_residual_min": 0.1}
        status = PASS if ok else FAIL
        body = {"experiment": "witness", "status": status, "metrics": w.to_dict(),
                "params": {**grid.to_dict(), "symbol": sym.label(), "tol": tol}}
        rows = (("t", "zeta"), np.column_stack([w.t, w.zeta]))
    elif exp == "index":
        grid = Grid(L, args.N or 2048)
        sym = sym or SymbolFunction.logistic()
        gap = args.tol if args.tol is not None else 1e-2
        res, _ = index_signature(product_conv_operator(sym, grid), gap_tol=gap)
        tols = {"gap_tol": gap, "correlation_min": 0.99}
        body, status = res.to_dict(), res.status
        body["params"]["symbol"] = sym.label()
        rows = (res.columns, res.rows)
    elif exp == "compactness":
        top = args.N or 2048
        Ns = (top // 4, top // 2, top)
        sym = sym or SymbolFunction.sech()
        res = compactness_ladder(sym, Ns)
        tols = {"rel": 0.01, "stability": "max(1, 0.05 min K)"}
        body, status = res.to_dict(), res.status
        body["params"]["symbol"] = sym.label()
        rows = (res.columns, res.rows)
    else:
        grid = Grid(L, args.N or 2048)
        sym = sym or SymbolFunction.logistic()
        r = args.shift if args.shift is not None else 64 * grid.h
        tol = args.tol if args.tol is not None else 1e-6
        res = covariance_check(sym, r, grid, tol=tol)
        tols = {"defect": tol}
        body, status = res.to_dict(), res.status
        body["params"]["symbol"] = sym.label()
        rows = None
    csv = (args.csv, qio.csv_text(*rows)) if args.csv and rows is not None else None
    params = {"experiment": exp, "seed": args.seed}
    return qio.report("oplab", body, tols, params), _status_code(status), csv


def cmd_catalog(args):
    if args.name:
        body = catalog(args.name).to_dict()
    else:
        body = {"names": list(CATALOG_NAMES), "entries": [e.to_dict() for e in all_entries()]}
    return qio.report("catalog", body, _spectral_tolerances()), EXIT_OK, None


def build_parser():
    p = argparse.ArgumentParser(prog="qdlie", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="JSON output path (default stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    common.add_argument("--tol", type=float, default=None, help="override the pass tolerance")
    common.add_argument("--csv", help="also write CSV data to this path")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="regularity report of C*(G)")
    c.add_argument("--matrix", help='JSON file {"dim": n, "rows": [...]} or {"structure_constants": ...}')
    c.add_argument("--structure", help='JSON file {"structure_constants": c[i][j][k]}')
    c.add_argument("--catalog", help=f"built-in group: {', '.join(CATALOG_NAMES)}")
    c.add_argument("--type-i", choices=("auto", "assume", "deny"), default="auto")
    c.set_defaults(func=cmd_classify)

    f = sub.add_parser("flow", parents=[common], help="attractor-repeller structure of exp(tD)")
    f.add_argument("--matrix", required=True)
    f.add_argument("--oracle", action="store_true", help="compare with the trajectory oracle")
    f.add_argument("--vector", help="initial vector for the trajectory CSV, comma separated")
    f.add_argument("--t-end", type=float, default=10.0)
    f.add_argument("--step", type=float, default=0.01)
    f.set_defaults(func=cmd_flow)

    e = sub.add_parser("enumerate", parents=[common], help="isomorphism classes for dim V = m")
    e.add_argument("--dim", type=int, required=True)
    e.set_defaults(func=cmd_enumerate)

    o = sub.add_parser("oplab", parents=[common], help="discretised operator experiments")
    o.add_argument("experiment", choices=OPLAB_EXPERIMENTS)
    o.add_argument("--symbol", help="logistic[:shift], radial:y, sech or const:c")
    o.add_argument("--L", type=float, default=None)
    o.add_argument("--N", type=int, default=None)
    o.add_argument("--trials", type=int, default=100)
    o.add_argument("--shift", type=float, default=None, help="covariance shift r")
    o.set_defaults(func=cmd_oplab)

    k = sub.add_parser("catalog", parents=[common], help="built-in groups and stored flags")
    k.add_argument("name", nargs="?")
    k.set_defaults(func=cmd_catalog)
    return p


def _thread_limit():
    value = os.environ.get("QDLIE_THREADS")
    if not value:
        return None
    try:
        n = int(value)
    except ValueError:
        return None
    return n if n > 0 else None


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    limit = _thread_limit()
    try:
        if limit:
            from threadpoolctl import threadpool_limits

            with threadpool_limits(limits=limit):
                doc, code, csv = args.func(args)
        else:
            doc, code, csv = args.func(args)
        text = qio.dumps(doc)
    except (QdlieError, ValueError) as exc:
        print(f"qdlie: error: {exc}", file=stderr)
        return EXIT_INPUT
    if args.output:
        qio.write_text(args.output, text)
    else:
        stdout.write(text)
    if csv is not None:
        qio.write_text(*csv)
    return code


def main(argv=None):
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
