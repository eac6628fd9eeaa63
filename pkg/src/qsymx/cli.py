"""Command-line front end: ``qsymx <command> [options]``.

Exit status is 0 when every check passes, 1 when a check fails (or a
mathematical fault is detected mid-run) and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

from . import braiding, cactus, groth, symext, uqg
from .cartan import SUPPORTED_TYPES, build_root_system, weight_inner, weyl_dim
from .errors import QsymxError, UnsupportedTypeError, WeightError
from .linalg import DEFAULT_TOL
from .report import Report

RELATION_TOL = 1e-8
STRICT_TOL = 1e-9
HW_TOL = 1e-10

COMMANDS = ("module", "decompose", "braiding", "cactus", "sympow", "flatness",
            "commutativity", "cube", "koszul", "suite")

# (type, summands) modules exercised by `suite` when no module is given
CATALOGUE = (
    ("A1", ((1,),)), ("A1", ((2,),)), ("A1", ((3,),)), ("A1", ((1,), (2,))),
    ("A2", ((1, 0),)), ("A2", ((0, 1),)), ("A2", ((1, 0), (0, 1))),
)


class UsageError(Exception):
    pass


def _parse_weight(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"bad weight {text!r}; expected integers like '1,0'") from None


def _parse_summands(text: str) -> tuple[tuple[int, ...], ...]:
    parts = [p for p in text.split(";") if p.strip()]
    if not parts:
        raise UsageError("empty summand list")
    return tuple(_parse_weight(p) for p in parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsymx",
        description="Verify quantum symmetric/exterior power computations for U_q(g) modules.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--type", dest="cartan_type", default=None,
                        help=f"Cartan type ({', '.join(SUPPORTED_TYPES)}).")
    parser.add_argument("--hw", default=None, help="Highest weight 'a[,b]' of a simple module.")
    parser.add_argument("--summands", default=None,
                        help="Direct sum of simples, 'a,b;c,d'.")
    parser.add_argument("--with", dest="with_", default=None,
                        help="Second module (weight or 'a,b;c,d') for decompose and braiding.")
    parser.add_argument("--q", type=float, default=1.2, help="Deformation parameter q > 0.")
    parser.add_argument("--n", type=int, default=3, help="Tensor degree.")
    parser.add_argument("--tol", type=float, default=None,
                        help="Relative rank cutoff (default 1e-9, or $QSYMX_TOL).")
    parser.add_argument("--format", choices=("table", "json", "csv"), default="table")
    parser.add_argument("--out", default=None, help="Write output to this path.")
    parser.add_argument("--jobs", type=int, default=1, help="Worker processes for `suite`.")
    parser.add_argument("--timestamp", action="store_true",
                        help="Include a UTC timestamp in the report metadata.")
    return parser


def _resolve(args: argparse.Namespace) -> dict:
    tol = args.tol
    if tol is None:
        env = os.environ.get("QSYMX_TOL")
        try:
            tol = float(env) if env else DEFAULT_TOL
        except ValueError:
            raise UsageError(f"QSYMX_TOL={env!r} is not a number") from None
    if not tol > 0:
        raise UsageError("--tol must be positive")
    if not args.q > 0:
        raise UsageError("--q must be positive")
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.hw and args.summands:
        raise UsageError("give --hw or --summands, not both")
    summands = None
    if args.hw:
        summands = (_parse_weight(args.hw),)
    elif args.summands:
        summands = _parse_summands(args.summands)
    if args.command != "suite":
        if args.cartan_type is None or summands is None:
            raise UsageError(f"`{args.command}` needs --type and --hw or --summands")
    elif (args.cartan_type is None) != (summands is None):
        raise UsageError("`suite` takes both --type and a module, or neither")
    other = None
    if args.with_:
        other = _parse_summands(args.with_)
    if args.cartan_type is not None:
        rs = build_root_system(args.cartan_type)
        for lam in (summands or ()) + (other or ()):
            rs.check(lam)
            weyl_dim(rs, lam)
    return {"type": args.cartan_type, "summands": summands, "with": other,
            "q": args.q, "n": args.n, "tol": tol}


def _meta(job: dict) -> dict:
    meta = {"q": job["q"], "n": job["n"], "tol": job["tol"]}
    if job["type"] is not None:
        meta["type"] = job["type"]
    if job["summands"] is not None:
        meta["summands"] = [list(s) for s in job["summands"]]
    if job.get("with"):
        meta["with"] = [list(s) for s in job["with"]]
    return meta


def _module(job: dict, key: str = "summands") -> uqg.ModuleRep:
    return uqg.build_module(build_root_system(job["type"]), job[key], job["q"])


# --- commands ---------------------------------------------------------------

def cmd_module(job: dict, rep: Report) -> None:
    V = _module(job)
    rs = V.rs
    res = uqg.relation_residuals(V)
    for name, value in res.items():
        rep.residual_check(f"relation_{name}", value,
                           RELATION_TOL if name.startswith("serre") else STRICT_TOL)
    rep.residual_check("gram_invariance", uqg.gram_residual(V), RELATION_TOL)
    expected = sum(weyl_dim(rs, lam) for lam in job["summands"])
    rep.check("dimension", V.dim == expected, value=V.dim, expected=expected)
    for i in range(rs.rank):
        for j in range(i + 1, rs.rank):
            m = rs.braid_order(i, j)
            lhs = np.eye(V.dim)
            rhs = np.eye(V.dim)
            for k in range(m):
                lhs = lhs @ uqg.braid_operator(V, (i, j)[k % 2])
                rhs = rhs @ uqg.braid_operator(V, (j, i)[k % 2])
            rep.residual_check(f"braid_relation_{i}{j}", float(np.linalg.norm(lhs - rhs)), RELATION_TOL)
    es, fs = uqg.root_vector_operators(V)
    nil = all(uqg.nilpotency_index(x) <= V.dim for x in es + fs)
    rep.check("root_vectors_nilpotent", nil)
    rep.summary["dim"] = V.dim
    rep.summary["weights"] = sorted({tuple(w) for w in V.basis_weights}, reverse=True)


def cmd_decompose(job: dict, rep: Report) -> None:
    V = _module(job)
    mods = {"V": V}
    if job.get("with"):
        W = _module(job, "with")
        mods["V(x)W"] = uqg.tensor(V, W)
        mods["W(x)V"] = uqg.tensor(W, V)
    table = []
    found = {}
    for name, M in mods.items():
        by_hw = groth.decompose(M, job["tol"])
        by_char = groth.decompose_by_character(M)
        found[name] = by_hw
        rep.check(f"{name}/routes_agree", by_hw == by_char)
        rep.check(f"{name}/dimension", by_hw.dimension(M.rs) == M.dim,
                  value=by_hw.dimension(M.rs), expected=M.dim)
        rep.summary[name] = by_hw
        for lam, m in by_hw:
            table.append({"module": name, "weight": lam, "multiplicity": m,
                          "dim": weyl_dim(M.rs, lam)})
    if "W(x)V" in found:
        rep.check("fusion_symmetry", found["V(x)W"] == found["W(x)V"])
    rep.table = table


def _hw_eigen_residual(V: uqg.ModuleRep, W: uqg.ModuleRep, R: np.ndarray) -> float:
    worst = 0.0
    for lam, sv, _ in V.blocks or ():
        for mu, sw, _ in W.blocks or ():
            idx = sv * W.dim + sw
            col = R[:, idx].copy()
            target = V.q ** float(weight_inner(V.rs, lam, mu))
            col[idx] -= target
            worst = max(worst, float(np.abs(col).max()))
    return worst


def cmd_braiding(job: dict, rep: Report) -> None:
    V = _module(job)
    W = _module(job, "with") if job.get("with") else V
    R, order, res = braiding.r_matrix_info(V, W)
    rep.residual_check("intertwiner", res, RELATION_TOL)
    rep.residual_check("highest_vector_eigenvalue", _hw_eigen_residual(V, W, R), HW_TOL)
    sigma, diff = braiding.coboundary_paths(V, W)
    rep.residual_check("two_path_agreement", diff, STRICT_TOL)
    vw, wv = uqg.tensor(V, W), uqg.tensor(W, V)
    back = braiding.coboundary(W, V)
    rep.residual_check("unitarity", float(np.linalg.norm(sigma.T @ wv.gram @ sigma - vw.gram)), STRICT_TOL)
    adj = np.linalg.solve(vw.gram, sigma.T @ wv.gram)
    rep.residual_check("adjoint_is_reverse", float(np.linalg.norm(adj - back)), STRICT_TOL)
    rep.residual_check("involution", float(np.linalg.norm(back @ sigma - np.eye(vw.dim))), RELATION_TOL)
    rep.residual_check("module_map", braiding.module_map_residual(sigma, vw, wv), RELATION_TOL)
    rep.summary["product_order"] = order
    if V is W:
        ev = np.sort(np.linalg.eigvals(sigma).real)
        rep.summary["sigma_plus_one_dim"] = int(np.sum(ev > 0))
        rep.summary["sigma_minus_one_dim"] = int(np.sum(ev < 0))


def cmd_cactus(job: dict, rep: Report) -> None:
    V = _module(job)
    n = max(job["n"], 2)
    for odd in (False, True):
        tag = "super" if odd else "even"
        for name, value in cactus.relation_residuals(V, n, odd).items():
            rep.residual_check(f"{tag}/{name}", value, RELATION_TOL)
        rep.residual_check(f"{tag}/module_map", cactus.generator_module_map_residual(V, n, odd),
                           RELATION_TOL)
    rep.residual_check("hexagon", cactus.hexagon_residual(V, V, V), RELATION_TOL)
    if n >= 3:
        a = cactus.cactus_generator(V, 3, 1, 2)
        b = cactus.cactus_generator(V, 3, 2, 3)
        psi = cactus.cactus_generator(V, 3, 1, 3) @ a
        for name, value in cactus.j3_relation_residuals(a, b, psi).items():
            rep.residual_check(f"j3/{name}", value, RELATION_TOL)
    rep.summary["generators"] = len(cactus.generators(n))


def cmd_sympow(job: dict, rep: Report) -> None:
    V = _module(job)
    d = V.dim
    table = []
    for k in range(2, max(job["n"], 2) + 1):
        row = {"n": k}
        for kind in symext.KINDS:
            qd = symext.quotient_component(V, k, kind, tol=job["tol"])
            row[kind] = qd.dim_subspace
            row[f"{kind}_classical"] = symext.classical_dim(d, k, kind)
            row[f"{kind}_ideal"] = qd.dim_ideal
            rep.check(f"embedding_{kind}{k}", qd.embedding_ok,
                      ideal=qd.dim_ideal, subspace=qd.dim_subspace,
                      quotient=qd.dim_quotient, intersection=qd.dim_intersection)
            rep.check(f"bounded_by_classical_{kind}{k}", qd.dim_subspace <= row[f"{kind}_classical"])
        if k == 2:
            rep.check("square_classical", row["sym"] == row["sym_classical"]
                      and row["ext"] == row["ext_classical"])
        table.append(row)
    rep.table = table


def cmd_flatness(job: dict, rep: Report) -> None:
    V = _module(job)
    rows = symext.flatness(V, max(job["n"], 1))
    for row in rows:
        for kind in symext.KINDS:
            rep.check(f"bounded_by_classical_{kind}{row['n']}",
                      row[kind] <= row[f"{kind}_classical"])
    rep.summary["flat_degrees"] = [r["n"] for r in rows if r["sym_flat"] and r["ext_flat"]]
    rep.summary["flat"] = all(r["sym_flat"] and r["ext_flat"] for r in rows)
    rep.table = rows


def cmd_commutativity(job: dict, rep: Report) -> None:
    V = _module(job)
    n = max(job["n"], 2)
    for odd in (False, True):
        r = symext.commutativity_check(V, n, odd, job["tol"])
        rep.residual_check("super" if odd else "symmetric", r.residual, RELATION_TOL,
                           worst_generator=r.worst_generator)


def cmd_cube(job: dict, rep: Report) -> None:
    rs = build_root_system(job["type"])
    out = groth.verify_cube_identity(rs, job["summands"], job["q"], job["tol"])
    rep.check("identity", out["identity_holds"], difference=out["difference"])
    rep.check("lifted_identity", out["lifted_holds"])
    rep.check("routes_agree", out["routes_agree"])
    rep.check("reduced_identity", out["reduced_identity_holds"])
    psi = groth.psi_spectrum_check(out["module"], job["tol"])
    rep.check("psi_plus_one_invertible", psi["min_singular"] > groth.PSI_GAP,
              psi["min_singular"], groth.PSI_GAP)
    rep.residual_check("psi_eigenspace_pairing", psi["pairing_residual"], RELATION_TOL)
    if "psi_cubed_identity" in psi:
        rep.check("psi_cubed_identity", psi["psi_cubed_identity"])
    rep.summary.update({
        "identity_holds": out["identity_holds"],
        "quantum_sym": out["quantum_sym"].element,
        "quantum_ext": out["quantum_ext"].element,
        "classical_sym": out["classical_sym"],
        "classical_ext": out["classical_ext"],
        "reduced_sym": out["reduced_sym"],
        "reduced_ext": out["reduced_ext"],
        "reduced_matches_quantum": out["reduced_matches_quantum"],
    })


def cmd_koszul(job: dict, rep: Report) -> None:
    V = _module(job)
    n_max = max(job["n"], 3)
    sym, ext, verdict = symext.hilbert_and_koszul(V, n_max)
    rep.check("cube_difference_is_square", verdict,
              difference=sym[3] - ext[3], expected=V.dim ** 2)
    rep.summary["sym_dims"] = list(sym.dims)
    rep.summary["ext_dims"] = list(ext.dims)
    rep.table = [{"n": k, "sym": sym[k], "ext": ext[k]} for k in range(n_max + 1)]


RUNNERS: dict[str, Callable[[dict, Report], None]] = {
    "module": cmd_module, "decompose": cmd_decompose, "braiding": cmd_braiding,
    "cactus": cmd_cactus, "sympow": cmd_sympow, "flatness": cmd_flatness,
    "commutativity": cmd_commutativity, "cube": cmd_cube, "koszul": cmd_koszul,
}


def run_job(command: str, job: dict) -> Report:
    """Run one command; a library-detected fault becomes a failed check."""
    rep = Report(command, _meta(job))
    try:
        RUNNERS[command](job, rep)
    except (WeightError, UnsupportedTypeError):
        raise
    except QsymxError as exc:
        rep.check("fault", False, message=f"{type(exc).__name__}: {exc}")
    return rep


def _suite_jobs(job: dict) -> list[tuple[str, str, dict]]:
    if job["type"] is not None:
        targets = [(job["type"], job["summands"])]
    else:
        targets = list(CATALOGUE)
    out = []
    for ctype, summands in targets:
        label = ctype + ":" + ";".join(",".join(map(str, s)) for s in summands)
        base = dict(job, type=ctype, summands=summands, **{"with": None})
        small = sum(weyl_dim(build_root_system(ctype), s) for s in summands) <= 3
        for command in RUNNERS:
            if command in ("cactus", "commutativity"):
                if not small:
                    continue
                for n in (3, 4):
                    out.append((f"{label}/{command}/n{n}", command, dict(base, n=n)))
            else:
                out.append((f"{label}/{command}", command, base))
    return out


def _run_named(item: tuple[str, str, dict]) -> tuple[str, Report]:
    name, command, job = item
    return name, run_job(command, job)


def run_suite(job: dict, jobs: int, timestamp: bool) -> Report:
    items = _suite_jobs(job)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_run_named, items))
    else:
        done = [_run_named(i) for i in items]
    rep = Report("suite", _meta(job), timestamp)
    for name, sub in sorted(done, key=lambda x: x[0]):
        rep.merge(name, sub)
    return rep


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        job = _resolve(args)
        if args.command == "suite":
            rep = run_suite(job, args.jobs, args.timestamp)
        else:
            rep = run_job(args.command, job)
            if args.timestamp:
                rep = _restamp(rep)
        if args.format == "csv":
            if not rep.table:
                raise UsageError(f"CSV output is only available for dimension tables, not `{args.command}`")
            text = rep.to_csv()
        elif args.format == "json":
            text = rep.to_json()
        else:
            text = rep.to_table()
    except (UsageError, WeightError, UnsupportedTypeError) as exc:
        parser.print_usage(sys.stderr)
        print(f"qsymx: error: {exc}", file=sys.stderr)
        return 2
    _emit(text, args.out)
    return 0 if rep.all_pass else 1


def _restamp(rep: Report) -> Report:
    fresh = Report(rep.command, rep.meta, timestamp=True)
    fresh.results, fresh.summary, fresh.table = rep.results, rep.summary, rep.table
    return fresh


if __name__ == "__main__":
    sys.exit(main())
