"""Command line surface.

Five verbs: `close` runs one exact Lie closure and reports dimensions,
verdicts, and residuals; `verify` runs a named suite over a range of qubit
counts; `center` verifies the centralizer and optionally emits coefficient
tables; `schur` builds the coupled basis and checks block structure;
`table` builds, caches, validates, and compares structure-constant tables.

Exit codes: 0 success, 1 usage or precondition error, 2 verification
failure or prediction mismatch, 3 resource-cap refusal.  Reports are JSON
(`--json PATH`, `-` for stdout) with exact rationals as 'p/q' strings; cache
location comes from --cache-dir or $PERMLIE_CACHE_DIR, flag winning.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from importlib import resources

from .center import make_C, make_L, verify_center
from .closure import build_report, lie_closure
from .oracle import dense_closure, densify
from .structure import (
    METHOD_ORBIT,
    METHOD_OVERLAP,
    build_table,
    cache_path,
    compare_tables,
    load_table,
    normalize_method,
)
from .symops import (
    ConstraintError,
    DimensionMismatch,
    ResourceLimitError,
    VerificationError,
    ambient_dims,
    parse_generator_spec,
)
from .verify import SELECTORS, run_selector

ENV_CACHE = "PERMLIE_CACHE_DIR"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); usage errors are exit 1
        raise UsageError(message)


def schema_path(name: str) -> str:
    """Filesystem path of a bundled report schema (no .schema.json suffix)."""
    res = resources.files("permlie").joinpath("schemas", f"{name}.schema.json")
    if not res.is_file():
        raise ConstraintError(f"no bundled schema named {name!r}")
    return str(res)


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--cache-dir", help="structure-table cache directory (overrides $PERMLIE_CACHE_DIR)")
    sp.add_argument("--json", dest="json_path", metavar="PATH",
                    help="write the JSON report to PATH ('-' for stdout)")
    sp.add_argument("--quiet", action="store_true", help="suppress per-case lines")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="permlie", description="Exact Lie-algebra engine for permutation-equivariant qubit operators.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("close", help="compute one Lie closure", description="Exact closure of a generator set.")
    c.add_argument("--n", type=int, required=True, help="qubit count")
    c.add_argument("--gens", required=True,
                   help="preset (G1, G1prime, G2, Gk:<k>) or 'kx,ky,kz; ...' list")
    c.add_argument("--method", default="overlap", choices=["overlap", "orbit", "dense"],
                   help="bracket engine; 'dense' also runs the word-level oracle and compares")
    c.add_argument("--pairing", default="all", choices=["generators", "all"],
                   help="worklist shape ('generators' is cheaper, same span)")
    _add_common(c)
    c.set_defaults(func=cmd_close)

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("selector", choices=sorted(SELECTORS), help="statement family to verify")
    v.add_argument("--n", type=int, help="single qubit count")
    v.add_argument("--n-range", metavar="LO..HI", help="inclusive range, e.g. 2..8")
    v.add_argument("--method", default="overlap", choices=["overlap", "orbit"])
    v.add_argument("--csv", dest="csv_path", metavar="PATH", help="flat per-case table")
    _add_common(v)
    v.set_defaults(func=cmd_verify)

    ce = sub.add_parser("center", help="verify the centralizer span, optionally emit tables")
    ce.add_argument("--n", type=int, required=True)
    ce.add_argument("--emit", default="none", choices=["C", "L", "none"],
                    help="include exact coefficient tables in the report")
    ce.add_argument("--mu", type=int, help="restrict --emit to one mu")
    _add_common(ce)
    ce.set_defaults(func=cmd_center)

    s = sub.add_parser("schur", help="build the coupled basis and check block structure")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--gens", default="G2", help="generators for --check-blocks (default G2)")
    s.add_argument("--check-blocks", action="store_true",
                   help="project the closure of --gens and certify sector spans")
    s.add_argument("--emit-transform", metavar="PATH", help="write the orthogonal matrix as JSON")
    _add_common(s)
    s.set_defaults(func=cmd_schur)

    t = sub.add_parser("table", help="build, cache, validate, or compare structure tables")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--method", default="overlap", choices=["overlap", "orbit", "both"])
    t.add_argument("--compare", action="store_true", help="entrywise comparison of both methods")
    t.add_argument("--validate", action="store_true", help="check cached file digests only")
    _add_common(t)
    t.set_defaults(func=cmd_table)
    return p


def _cache_dir(args) -> str | None:
    return args.cache_dir or os.environ.get(ENV_CACHE) or None


def _emit(payload: dict, args, human_lines: list[str]) -> None:
    if args.json_path == "-":
        print(json.dumps(payload, indent=2, sort_keys=True))
        return
    if args.json_path:
        with open(args.json_path, "w") as fh:
            fh.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if not args.quiet:
        for line in human_lines:
            print(line)


def _case_lines(cases, quiet: bool) -> list[str]:
    lines = []
    for case in cases:
        if quiet and case["ok"]:
            continue
        mark = "ok " if case["ok"] else "FAIL"
        params = " ".join(f"{k}={v}" for k, v in sorted(case["params"].items()))
        lines.append(f"[{mark}] {case['name']} {params}")
    return lines


def cmd_close(args, cache_dir) -> int:
    gens = parse_generator_spec(args.gens, args.n)
    if args.method == "dense":
        table = build_table(args.n, METHOD_OVERLAP, cache_dir=cache_dir)
        run = lie_closure(gens, table, pairing=args.pairing)
        report = build_report(gens, run, method=METHOD_OVERLAP, pairing=args.pairing)
        drun = dense_closure([densify(g) for g in gens.members], pairing=args.pairing)
        payload = {"command": "close", **report.to_jsonable()}
        payload["dense_dim"] = drun.dim
        payload["engines_agree"] = drun.dim == run.dim
    else:
        method = normalize_method(args.method)
        table = build_table(args.n, method, cache_dir=cache_dir)
        run = lie_closure(gens, table, pairing=args.pairing)
        report = build_report(gens, run, method=method, pairing=args.pairing)
        payload = {"command": "close", **report.to_jsonable()}
        if cache_dir:
            table.save(cache_path(cache_dir, args.n, method))
    dims = ambient_dims(args.n)
    residuals_clean = all(r == "0" for r in payload["constraint_residuals"])
    verdict = payload["verdicts"]
    line = (
        f"closure({gens.label}) @ n={args.n}: dim {payload['dim']}"
        f" / ambient {dims.dim_u}"
        + (f", predicted {payload['predicted']}" if payload["predicted"] is not None else "")
        + f"; universal={verdict['universal']} semi={verdict['semi_universal']}"
        + f"; membership residuals {'clean' if residuals_clean else 'NONZERO'}"
    )
    _emit(payload, args, [line])
    ok = payload["matched"] is not False and residuals_clean
    if "engines_agree" in payload:
        ok = ok and payload["engines_agree"]
    return 0 if ok else 2


def _parse_range(args) -> tuple[int | None, int | None]:
    if args.n is not None and args.n_range:
        raise UsageError("give --n or --n-range, not both")
    if args.n is not None:
        return args.n, args.n
    if args.n_range:
        parts = args.n_range.split("..")
        if len(parts) != 2:
            raise UsageError("--n-range wants LO..HI")
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise UsageError("--n-range wants integers") from None
    return None, None


_CSV_DETAILS = ("dim", "predicted", "sparse", "dense", "universal", "semi_universal", "threshold")


def _write_csv(path: str, cases: list[dict]) -> None:
    param_keys = sorted({k for c in cases for k in c["params"]})
    detail_keys = [k for k in _CSV_DETAILS if any(k in c["details"] for c in cases)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", *param_keys, *detail_keys, "ok"])
        for c in cases:
            row = [c["name"]]
            row += [c["params"].get(k, "") for k in param_keys]
            row += [c["details"].get(k, "") for k in detail_keys]
            row.append(c["ok"])
            writer.writerow(row)


def cmd_verify(args, cache_dir) -> int:
    lo, hi = _parse_range(args)
    suite = run_selector(args.selector, lo, hi, cache_dir=cache_dir, method=args.method)
    payload = {"command": "verify", **suite.to_jsonable()}
    if args.csv_path:
        _write_csv(args.csv_path, payload["cases"])
    lines = _case_lines(payload["cases"], args.quiet)
    good = sum(1 for c in payload["cases"] if c["ok"])
    lines.append(f"verify {suite.selector}: {good}/{len(payload['cases'])} cases ok")
    _emit(payload, args, lines)
    return 0 if suite.ok else 2


def cmd_center(args, cache_dir) -> int:
    table = build_table(args.n, METHOD_OVERLAP, cache_dir=cache_dir)
    rep = verify_center(args.n, table)
    case = {"name": "centralizer-span", "params": {"n": args.n}, "ok": rep.ok,
            "details": rep.to_jsonable()}
    payload = {"command": "center", "selector": "prop1", "ok": rep.ok, "cases": [case]}
    if args.emit != "none":
        maker = make_C if args.emit == "C" else make_L
        mus = [args.mu] if args.mu is not None else list(range(args.n // 2 + 1))
        payload["emitted"] = {
            args.emit: {str(mu): maker(mu, args.n).vec.to_jsonable() for mu in mus}
        }
    lines = _case_lines([case], args.quiet)
    lines.append(
        f"center @ n={args.n}: dim {rep.expected_dim}, solve "
        + ("capped" if rep.capped else f"dim {rep.solved_dim}")
        + (", ok" if rep.ok else ", FAIL")
    )
    _emit(payload, args, lines)
    return 0 if rep.ok else 2


def cmd_schur(args, cache_dir) -> int:
    from . import schur

    st = schur.build_schur_transform(args.n)
    cases = [
        {
            "name": "sector-table",
            "params": {"n": args.n},
            "ok": True,
            "details": {"blocks": [[b.mu, b.d, b.m] for b in st.blocks]},
        }
    ]
    if args.check_blocks:
        gens = parse_generator_spec(args.gens, args.n)
        run = lie_closure(gens, build_table(args.n, METHOD_OVERLAP, cache_dir=cache_dir))
        for row in run.basis.rows():
            schur.block_project(row, st)  # raises (exit 2) on pattern violation
        details: dict = {"rows_projected": run.dim, "block_pattern": "clean"}
        ok = True
        if args.n <= schur.BLOCK_ANALYSIS_CAP:
            rep = schur.certify_subspace_control(run.basis, st)
            details["subspace_control"] = rep.to_jsonable()
            ok = rep.consistent
        cases.append(
            {"name": "block-structure", "params": {"n": args.n, "gens": gens.label},
             "ok": ok, "details": details}
        )
    payload = {"command": "schur", "selector": "schur", "ok": all(c["ok"] for c in cases),
               "cases": cases}
    if args.emit_transform:
        with open(args.emit_transform, "w") as fh:
            json.dump(
                {
                    "n": st.n,
                    "blocks": [[b.mu, b.d, b.m] for b in st.blocks],
                    "offsets": list(st.offsets),
                    "paths": [[list(p) for p in sector] for sector in st.paths],
                    "matrix": st.matrix.tolist(),
                },
                fh,
            )
    lines = _case_lines(cases, args.quiet)
    lines.append(f"schur @ n={args.n}: sectors {[[b.mu, b.d, b.m] for b in st.blocks]}")
    _emit(payload, args, lines)
    return 0 if payload["ok"] else 2


def cmd_table(args, cache_dir) -> int:
    methods = [METHOD_OVERLAP, METHOD_ORBIT] if args.method == "both" else [normalize_method(args.method)]
    if args.compare and len(methods) == 1:
        methods = [METHOD_OVERLAP, METHOD_ORBIT]
    cases = []
    if args.validate:
        if not cache_dir:
            raise UsageError("--validate needs a cache directory")
        for m in methods:
            path = cache_path(cache_dir, args.n, m)
            status = "missing"
            if os.path.exists(path):
                status = "ok" if load_table(path) is not None else "corrupt"
            cases.append(
                {"name": "cache-digest", "params": {"n": args.n, "method": m},
                 "ok": status == "ok", "details": {"path": path, "status": status}}
            )
    else:
        tables = {}
        for m in methods:
            table = build_table(args.n, m, cache_dir=cache_dir, fill=True)
            tables[m] = table
            cases.append(
                {"name": "table-build", "params": {"n": args.n, "method": m}, "ok": True,
                 "details": {"entries": table.entry_count, **table.provenance}}
            )
        if args.compare or args.method == "both":
            if len(tables) == 2:
                bad = compare_tables(tables[METHOD_OVERLAP], tables[METHOD_ORBIT])
                cases.append(
                    {"name": "method-agreement", "params": {"n": args.n},
                     "ok": not bad, "details": {"mismatches": bad[:20],
                                                "mismatch_count": len(bad)}}
                )
    payload = {"command": "table", "selector": "table", "ok": all(c["ok"] for c in cases),
               "cases": cases}
    lines = _case_lines(cases, args.quiet)
    lines.append(f"table @ n={args.n}: {len(cases)} checks, "
                 + ("all ok" if payload["ok"] else "FAILURES"))
    _emit(payload, args, lines)
    return 0 if payload["ok"] else 2


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"permlie: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args, _cache_dir(args))
    except UsageError as exc:
        print(f"permlie: {exc}", file=sys.stderr)
        return 1
    except (ConstraintError, DimensionMismatch) as exc:
        print(f"permlie: {exc}", file=sys.stderr)
        return 1
    except VerificationError as exc:
        print(f"permlie: verification failed: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"permlie: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
