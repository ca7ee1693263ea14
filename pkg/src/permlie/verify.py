"""Named verification suites over ranges of qubit counts.

Each selector checks one mechanically provable statement family end to end
and returns a structured report: closure dimensions against closed forms,
central projections and their conservation, membership residuals, the
centralizer solve, class-sum recombination, the corrected commutator tables,
the spin-sector decomposition, and the word-level oracle agreement.  The CLI
exposes these as `permlie verify <selector>`; the test suite calls them
directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .center import (
    central_projection_test,
    make_C,
    make_L,
    make_L_direct,
    verify_center,
)
from .closure import (
    LieBasis,
    build_report,
    is_universal_pair,
    lie_closure,
    membership_constraints,
    predicted_dim,
    verdicts,
)
from .erratum import build_abc, verify_printed_commutators
from .linalg import SparseEchelon
from .oracle import class_sum, dense_closure, densify
from .structure import StructureTable, build_table, compare_tables, normalize_method
from .symops import (
    ConstraintError,
    GeneratorSet,
    SymOpVector,
    VerificationError,
    ambient_dims,
    all_triples,
    preset_generators,
    trace_inner,
    triple_sort_key,
)

WORD_CAP = 6
SOLVE_CAP = 10


@dataclass(frozen=True)
class CaseResult:
    name: str
    params: dict
    ok: bool
    details: dict = field(default_factory=dict)

    def to_jsonable(self) -> dict:
        return {"name": self.name, "params": self.params, "ok": self.ok, "details": self.details}


@dataclass(frozen=True)
class SuiteReport:
    selector: str
    n_lo: int
    n_hi: int
    cases: tuple[CaseResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    def to_jsonable(self) -> dict:
        return {
            "selector": self.selector,
            "n_range": [self.n_lo, self.n_hi],
            "ok": self.ok,
            "cases": [c.to_jsonable() for c in self.cases],
        }


class RunContext:
    """Shared tables and closures for one suite invocation."""

    def __init__(self, cache_dir: str | None = None, method: str = "overlap"):
        self.cache_dir = cache_dir
        self.method = normalize_method(method)
        self._tables: dict[tuple[int, str], StructureTable] = {}
        self._closures: dict = {}

    def table(self, n: int, method: str | None = None) -> StructureTable:
        m = normalize_method(method) if method else self.method
        key = (n, m)
        if key not in self._tables:
            self._tables[key] = build_table(n, m, cache_dir=self.cache_dir)
        return self._tables[key]

    def closure(self, label: str, n: int, k: int | None = None):
        key = (label, n, k)
        if key not in self._closures:
            gens = preset_generators(label, n, k=k)
            self._closures[key] = lie_closure(gens, self.table(n))
        return self._closures[key]


def _orthogonality_pattern(gens: GeneratorSet, rows: Iterable[SymOpVector]) -> tuple[dict, bool]:
    """Projection pattern of the generators plus its conservation by closure.

    Bracket flows cannot create a trace pairing with a central element the
    generators start orthogonal to, so every closure row must stay exactly
    orthogonal to those C_mu.
    """
    pattern = central_projection_test(gens)
    conserved = True
    rows = list(rows)
    for mu, orthogonal in pattern.items():
        if not orthogonal:
            continue
        cv = make_C(mu, gens.n).vec
        if any(trace_inner(row, cv) != 0 for row in rows):
            conserved = False
    return pattern, conserved


def _suite_thm1(ctx: RunContext, lo: int, hi: int) -> list[CaseResult]:
    out = []
    for n in range(max(lo, 2), hi + 1):
        run = ctx.closure("G2", n)
        want = predicted_dim("G2", n)
        out.append(
            CaseResult(
                "g2-closure-dimension",
                {"n": n},
                run.dim == want,
                {"dim": run.dim, "predicted": want, "iterations": run.iterations,
                 "wall_time": run.wall_time},
            )
        )
    return out


def _suite_thm3(ctx: RunContext, lo: int, hi: int) -> list[CaseResult]:
    out = []
    for n in range(max(lo, 2), hi + 1):
        gens = preset_generators("G2", n)
        run = ctx.closure("G2", n)
        pattern, conserved = _orthogonality_pattern(gens, run.basis.rows())
        expected = {mu: mu != 1 for mu in range(n // 2 + 1)}
        out.append(
            CaseResult(
                "g2-central-projections",
                {"n": n},
                pattern == expected and conserved,
                {"pattern": {str(k): v for k, v in pattern.items()}, "conserved": conserved},
            )
        )
    return out


def _suite_thm4(ctx: RunContext, lo: int, hi: int) -> list[CaseResult]:
    out = []
    for n in range(max(lo, 2), min(hi, SOLVE_CAP) + 1):
        run = ctx.closure("G2", n)
        rows = run.basis.rows()
        residuals = membership_constraints(rows, n, exempt={1})
        clean = all(r == 0 for (_, _, r) in residuals)
        c1_inside = run.basis.contains(make_C(1, n).vec)
        out.append(
            CaseResult(
                "g2-membership-residuals",
                {"n": n},
                clean and c1_inside,
                {"residuals_checked": len(residuals), "all_zero": clean,
                 "c1_reachable": c1_inside},
            )
        )
    return out


def _suite_thm5(ctx: RunContext, lo: int, hi: int) -> list[CaseResult]:
    out = []
    for n in range(max(lo, 2), hi + 1):
        for k in range(2, n + 1):
            run = ctx.closure("Gk", n, k)
            want = predicted_dim("Gk", n, k)
            out.append(
                CaseResult(
                    "kbody-closure-dimension",
                    {"n": n, "k": k},
                    run.dim == want,
                    {"dim": run.dim, "predicted": want},
                )
            )
    return out


def _suite_thm6(ctx: RunContext, lo: int, hi: int) -> list[CaseResult]:
    out = []
    for n in range(max(lo, 2), hi + 1):
        for k in range(2, n + 1):
            gens = preset_generators("Gk", n, k=k)
            run = ctx.closure("Gk", n, k)
            pattern, conserved = _orthogonality_pattern(gens, run.basis.rows())
            expected = {mu: not 1 <= mu <= k // 2 for mu in range(n // 2 + 1)}
            out.append(
                CaseResult(
                    "kbody-central-projections",
                    {"n": n, "k": k},
                    pattern == expected and conserved,
                    {"pattern": {str(m): v for m, v in pattern.items()}, "conserved": conserved},
                )
            )
    return out


def _suite_cor1(ctx: RunContext, lo: int, hi: int) -> list[CaseResult]:
    out = []
    for n in range(max(lo, 2), hi + 1):
        dims = ambient_dims(n)
        for k in range(2, n + 1):
            run = ctx.closure("Gk", n, k)
            want = predicted_dim("Gk", n, k)
            vd = verdicts(run.basis)
            threshold = is_universal_pair(n, k)
            ok = (
                run.dim == want
                and (run.dim == dims.dim_su) == threshold
                and vd.universal == threshold
                and vd.semi_universal
            )
            out.append(
                CaseResult(
                    "universality-threshold",
                    {"n": n, "k": k},
                    ok,
                    {"dim": run.dim, "predicted": want, "dim_su": dims.dim_su,
                     "universal": vd.universal, "semi_universal": vd.semi_universal,
                     "threshold": threshold},
                )
            )
    return out


def _suite_prop1(ctx: RunContext, lo: int, hi: int) -> list[CaseResult]:
    out = []
    for n in range(max(lo, 1), hi + 1):
        rep = verify_center(n, ctx.table(n), solve_cap=SOLVE_CAP)
        out.append(CaseResult("centralizer-span", {"n": n}, rep.ok, rep.to_jsonable()))
    return out


def _suite_lemma2(ctx: RunContext, lo: int, hi: int) -> list[CaseResult]:
    out = []
    for n in range(max(lo, 1), hi + 1):
        mus = range(n // 2 + 1)
        forms_equal = all(make_L(mu, n).vec == make_L_direct(mu, n) for mu in mus)
        c_ech = SparseEchelon(key_sort=triple_sort_key)
        c_rank = c_ech.extend(make_C(mu, n).vec.coeffs for mu in mus)
        growth = sum(
            1 for mu in mus if c_ech.insert(make_L(mu, n).vec.coeffs) is not None
        )
        l_ech = SparseEchelon(key_sort=triple_sort_key)
        l_rank = l_ech.extend(make_L(mu, n).vec.coeffs for mu in mus)
        spans_equal = c_rank == len(mus) and growth == 0 and l_rank == len(mus)
        details = {"forms_equal": forms_equal, "spans_equal": spans_equal}
        ok = forms_equal and spans_equal
        if n <= WORD_CAP:
            perm_equal = all(
                class_sum(mu, n) == densify(make_L(mu, n).vec) for mu in mus
            )
            details["matches_permutation_sum"] = perm_equal
            ok = ok and perm_equal
        out.append(CaseResult("class-sum-recombination", {"n": n}, ok, details))
    return out


def _suite_notef(ctx: RunContext, lo: int, hi: int) -> list[CaseResult]:
    out = []
    for n in range(max(lo, 3), min(hi, WORD_CAP) + 1):
        for kbar in range(3, min(n, 4) + 1):
            rep = verify_printed_commutators(kbar, n)
            mismatches = [r for r in rep.records if not r["match"]]
            out.append(
                CaseResult(
                    "printed-coefficients-recomputed",
                    {"n": n, "kbar": kbar},
                    rep.ok,
                    {"coefficients": len(rep.records), "mismatches": mismatches},
                )
            )
    for n in range(max(lo, 3), hi + 1):
        for kbar in range(3, n + 1):
            cor = build_abc(kbar, n)
            unc = build_abc(kbar, n, corrected=False)
            ok = cor.rank == 2 and cor.dependence_holds and unc.rank == 3
            out.append(
                CaseResult(
                    "corrected-tables-rank",
                    {"n": n, "kbar": kbar},
                    ok,
                    {"corrected_rank": cor.rank, "dependence_holds": cor.dependence_holds,
                     "uncorrected_rank": unc.rank},
                )
            )
    return out


def _suite_schur(ctx: RunContext, lo: int, hi: int) -> list[CaseResult]:
    from . import schur

    out = []
    rule_ok = True
    try:
        for n in range(1, 21):
            schur.isotypic_table(n)
    except VerificationError:
        rule_ok = False
    out.append(CaseResult("sector-sum-rules", {"n_max": 20}, rule_ok, {}))
    for n in range(max(lo, 1), min(hi, schur.BLOCK_ANALYSIS_CAP) + 1):
        st = schur.build_schur_transform(n)
        details: dict = {"blocks": [[b.mu, b.d, b.m] for b in st.blocks]}
        ok = True
        if n >= 2:
            run = ctx.closure("G2", n)
            try:
                for row in run.basis.rows():
                    schur.block_project(row, st)
                details["block_pattern"] = "clean"
            except VerificationError as exc:
                details["block_pattern"] = str(exc)
                ok = False
            if n <= 5:
                rep = schur.certify_subspace_control(run.basis, st)
                details["subspace_control"] = rep.to_jsonable()
                ok = ok and rep.controllable and rep.consistent
        out.append(CaseResult("sector-decomposition", {"n": n}, ok, details))
    return out


_PRESETS_FOR_ORACLE = ("G1", "G1prime", "G2")


def _suite_oracle(ctx: RunContext, lo: int, hi: int) -> list[CaseResult]:
    out = []
    for n in range(max(lo, 2), min(hi, 5) + 1):
        agree = True
        details = {}
        for label in _PRESETS_FOR_ORACLE + tuple(f"Gk:{k}" for k in range(3, min(n, 5) + 1)):
            if label.startswith("Gk:"):
                gens = preset_generators("Gk", n, k=int(label[3:]))
            else:
                gens = preset_generators(label, n)
            srun = lie_closure(gens, ctx.table(n))
            drun = dense_closure([densify(g) for g in gens.members])
            details[label] = {"sparse": srun.dim, "dense": drun.dim}
            agree = agree and srun.dim == drun.dim
        out.append(CaseResult("dense-vs-sparse-closure", {"n": n}, agree, details))
    if hi >= 6:
        run6 = ctx.closure("G2", 6)
        gens6 = preset_generators("G2", 6)
        smoke = dense_closure([densify(g) for g in gens6.members], pairing="generators")
        ok = smoke.dim == run6.dim
        out.append(
            CaseResult(
                "dense-smoke",
                {"n": 6},
                ok,
                {"dense_dim": smoke.dim, "sparse_dim": run6.dim},
            )
        )
    return out


SELECTORS: dict[str, tuple[int, int, Callable]] = {
    "thm1": (2, 10, _suite_thm1),
    "thm3": (2, 8, _suite_thm3),
    "thm4": (2, 10, _suite_thm4),
    "thm5": (2, 8, _suite_thm5),
    "thm6": (2, 8, _suite_thm6),
    "cor1": (2, 8, _suite_cor1),
    "prop1": (1, 8, _suite_prop1),
    "lemma2": (1, 8, _suite_lemma2),
    "noteF": (3, 9, _suite_notef),
    "schur": (1, 6, _suite_schur),
    "oracle": (2, 6, _suite_oracle),
}


def run_selector(
    selector: str,
    n_lo: int | None = None,
    n_hi: int | None = None,
    *,
    cache_dir: str | None = None,
    method: str = "overlap",
) -> SuiteReport:
    """Run one named suite over [n_lo, n_hi] (defaults per selector)."""
    if selector not in SELECTORS:
        raise ConstraintError(
            f"unknown selector {selector!r}; choose from {', '.join(sorted(SELECTORS))}"
        )
    d_lo, d_hi, fn = SELECTORS[selector]
    lo = d_lo if n_lo is None else n_lo
    hi = d_hi if n_hi is None else n_hi
    if lo > hi or lo < 1:
        raise ConstraintError(f"bad range {lo}..{hi}")
    ctx = RunContext(cache_dir=cache_dir, method=method)
    cases = fn(ctx, lo, hi)
    return SuiteReport(selector, lo, hi, tuple(cases))
