"""Lie closures: dimensions, verdicts, membership functionals, reports."""

import json
import random
from fractions import Fraction
from math import comb, factorial

import pytest

from permlie import (
    ConstraintError,
    DimensionMismatch,
    GeneratorSet,
    LieBasis,
    SymOpVector,
    all_triples,
    ambient_dims,
    build_report,
    is_universal_pair,
    lie_closure,
    membership_constraints,
    membership_residual,
    predicted_dim,
    preset_generators,
    trace_inner,
    verdicts,
)
from permlie.center import make_C
from permlie.closure import PAIRING_GENERATORS, family_exempt_mus
from permlie.oracle import dense_closure, densify


class TestClosureDimensions:
    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_single_x_field_closes_on_itself(self, ctx, n):
        assert ctx.closure("G1", n).dim == 1

    @pytest.mark.parametrize("n", [2, 4, 7])
    def test_two_field_set_closes_on_global_spin(self, ctx, n):
        assert ctx.closure("G1prime", n).dim == 3

    def test_two_body_set_four_qubits(self, ctx):
        run = ctx.closure("G2", 4)
        assert run.dim == 33
        dense = dense_closure(densify(g) for g in preset_generators("G2", 4).members)
        assert dense.dim == 33

    def test_three_body_set_four_qubits(self, ctx):
        assert ctx.closure("Gk", 4, 3).dim == 33

    def test_iterations_and_wall_time_recorded(self, ctx):
        run = ctx.closure("G2", 3)
        assert run.iterations > 0
        assert run.wall_time >= 0.0


class TestPredictedDim:
    def test_examples(self):
        assert predicted_dim("Gk", 6, 2) == 81
        assert predicted_dim("Gk", 5, 4) == comb(8, 3) - 1 == 55
        assert predicted_dim("Gk", 4, 3) == 33
        assert predicted_dim("G2", 9) == comb(12, 3) - 4
        assert predicted_dim("G1", 7) == 1
        assert predicted_dim("G1prime", 2) == 3

    def test_range_checked(self):
        with pytest.raises(ConstraintError):
            predicted_dim("Gk", 4, 1)
        with pytest.raises(ConstraintError):
            predicted_dim("Gk", 4, 5)
        with pytest.raises(ConstraintError):
            predicted_dim("Gk", 4)
        with pytest.raises(ConstraintError):
            predicted_dim("custom", 4)


class TestUniversalityThreshold:
    def test_truth_table(self):
        assert is_universal_pair(4, 4)
        assert not is_universal_pair(4, 3)
        assert not is_universal_pair(6, 5)
        assert is_universal_pair(5, 4)
        assert is_universal_pair(5, 5)
        assert is_universal_pair(3, 2)
        assert not is_universal_pair(7, 5)

    def test_range_checked(self):
        with pytest.raises(ConstraintError):
            is_universal_pair(3, 1)


class TestClosureInvariance:
    def test_generator_order_and_scale_do_not_matter(self, ctx):
        base = preset_generators("G2", 4)
        table = ctx.table(4)
        reference = lie_closure(base, table)
        shuffled = GeneratorSet(
            4,
            tuple(
                g.scaled(Fraction(3, 7)) for g in reversed(base.members)
            ),
            "custom",
        )
        other = lie_closure(shuffled, table)
        assert other.dim == reference.dim
        # reduced echelon over a fixed order is canonical: same subspace,
        # identical rows
        assert other.basis.rows() == reference.basis.rows()

    def test_k_body_ladders_are_nested(self, ctx):
        n = 5
        runs = [ctx.closure("Gk", n, k) for k in (2, 3, 4, 5)]
        for smaller, bigger in zip(runs, runs[1:]):
            assert smaller.dim <= bigger.dim
            for row in smaller.basis.rows():
                assert bigger.basis.contains(row)

    def test_pairing_strategies_agree(self, ctx):
        table = ctx.table(5)
        for label, k in (("G2", None), ("Gk", 3)):
            gens = preset_generators(label, 5, k=k)
            full = lie_closure(gens, table)
            cheap = lie_closure(gens, table, pairing=PAIRING_GENERATORS)
            assert cheap.dim == full.dim
            assert cheap.basis.rows() == full.basis.rows()

    def test_unknown_pairing_rejected(self, ctx):
        with pytest.raises(ConstraintError):
            lie_closure(preset_generators("G2", 3), ctx.table(3), pairing="random")

    def test_table_mismatch_rejected(self, ctx):
        with pytest.raises(DimensionMismatch):
            lie_closure(preset_generators("G2", 3), ctx.table(4))


class TestComplementIsCentral:
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_orthogonal_complement_spanned_by_untouched_centers(self, ctx, k):
        n = 6
        run = ctx.closure("Gk", n, k)
        dims = ambient_dims(n)
        untouched = [0] + list(range(k // 2 + 1, n // 2 + 1))
        assert run.dim + len(untouched) == dims.dim_u
        for mu in untouched:
            cv = make_C(mu, n).vec
            for row in run.basis.rows():
                assert trace_inner(row, cv) == 0


class TestMembershipFunctional:
    def test_zero_vector_all_residuals_zero(self):
        v = SymOpVector.zero(6)
        for mu in range(4):
            assert membership_residual(v, mu) == 0

    def test_center_element_residual_is_positive_sum(self):
        n, mu = 6, 2
        c2 = make_C(mu, n).vec
        expected = Fraction(0)
        for a in range(mu + 1):
            for b in range(mu - a + 1):
                c = mu - a - b
                num = factorial(2 * a) * factorial(2 * b) * factorial(2 * c)
                den = (factorial(a) * factorial(b) * factorial(c)) ** 2
                expected += Fraction(num, den)
        assert membership_residual(c2, mu) == expected
        assert expected > 0

    def test_closure_rows_satisfy_all_nonexempt_constraints(self, ctx):
        n = 6
        rows = ctx.closure("G2", n).basis.rows()
        for _, _, residual in membership_constraints(rows, n, exempt={1}):
            assert residual == 0

    def test_some_row_violates_the_exempt_constraint(self, ctx):
        n = 6
        rows = ctx.closure("G2", n).basis.rows()
        assert any(membership_residual(row, 1) != 0 for row in rows)

    def test_center_elements_reachable_inside_closure(self, ctx):
        n = 6
        basis = ctx.closure("G2", n).basis
        assert basis.contains(make_C(1, n).vec)
        assert not basis.contains(make_C(2, n).vec)

    def test_mu_out_of_range_rejected(self):
        with pytest.raises(ConstraintError):
            membership_residual(SymOpVector.zero(4), 3)


class TestExemptLevels:
    def test_k_body_families(self, ctx):
        assert family_exempt_mus(preset_generators("G2", 6)) == frozenset({1})
        assert family_exempt_mus(preset_generators("Gk", 6, k=4)) == frozenset({1, 2})
        assert family_exempt_mus(preset_generators("Gk", 8, k=7)) == frozenset({1, 2, 3})

    def test_custom_sets_use_trace_pattern(self):
        gens = GeneratorSet(4, (make_C(2, 4).vec,), "custom")
        assert family_exempt_mus(gens) == frozenset({2})
        odd = GeneratorSet(4, (SymOpVector.unit((1, 1, 1), 4),), "custom")
        assert family_exempt_mus(odd) == frozenset()


def basis_from(vectors):
    n = vectors[0].n
    basis = LieBasis(n)
    for v in vectors:
        basis.insert(v)
    return basis


class TestVerdicts:
    def test_two_body_three_qubits_universal(self, ctx):
        v = verdicts(ctx.closure("G2", 3).basis)
        assert v.universal and v.semi_universal and v.subspace_controllable

    def test_two_body_four_qubits_semi_only(self, ctx):
        v = verdicts(ctx.closure("G2", 4).basis)
        assert not v.universal
        assert v.semi_universal and v.subspace_controllable

    def test_one_body_three_qubits_nothing(self, ctx):
        v = verdicts(ctx.closure("G1", 3).basis)
        assert not (v.universal or v.semi_universal or v.subspace_controllable)

    def test_full_algebra_via_adjoined_centers(self, ctx):
        n = 4
        extra = (make_C(0, n).vec, make_C(2, n).vec)
        gens = GeneratorSet(n, preset_generators("G2", n).members + extra, "custom")
        run = lie_closure(gens, ctx.table(n))
        assert run.dim == ambient_dims(n).dim_u
        assert verdicts(run.basis).universal

    def test_traceless_algebra_via_adjoined_center(self, ctx):
        n = 4
        gens = GeneratorSet(
            n, preset_generators("G2", n).members + (make_C(2, n).vec,), "custom"
        )
        run = lie_closure(gens, ctx.table(n))
        assert run.dim == ambient_dims(n).dim_su
        assert verdicts(run.basis).universal

    def test_traceless_complement_blocks_universality(self):
        # dimension dim_su alone is not enough: the missing direction must be
        # the identity.  Dropping a non-central triple instead fails both.
        n = 4
        vectors = [
            SymOpVector.unit(t, n) for t in all_triples(n) if t != (1, 0, 0)
        ]
        v = verdicts(basis_from(vectors))
        assert not v.universal and not v.semi_universal

    def test_identity_complement_grants_universality(self):
        n = 4
        vectors = [
            SymOpVector.unit(t, n) for t in all_triples(n) if t != (0, 0, 0)
        ]
        v = verdicts(basis_from(vectors))
        assert v.universal and v.semi_universal


class TestReports:
    def test_preset_report_fields(self, ctx):
        gens = preset_generators("G2", 4)
        run = ctx.closure("G2", 4)
        report = build_report(gens, run, method="overlap", pairing="all")
        assert report.dim == report.predicted == 33
        assert report.matched is True and report.ok
        assert report.exempt == (1,)
        assert report.residual_mus == (0, 2)
        assert len(report.constraint_residuals) == 2 * report.residual_rows
        assert set(report.constraint_residuals) == {"0"}
        assert report.verdicts.semi_universal and not report.verdicts.universal
        assert len(report.pivots) == 33

    def test_custom_report_has_no_prediction(self, ctx):
        gens = GeneratorSet(3, (SymOpVector.unit((1, 0, 0), 3),), "custom")
        run = lie_closure(gens, ctx.table(3))
        report = build_report(gens, run, method="overlap", pairing="all")
        assert report.predicted is None and report.matched is None
        assert report.ok

    def test_report_json_matches_schema(self, ctx):
        import jsonschema

        from permlie.cli import schema_path

        gens = preset_generators("Gk", 5, k=3)
        run = ctx.closure("Gk", 5, 3)
        payload = build_report(gens, run, method="overlap", pairing="all").to_jsonable()
        payload["command"] = "close"
        schema = json.loads(open(schema_path("closure_report")).read())
        jsonschema.validate(payload, schema)

    def test_reports_deterministic_apart_from_timing(self, ctx):
        gens = preset_generators("G2", 3)
        table = ctx.table(3)
        a = build_report(gens, lie_closure(gens, table), method="overlap", pairing="all").to_jsonable()
        b = build_report(gens, lie_closure(gens, table), method="overlap", pairing="all").to_jsonable()
        a.pop("wall_time")
        b.pop("wall_time")
        assert a == b


class TestLieBasis:
    def test_insert_reports_growth(self):
        basis = LieBasis(2)
        x = SymOpVector.unit((1, 0, 0), 2)
        assert basis.insert(x) is not None
        assert basis.insert(x.scaled(5)) is None
        assert basis.dim == 1

    def test_rows_are_pivot_normalized(self, ctx):
        basis = ctx.closure("G2", 4).basis
        for pivot, row in zip(basis.pivots(), basis.rows()):
            assert row[pivot] == 1
        pivots = list(basis.pivots())
        assert pivots == sorted(pivots, key=lambda t: (t.level, t.kx, t.ky, t.kz))

    def test_reduce_returns_exact_remainder(self, ctx):
        basis = ctx.closure("G1prime", 4).basis
        v = SymOpVector(4, {(1, 0, 0): 1, (0, 0, 4): Fraction(1, 2)})
        rem = basis.reduce(v)
        assert rem == SymOpVector(4, {(0, 0, 4): Fraction(1, 2)})
        assert basis.reduce(rem) == rem


def test_closure_dimension_random_generator_sanity(ctx):
    """A random single generator always closes on a subalgebra, never errors."""
    rng = random.Random(3)
    n = 3
    ts = all_triples(n)
    for _ in range(5):
        v = SymOpVector(n, {t: rng.randint(-3, 3) for t in rng.sample(ts, 3)})
        if v.is_zero:
            continue
        run = lie_closure(GeneratorSet(n, (v,), "custom"), ctx.table(n))
        assert 1 <= run.dim <= ambient_dims(n).dim_u
