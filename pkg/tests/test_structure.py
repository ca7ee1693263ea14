"""Structure constants: both bracket routes, algebraic laws, the disk cache."""

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permlie import (
    ConstraintError,
    DimensionMismatch,
    PauliTriple,
    StructureTable,
    SymOpVector,
    all_triples,
    bracket,
    build_table,
    compare_tables,
    load_table,
    trace_inner,
)
from permlie.center import make_C
from permlie.oracle import dense_bracket, densify, symmetrize
from permlie.structure import (
    METHOD_ORBIT,
    METHOD_OVERLAP,
    cache_path,
    normalize_method,
)


def unit(t, n):
    return SymOpVector.unit(t, n)


class TestBracketExamples:
    @pytest.mark.parametrize("n", range(1, 9))
    @pytest.mark.parametrize("method", [METHOD_OVERLAP, METHOD_ORBIT])
    def test_x_field_with_y_field_gives_z_field(self, n, method):
        got = bracket((1, 0, 0), (0, 1, 0), n, method)
        assert got == unit((0, 0, 1), n).scaled(-2)

    @pytest.mark.parametrize("n", [1, 3, 6])
    def test_self_bracket_vanishes(self, n):
        for t in all_triples(n):
            assert bracket(t, t, n).is_zero

    def test_one_qubit_su2_cycle(self):
        x, y, z = (1, 0, 0), (0, 1, 0), (0, 0, 1)
        assert bracket(x, y, 1) == unit(z, 1).scaled(-2)
        assert bracket(y, z, 1) == unit(x, 1).scaled(-2)
        assert bracket(z, x, 1) == unit(y, 1).scaled(-2)

    def test_x_field_ladder_coefficients(self):
        # [P_(kx,ky,kz), P_(1,0,0)] swaps one Y<->Z with weights ky+1, kz+1
        n, t = 5, PauliTriple(1, 2, 1)
        expected = (
            unit((1, 3, 0), n).scaled(-2 * (t.ky + 1))
            + unit((1, 1, 2), n).scaled(2 * (t.kz + 1))
        )
        got = bracket(t, (1, 0, 0), n)
        assert got == expected
        dense = symmetrize(dense_bracket(densify(unit(t, n)), densify(unit((1, 0, 0), n))))
        assert dense == expected

    @pytest.mark.parametrize("n", [4, 6])
    def test_x_field_ladder_general(self, n):
        for t in all_triples(n):
            terms = []
            if t.kz >= 1:
                terms.append(unit((t.kx, t.ky + 1, t.kz - 1), n).scaled(-2 * (t.ky + 1)))
            if t.ky >= 1:
                terms.append(unit((t.kx, t.ky - 1, t.kz + 1), n).scaled(2 * (t.kz + 1)))
            expected = sum(terms, SymOpVector.zero(n))
            assert bracket(t, (1, 0, 0), n) == expected

    def test_invalid_triples_rejected(self):
        with pytest.raises(ConstraintError):
            bracket((3, 0, 0), (1, 0, 0), 2)

    def test_unknown_method_rejected(self):
        with pytest.raises(ConstraintError):
            bracket((1, 0, 0), (0, 1, 0), 2, "dense")


class TestAlgebraicLaws:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_antisymmetry_and_even_integer_coefficients(self, ctx, n):
        table = ctx.table(n)
        ts = all_triples(n)
        for i, a in enumerate(ts):
            for b in ts[i:]:
                ab = table.bracket(a, b)
                assert ab == -table.bracket(b, a)
                for _, g in ab.items():
                    assert isinstance(g, int) and g % 2 == 0

    def test_level_and_kx_preserved_by_x_field(self, ctx):
        n = 6
        table = ctx.table(n)
        probe = PauliTriple(1, 0, 0)
        for t in all_triples(n):
            for u, _ in table.bracket(t, probe).items():
                assert u.level == t.level
                assert u.kx == t.kx

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_jacobi_full_scan(self, ctx, n):
        table = ctx.table(n)
        ts = all_triples(n)
        for a in ts:
            for b in ts:
                for c in ts:
                    total = (
                        table.bracket_vectors(table.bracket(a, b), unit(c, n))
                        + table.bracket_vectors(table.bracket(b, c), unit(a, n))
                        + table.bracket_vectors(table.bracket(c, a), unit(b, n))
                    )
                    assert total.is_zero

    def test_jacobi_random_sample_up_to_ten_qubits(self, ctx):
        # 10,000 seeded draws, weighted toward the larger qubit counts
        rng = random.Random(0x5EED)
        weights = [1, 1, 1, 2, 2, 3, 3, 4, 4]
        for _ in range(10_000):
            n = rng.choices(range(2, 11), weights=weights)[0]
            table = ctx.table(n)
            ts = all_triples(n)
            a, b, c = (rng.choice(ts) for _ in range(3))
            total = (
                table.bracket_vectors(table.bracket(a, b), unit(c, n))
                + table.bracket_vectors(table.bracket(b, c), unit(a, n))
                + table.bracket_vectors(table.bracket(c, a), unit(b, n))
            )
            assert total.is_zero, (n, a, b, c)

    def test_trace_form_is_ad_invariant(self, ctx):
        n = 4
        table = ctx.table(n)
        rng = random.Random(7)
        ts = all_triples(n)

        def rand_vec():
            return SymOpVector(
                n, {rng.choice(ts): rng.randint(-5, 5) for _ in range(4)}
            )

        for _ in range(50):
            u, v, w = rand_vec(), rand_vec(), rand_vec()
            lhs = trace_inner(table.bracket_vectors(u, v), w)
            rhs = trace_inner(v, table.bracket_vectors(u, w))
            assert lhs + rhs == 0


class TestBracketVectors:
    def test_self_bracket_zero(self, ctx):
        table = ctx.table(3)
        v = SymOpVector(3, {(1, 0, 0): 2, (0, 0, 2): 3})
        assert table.bracket_vectors(v, v).is_zero

    def test_unit_vectors_reduce_to_plain_bracket(self, ctx):
        table = ctx.table(4)
        got = table.bracket_vectors(unit((1, 0, 0), 4), unit((0, 1, 0), 4))
        assert got == unit((0, 0, 1), 4).scaled(-2)

    def test_center_element_annihilates_everything(self, ctx):
        n = 4
        table = ctx.table(n)
        c1 = make_C(1, n).vec
        rng = random.Random(11)
        ts = all_triples(n)
        v = SymOpVector(n, {t: rng.randint(-9, 9) for t in rng.sample(ts, 6)})
        assert table.bracket_vectors(c1, v).is_zero
        assert dense_bracket(densify(c1), densify(v)).is_zero

    @settings(max_examples=40, deadline=None)
    @given(
        st.dictionaries(st.sampled_from(all_triples(3)), st.integers(-9, 9), max_size=4),
        st.dictionaries(st.sampled_from(all_triples(3)), st.integers(-9, 9), max_size=4),
        st.dictionaries(st.sampled_from(all_triples(3)), st.integers(-9, 9), max_size=4),
    )
    def test_bilinearity(self, ctx, du, dv, dw):
        table = ctx.table(3)
        u, v, w = (SymOpVector(3, d) for d in (du, dv, dw))
        assert table.bracket_vectors(u, v + w) == table.bracket_vectors(
            u, v
        ) + table.bracket_vectors(u, w)

    def test_mismatched_n_rejected(self, ctx):
        with pytest.raises(DimensionMismatch):
            ctx.table(3).bracket_vectors(unit((1, 0, 0), 3), unit((1, 0, 0), 4))


class TestMethodAgreement:
    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_overlap_equals_orbit_all_pairs(self, n):
        t_over = StructureTable(n, METHOD_OVERLAP)
        t_orb = StructureTable(n, METHOD_ORBIT)
        assert compare_tables(t_over, t_orb) == []

    def test_six_qubit_full_table_dual_method(self):
        t_over = StructureTable(6, METHOD_OVERLAP)
        t_orb = StructureTable(6, METHOD_ORBIT)
        t_over.fill()
        t_orb.fill()
        assert t_over.entry_count == t_orb.entry_count
        mismatches = compare_tables(t_over, t_orb)
        assert mismatches == []

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_both_match_dense_oracle(self, ctx, n):
        table = ctx.table(n)
        ts = all_triples(n)
        for i, a in enumerate(ts):
            for b in ts[i + 1 :]:
                dense = symmetrize(dense_bracket(densify(unit(a, n)), densify(unit(b, n))))
                assert table.bracket(a, b) == dense
                assert bracket(a, b, n, METHOD_ORBIT) == dense

    def test_normalize_method(self):
        assert normalize_method("overlap") == METHOD_OVERLAP
        assert normalize_method(METHOD_ORBIT) == METHOD_ORBIT
        with pytest.raises(ConstraintError):
            normalize_method("fast")

    def test_compare_rejects_different_n(self):
        with pytest.raises(DimensionMismatch):
            compare_tables(StructureTable(2, METHOD_OVERLAP), StructureTable(3, METHOD_OVERLAP))


class TestTableBasics:
    def test_two_qubit_fill_has_all_nonredundant_pairs(self):
        table = StructureTable(2, METHOD_OVERLAP)
        table.fill()
        assert table.entry_count == 10 * 9 // 2

    def test_fill_is_idempotent(self):
        table = StructureTable(2, METHOD_OVERLAP)
        table.fill()
        count = table.entry_count
        table.fill()
        assert table.entry_count == count

    def test_bracket_accepts_text_and_tuples(self, ctx):
        table = ctx.table(2)
        assert table.bracket("1,0,0", (0, 1, 0)) == unit((0, 0, 1), 2).scaled(-2)


class TestCache:
    def test_save_load_round_trip(self, tmp_path):
        table = StructureTable(3, METHOD_OVERLAP)
        table.fill()
        path = tmp_path / "t.json"
        table.save(str(path))
        loaded = load_table(str(path))
        assert loaded is not None
        assert loaded.n == 3 and loaded.method == METHOD_OVERLAP
        assert compare_tables(table, loaded) == []

    def test_missing_file_loads_as_none_silently(self, tmp_path):
        import warnings as w

        with w.catch_warnings():
            w.simplefilter("error")
            assert load_table(str(tmp_path / "absent.json")) is None

    def test_corrupt_json_warns_and_discards(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{ not json")
        with pytest.warns(UserWarning, match="corrupt"):
            assert load_table(str(path)) is None

    def test_tampered_digest_warns_and_discards(self, tmp_path):
        table = StructureTable(2, METHOD_OVERLAP)
        table.fill()
        path = tmp_path / "t.json"
        table.save(str(path))
        body = json.loads(path.read_text())
        key = next(k for k, v in body["entries"].items() if v)
        body["entries"][key] = []
        path.write_text(json.dumps(body))
        with pytest.warns(UserWarning, match="digest"):
            assert load_table(str(path)) is None

    def test_build_table_status_lifecycle(self, tmp_path):
        cache = str(tmp_path)
        fresh = build_table(2, "overlap", cache_dir=cache, fill=True)
        assert fresh.provenance["cache"] == "saved"
        hit = build_table(2, "overlap", cache_dir=cache, fill=True)
        assert hit.provenance["cache"] == "cache-hit"
        assert compare_tables(fresh, hit) == []

        path = cache_path(cache, 2, "overlap")
        with open(path, "w") as fh:
            fh.write("garbage")
        with pytest.warns(UserWarning, match="corrupt"):
            rebuilt = build_table(2, "overlap", cache_dir=cache, fill=True)
        assert rebuilt.provenance["cache"] == "rebuilt-after-corruption+saved"
        assert load_table(path) is not None

    def test_cache_filename_contains_n_and_method(self):
        assert cache_path("/c", 8, "orbit").endswith("structure_8_orbit_v1.json")

    def test_methods_cache_separately(self, tmp_path):
        cache = str(tmp_path)
        build_table(2, "overlap", cache_dir=cache, fill=True)
        build_table(2, "orbit", cache_dir=cache, fill=True)
        assert (tmp_path / "structure_2_overlap_v1.json").exists()
        assert (tmp_path / "structure_2_orbit_v1.json").exists()

    def test_payload_matches_schema(self, tmp_path):
        import jsonschema

        from permlie.cli import schema_path

        table = StructureTable(2, METHOD_ORBIT)
        table.fill()
        schema = json.loads(open(schema_path("structure_cache")).read())
        jsonschema.validate(table.payload(), schema)
