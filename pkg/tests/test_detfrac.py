"""Deterministic every-m-th-edge construction and its three word views.

The same level-n word set is produced three ways: by labeling actual tree
edges (tree_words), by walking the mod-m successor digraph (graph_words),
and by the gap-constraint shift (sft_words, a superset in general). The
tests pin small cases exactly and cross-check the views against each other.
"""

import math

import pytest

from cantorflip import (
    DeterministicSpec,
    dim_Fm,
    dimension_rows,
    dump_words,
    from_label_symbols,
    graph_words,
    growth_rate,
    level_of,
    mod_graph,
    rho,
    sft_count,
    sft_words,
    to_label_symbols,
    tree_words,
)
from cantorflip.errors import BudgetError

GOLDEN = (1 + math.sqrt(5)) / 2


class TestLevelOf:
    def test_blocks(self):
        assert [level_of(m) for m in (3, 6, 7, 14, 15, 30, 31, 62)] == [
            1, 1, 2, 2, 3, 3, 4, 4,
        ]

    def test_block_boundaries(self):
        # block L covers 2^(L+1)-1 .. 2^(L+2)-2
        for L in range(1, 6):
            lo, hi = 2 ** (L + 1) - 1, 2 ** (L + 2) - 2
            assert level_of(lo) == L
            assert level_of(hi) == L
            assert level_of(hi + 1) == L + 1

    def test_domain(self):
        with pytest.raises(ValueError):
            level_of(2)
        with pytest.raises(ValueError):
            level_of(0)


class TestRho:
    def test_golden_ratio(self):
        assert rho(1) == pytest.approx(GOLDEN, abs=1e-10)

    def test_known_roots(self):
        assert rho(2) == pytest.approx(1.4655712318767682, abs=1e-12)
        assert rho(3) == pytest.approx(1.380277569097614, abs=1e-12)
        assert rho(4) == pytest.approx(1.3247179572447458, abs=1e-12)

    def test_defining_equation(self):
        for L in range(1, 9):
            x = rho(L)
            assert abs(x ** (L + 1) - x**L - 1) < 1e-12

    def test_decreasing_in_l(self):
        values = [rho(L) for L in range(1, 10)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert all(1 < v < 2 for v in values)


class TestDimFm:
    def test_full_set_at_m2(self):
        # marking every 2nd edge still codes the whole construction
        assert dim_Fm(2, 1 / 3) == pytest.approx(math.log(2) / math.log(3), abs=1e-14)

    def test_table_values(self):
        assert dim_Fm(3, 1 / 3) == pytest.approx(0.4380178794859424, abs=1e-12)
        assert dim_Fm(7, 1 / 3) == pytest.approx(0.34793447131694316, abs=1e-12)
        assert dim_Fm(15, 1 / 3) == pytest.approx(0.29335609959519754, abs=1e-12)

    def test_constant_on_blocks(self):
        for L in range(1, 5):
            lo, hi = 2 ** (L + 1) - 1, 2 ** (L + 2) - 2
            block = {round(dim_Fm(m, 1 / 3), 14) for m in range(lo, hi + 1)}
            assert len(block) == 1

    def test_strictly_decreasing_across_blocks(self):
        vals = [dim_Fm(m, 1 / 3) for m in (2, 3, 7, 15, 31, 62)]
        assert vals[-1] == vals[-2]  # 31 and 62 share a block
        assert all(a > b for a, b in zip(vals[:-1], vals[1:-1]))


class TestModGraph:
    def test_m6_successors(self):
        g = mod_graph(6)
        assert [g.successors(j) for j in range(6)] == [
            (1, 2), (3, 4), (5, 0), (1, 2), (3, 4), (5, 0),
        ]

    def test_m3_successors(self):
        g = mod_graph(3)
        assert [g.successors(j) for j in range(3)] == [(1, 2), (0, 1), (2, 0)]

    def test_rule(self):
        for m in (4, 7, 10):
            g = mod_graph(m)
            for j in range(m):
                assert g.successors(j) == ((2 * j + 1) % m, (2 * j + 2) % m)


class TestWordSets:
    def test_small_tree_words(self):
        assert tree_words(3, 1) == {(0,)}
        assert tree_words(3, 3) == {(0, 0, 0), (0, 0, 1), (0, 1, 0)}
        assert tree_words(6, 2) == {(0, 0), (0, 1)}

    def test_accepts_spec_or_int(self):
        assert tree_words(DeterministicSpec(6), 2) == tree_words(6, 2)

    def test_tree_equals_graph_spot(self):
        for m in (3, 5, 6, 9, 13):
            for n in (1, 4, 7):
                assert tree_words(m, n) == graph_words(m, n)

    def test_tree_within_sft_spot(self):
        for m in (3, 7, 14):
            L = level_of(m)
            for n in (4, 8):
                assert tree_words(m, n) <= sft_words(L, n)

    def test_sft_small_cases(self):
        assert sft_words(1, 3) == {(0, 0, 0), (0, 0, 1), (0, 1, 0)}
        # head of min(L, n) zeros is forced
        assert sft_words(2, 4) == {(0, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0)}

    def test_sft_gap_constraint(self):
        for w in sft_words(2, 8):
            ones = [i for i, s in enumerate(w) if s == 1]
            assert all(b - a > 2 for a, b in zip(ones, ones[1:]))
            assert not ones or ones[0] >= 2

    def test_sft_count_is_fibonacci_for_l1(self):
        fib = [1, 1]
        while len(fib) < 30:
            fib.append(fib[-1] + fib[-2])
        # count(1, n) = F_{n+1} with this indexing
        for n in range(1, 29):
            assert sft_count(1, n) == fib[n]
        assert sft_count(1, 28) == 514229

    def test_sft_words_matches_count(self):
        for L in (1, 2, 3):
            for n in (2, 5, 9):
                assert len(sft_words(L, n)) == sft_count(L, n)

    def test_budget(self):
        with pytest.raises(BudgetError):
            sft_words(1, 40)

    def test_offset_changes_words_not_count_scaling(self):
        base = tree_words(DeterministicSpec(5), 4)
        shifted = tree_words(DeterministicSpec(5, offset=1), 4)
        assert base != shifted  # same construction, different phase


class TestSymbolBridge:
    def test_roundtrip(self):
        w = (0, 1, 0, 0, 1)
        assert from_label_symbols(to_label_symbols(w)) == w

    def test_mapping(self):
        assert to_label_symbols((0, 1)) == (1, 2)
        assert from_label_symbols((1, 2)) == (0, 1)
        with pytest.raises(ValueError):
            to_label_symbols((2,))
        with pytest.raises(ValueError):
            from_label_symbols((0,))


class TestGrowth:
    def test_fibonacci_growth_is_golden(self):
        # regress over n = 10..28 so the small-n transient is excluded
        counts = [sft_count(1, n) for n in range(10, 29)]
        est = growth_rate(counts)
        assert est.last_ratio == pytest.approx(GOLDEN, abs=1e-8)
        assert est.regression == pytest.approx(GOLDEN, abs=1e-4)

    def test_tree_word_growth_tracks_rho(self):
        counts = [len(tree_words(7, n)) for n in range(1, 17)]
        est = growth_rate(counts)
        assert est.last_ratio == pytest.approx(rho(2), abs=0.01)

    def test_needs_enough_points(self):
        with pytest.raises(ValueError):
            growth_rate([1, 2, 3])


class TestReporting:
    def test_dimension_rows(self):
        rows = dimension_rows((2, 3), 1 / 3)
        assert rows[0] == (2, None, None, pytest.approx(math.log(2) / math.log(3)))
        m, L, r1, d = rows[1]
        assert (m, L) == (3, 1)
        assert r1 == pytest.approx(GOLDEN, abs=1e-10)
        assert d == pytest.approx(0.4380178794859424, abs=1e-12)

    def test_dump_words_sorted_lines(self):
        text = dump_words(tree_words(3, 2))
        assert text == "00\n01\n"
