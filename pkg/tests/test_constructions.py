from __future__ import annotations

import math
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfrkit import (
    Case,
    ConstructionError,
    CoveringDesign,
    DesignParams,
    RecursiveParams,
    asymptotic_expansion,
    construct_combination,
    construct_duplicate,
    construct_recursive,
    is_zero_skip,
    mod_bar,
    multiply_design,
    predict_recursive_size,
    recursive_block_families,
    replication_profile,
    transmission_cost,
    verify_covering,
)

from conftest import CORPUS, corpus_design


class TestModBar:
    def test_examples(self):
        assert mod_bar(6, 4) == 2
        assert mod_bar(4, 2) == 2  # representative system is [1, b], never 0
        assert mod_bar(4, 4) == 4

    @given(st.integers(min_value=1, max_value=500), st.integers(min_value=1, max_value=40))
    @settings(max_examples=100, deadline=None)
    def test_representative(self, a, b):
        r = mod_bar(a, b)
        assert 1 <= r <= b
        assert (r - a) % b == 0


class TestRecursiveParams:
    @pytest.mark.parametrize(
        "t,k,q,r,case",
        [
            (3, 4, 2, 2, Case.R_EQ_TM1),
            (5, 6, 2, 2, Case.MID),
            (4, 5, 2, 2, Case.MID),
            (6, 7, 2, 2, Case.LOW),
            (2, 3, 3, 1, Case.R_EQ_TM1),
            (2, 4, 4, 1, Case.R_EQ_TM1),
        ],
    )
    def test_known_cases(self, t, k, q, r, case):
        rp = RecursiveParams.from_params(t, k)
        assert (rp.q, rp.r, rp.case) == (q, r, case)

    @given(st.integers(min_value=2, max_value=8), st.integers(min_value=0, max_value=8))
    @settings(max_examples=100, deadline=None)
    def test_decomposition(self, t, dk):
        k = t + dk
        rp = RecursiveParams.from_params(t, k)
        assert k == (rp.q - 1) * (t - 1) + rp.r
        assert 1 <= rp.r <= t - 1


class TestDuplicate:
    def test_reference_design(self, design_345):
        arr = construct_duplicate(design_345)
        assert arr.n == 8
        counts, _ = replication_profile(arr)
        base_counts = {a: sum(b.count(a) for b in design_345.blocks) for a in range(1, 6)}
        assert counts == {a: 2 * base_counts[a] for a in base_counts}
        assert is_zero_skip(arr, 1).ok
        assert verify_covering(CoveringDesign(design_345.params, arr.columns)) == []

    def test_single_block(self):
        d = corpus_design(5, 6, 6, 1)
        arr = construct_duplicate(d)
        assert arr.columns == ((1, 2, 3, 4, 5, 6), (1, 2, 3, 4, 5, 6))
        assert is_zero_skip(arr, 1).ok

    def test_rejects_non_covering(self):
        bad = CoveringDesign(DesignParams(3, 4, 5), ((1, 2, 3, 4),))
        with pytest.raises(ConstructionError):
            construct_duplicate(bad)


class TestCombination:
    def test_small_pair(self):
        d_t = corpus_design(3, 4, 5, 4)
        d_w = corpus_design(2, 4, 5, 3)
        arr = construct_combination(d_t, d_w)
        # r = 2 = t-1, so each weak block gets C(4,2) = 6 prefixed copies
        assert arr.n == 4 + 6 * 3
        assert verify_covering(CoveringDesign(d_t.params, arr.columns)) == []
        assert is_zero_skip(arr, 2).ok

    def test_prefix_occupies_leading_rows(self):
        d_t = corpus_design(3, 4, 5, 4)
        d_w = corpus_design(2, 4, 5, 3)
        arr = construct_combination(d_t, d_w)
        offset = 4
        from itertools import combinations as subsets

        for block in d_w.blocks:
            for prefix in subsets(block, 2):
                col = arr.columns[offset]
                assert set(col[:2]) == set(prefix)
                assert transmission_cost(col, prefix) == 0
                offset += 1
        assert offset == arr.n

    def test_large_pair_column_count(self, design_56_12, design_46_12):
        arr = construct_combination(design_56_12, design_46_12)
        # r = 2 with t-2 = 3, so both the 4-subset and 2-subset copy families
        assert arr.n == 132 + (15 + 15) * 41 == 1362
        counts, rho = replication_profile(arr)
        assert rho >= 66

    def test_empty_weak_design_degenerates(self, design_345):
        empty = CoveringDesign(DesignParams(2, 4, 5), ())
        arr = construct_combination(design_345, empty)
        assert arr.columns == design_345.blocks

    def test_parameter_mismatch(self, design_345):
        other = corpus_design(2, 3, 5, 4)
        with pytest.raises(ConstructionError):
            construct_combination(design_345, other)
        with pytest.raises(ConstructionError):
            construct_combination(design_345, design_345)


GOLDEN_B1 = {
    (1, 2, 6, 7), (1, 3, 6, 8), (1, 4, 6, 9), (1, 5, 6, 10), (2, 3, 7, 8),
    (2, 4, 7, 9), (2, 5, 7, 10), (3, 4, 8, 9), (3, 5, 8, 10), (4, 5, 9, 10),
}
GOLDEN_B3_SHORT = {
    (1, 2, 8, 9), (1, 2, 8, 10), (1, 2, 9, 10), (1, 3, 9, 10),
    (1, 3, 7, 9), (1, 3, 7, 10), (1, 4, 7, 10), (1, 4, 8, 10),
    (1, 4, 7, 8), (1, 5, 7, 8), (1, 5, 7, 9), (1, 5, 8, 9),
    (2, 3, 6, 9), (2, 3, 6, 10), (2, 4, 6, 10), (3, 4, 6, 10),
    (2, 4, 6, 8), (2, 5, 6, 8), (2, 5, 6, 9), (3, 5, 6, 9),
    (3, 4, 6, 7), (3, 5, 6, 7), (4, 5, 6, 7), (4, 5, 6, 8),
}
GOLDEN_B3_ABSENT = {
    (1, 2, 3, 4), (1, 2, 3, 5), (1, 2, 4, 5), (1, 3, 4, 5),
    (6, 7, 8, 9), (6, 7, 8, 10), (6, 7, 9, 10), (6, 8, 9, 10),
}


class TestRecursive:
    def test_golden_families(self, design_345):
        fams = recursive_block_families(design_345)
        assert set(fams.b1) == GOLDEN_B1
        assert set(fams.b3_one_short) == GOLDEN_B3_SHORT
        assert set(fams.b3_one_absent) == GOLDEN_B3_ABSENT
        assert fams.b2 == frozenset() and fams.b4 == frozenset()
        assert fams.total() == 42

    def test_golden_array(self, design_345):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            arr, prediction = construct_recursive(design_345)
        assert arr.n == 42 and arr.v == 10 and arr.k == 4
        assert prediction.predicted_blocks == 42
        assert prediction.coefficient == 8
        assert prediction.case is Case.R_EQ_TM1
        assert verify_covering(CoveringDesign(DesignParams(3, 4, 10), arr.columns)) == []
        assert is_zero_skip(arr, 2).ok

    def test_duplicate_blocks_rejected(self, design_345):
        with pytest.raises(ConstructionError):
            construct_recursive(multiply_design(design_345, 2))

    def test_gate_warning_but_valid_output(self):
        d = corpus_design(5, 6, 6, 1)
        with pytest.warns(UserWarning, match="not guaranteed"):
            arr, prediction = construct_recursive(d)
        assert arr.n == prediction.predicted_blocks == 212
        assert verify_covering(CoveringDesign(DesignParams(5, 6, 12), arr.columns)) == []

    def test_locality_slack_warning(self, design_345):
        # meets the locality floor but is not properly local
        with pytest.warns(UserWarning, match="properly local"):
            construct_recursive(design_345)

    @pytest.mark.parametrize("t,k,v,n", CORPUS)
    def test_size_matches_prediction_across_corpus(self, t, k, v, n):
        if t < 2:
            pytest.skip("recursive construction needs t >= 2")
        design = corpus_design(t, k, v, n)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            arr, prediction = construct_recursive(design)
        assert arr.n == prediction.predicted_blocks

    def test_three_part_blowup(self):
        # q = 3 exercises multi-copy translation and the absent-profile family
        d = corpus_design(2, 3, 7, 7)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            arr, prediction = construct_recursive(d)
        assert prediction.predicted_blocks == 24 * 7 + 7 == 175
        assert arr.v == 21
        assert verify_covering(CoveringDesign(DesignParams(2, 3, 21), arr.columns)) == []
        assert is_zero_skip(arr, 3).ok


class TestPredictSize:
    def test_reference_cases(self):
        p = predict_recursive_size(DesignParams(3, 4, 5), 4)
        assert (p.predicted_blocks, p.coefficient, p.case) == (42, 8, Case.R_EQ_TM1)
        p = predict_recursive_size(DesignParams(5, 6, 6), 1)
        assert (p.predicted_blocks, p.coefficient, p.case) == (212, 32, Case.MID)
        p = predict_recursive_size(DesignParams(5, 6, 12), 132)
        assert p.predicted_blocks == 32 * 132 + 2 * 6 * math.comb(12, 4) == 10164

    def test_zero_base_blocks(self):
        p = predict_recursive_size(DesignParams(3, 4, 5), 0)
        assert p.predicted_blocks == math.comb(5, 2)
        p = predict_recursive_size(DesignParams(5, 6, 6), 0)
        assert p.predicted_blocks == 2 * math.comb(4, 2) * math.comb(6, 4)

    def test_low_case_has_extra_terms(self):
        # (6,7): q=2, r=2, floor(t/q)=3 so m=3 contributes
        p = predict_recursive_size(DesignParams(6, 7, 14), 10)
        rp = RecursiveParams.from_params(6, 7)
        assert rp.case is Case.LOW
        assert p.coefficient == 114


class TestAsymptoticExpansion:
    TABLE = {
        (3, 4): Fraction(1),
        (4, 5): Fraction(11, 8),
        (4, 6): Fraction(11, 8),
        (5, 6): Fraction(1),
        (5, 7): Fraction(9, 4),
        (5, 8): Fraction(9, 4),
        (6, 7): Fraction(57, 32),
        (6, 8): Fraction(57, 32),
        (6, 9): Fraction(127, 32),
        (6, 10): Fraction(127, 32),
    }

    def test_reference_table(self):
        for (t, k), expected in self.TABLE.items():
            assert asymptotic_expansion(t, k) == expected, (t, k)

    def test_optimal_cases(self):
        assert asymptotic_expansion(3, 4) == 1
        assert asymptotic_expansion(5, 6) == 1

    @pytest.mark.parametrize("t", range(2, 7))
    def test_k_equals_t_uses_same_formula(self, t):
        value = asymptotic_expansion(t, t)
        assert value > 0

    def test_domain(self):
        with pytest.raises(ValueError):
            asymptotic_expansion(1, 4)
        with pytest.raises(ValueError):
            asymptotic_expansion(5, 4)
