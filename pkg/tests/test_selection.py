"""Tests for geometric quantile selection and composite-score selection."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from altimpact.errors import (
    DegenerateDistribution,
    EmptyIndicatorSet,
    EmptyInput,
    UnknownCategory,
)
from altimpact.hierarchy import (
    CAPTURES,
    CATEGORY_ORDER,
    CITATIONS,
    MENTIONS,
    SOCIAL_MEDIA,
    USAGE,
)
from altimpact.kgraph import IndicatorMatrix
from altimpact.selection import (
    SET_A,
    SET_A_PRIME,
    SET_C,
    SET_I,
    SET_I_PRIME,
    STANDARD_PAIRS,
    STANDARD_SETS,
    IndicatorSet,
    cis,
    cis_select,
    geometric_select,
    pair_label,
    select_by_set,
    selection_matrix,
)
from altimpact.stats import quantile_lower_bound, zscores


def matrix_of(values, papers=None):
    arr = np.asarray(values, dtype=np.int64)
    if papers is None:
        papers = tuple("10.1/p%03d" % i for i in range(arr.shape[0]))
    return IndicatorMatrix(papers=tuple(papers),
                           categories=tuple(CATEGORY_ORDER),
                           values=arr)


def random_matrix(rng, n_papers):
    return matrix_of(rng.integers(0, 400, size=(n_papers, 5)))


class TestStandardDefinitions:
    def test_set_compositions(self):
        assert SET_C.categories == (CITATIONS,)
        assert SET_A.categories == (CAPTURES, MENTIONS, SOCIAL_MEDIA, USAGE)
        assert set(SET_I.categories) == set(CATEGORY_ORDER)
        assert SET_I_PRIME.categories == (CITATIONS, MENTIONS, SOCIAL_MEDIA)
        assert SET_A_PRIME.categories == (MENTIONS, SOCIAL_MEDIA)
        assert [s.name for s in STANDARD_SETS] == ["C", "A", "I", "Iprime",
                                                   "Aprime"]

    def test_standard_pairs(self):
        assert STANDARD_PAIRS == ((CITATIONS, SOCIAL_MEDIA),
                                  (CITATIONS, MENTIONS),
                                  (SOCIAL_MEDIA, MENTIONS))

    def test_empty_set_rejected(self):
        with pytest.raises(EmptyIndicatorSet):
            IndicatorSet("empty", ())

    def test_pair_labels(self):
        assert pair_label(CITATIONS, SOCIAL_MEDIA) == "G_c_s"
        assert pair_label(SOCIAL_MEDIA, MENTIONS) == "G_s_m"


class TestCis:
    def test_singleton_set_equals_zscores(self):
        rng = np.random.default_rng(11)
        m = random_matrix(rng, 30)
        scores = cis(m, SET_C)
        z = zscores(m.column(CITATIONS)).scores
        for i, doi in enumerate(m.papers):
            assert scores[doi] == pytest.approx(z[i], abs=1e-12)

    def test_mean_over_categories(self):
        rng = np.random.default_rng(12)
        m = random_matrix(rng, 25)
        scores = cis(m, SET_A_PRIME)
        zm = zscores(m.column(MENTIONS)).scores
        zs = zscores(m.column(SOCIAL_MEDIA)).scores
        for i, doi in enumerate(m.papers):
            assert scores[doi] == pytest.approx((zm[i] + zs[i]) / 2,
                                                abs=1e-12)

    def test_scores_average_to_zero(self):
        rng = np.random.default_rng(13)
        m = random_matrix(rng, 40)
        for indicator_set in STANDARD_SETS:
            scores = cis(m, indicator_set)
            assert sum(scores.values()) == pytest.approx(0.0, abs=1e-9)

    def test_constant_column_raises(self):
        values = np.ones((10, 5), dtype=np.int64)
        with pytest.raises(DegenerateDistribution):
            cis(matrix_of(values), SET_I)


class TestGeometricSelect:
    def test_dominant_paper_is_selected(self):
        values = np.ones((20, 5), dtype=np.int64)
        values[:, 0] = np.arange(20)
        values[:, 4] = np.arange(20)
        values[7, 0] = 500
        values[7, 4] = 500
        res = geometric_select(matrix_of(values), CITATIONS, USAGE)
        assert res.selected == {"10.1/p007"}
        assert res.method == "geometric"
        assert res.label == "G_c_u"

    def test_both_axes_must_pass(self):
        values = np.zeros((10, 5), dtype=np.int64)
        values[:, 0] = np.arange(10)      # paper 9 tops citations
        values[:, 2] = np.arange(10)[::-1]  # paper 0 tops mentions
        res = geometric_select(matrix_of(values), CITATIONS, MENTIONS)
        assert res.selected == frozenset()

    def test_inclusive_threshold(self):
        # identical top block: quantile bound lands on the shared value
        values = np.zeros((20, 5), dtype=np.int64)
        values[:, 0] = [0] * 17 + [50, 50, 50]
        values[:, 2] = [0] * 17 + [50, 50, 50]
        res = geometric_select(matrix_of(values), CITATIONS, MENTIONS)
        assert len(res.selected) == 3

    def test_threshold_is_quantile_lower_bound(self):
        rng = np.random.default_rng(21)
        m = random_matrix(rng, 50)
        res = geometric_select(m, CITATIONS, SOCIAL_MEDIA, q=0.9)
        za = zscores(m.column(CITATIONS)).scores
        zb = zscores(m.column(SOCIAL_MEDIA)).scores
        assert res.threshold[0] == pytest.approx(
            quantile_lower_bound(za, 0.9), abs=1e-12)
        assert res.threshold[1] == pytest.approx(
            quantile_lower_bound(zb, 0.9), abs=1e-12)

    def test_axis_order_swaps_thresholds_not_membership(self):
        rng = np.random.default_rng(22)
        m = random_matrix(rng, 60)
        ab = geometric_select(m, CITATIONS, SOCIAL_MEDIA)
        ba = geometric_select(m, SOCIAL_MEDIA, CITATIONS)
        assert ab.selected == ba.selected
        assert ab.threshold == ba.threshold[::-1]

    def test_unknown_category_raises(self):
        rng = np.random.default_rng(23)
        m = random_matrix(rng, 10)
        with pytest.raises(UnknownCategory):
            geometric_select(m, CITATIONS, "Videos")

    def test_scores_carry_both_axis_values(self):
        rng = np.random.default_rng(24)
        m = random_matrix(rng, 15)
        res = geometric_select(m, CITATIONS, MENTIONS)
        assert set(res.scores) == set(m.papers)
        za = zscores(m.column(CITATIONS)).scores
        assert res.scores["10.1/p003"][0] == pytest.approx(za[3], abs=1e-12)


class TestCisSelect:
    def test_selects_top_fraction(self):
        scores = {"10.1/p%02d" % i: float(i) for i in range(100)}
        res = cis_select(scores, q=0.95)
        assert res.selected == {"10.1/p%02d" % i for i in range(95, 100)}

    def test_single_score(self):
        res = cis_select({"10.1/only": 1.5}, q=0.95)
        assert res.selected == {"10.1/only"}
        assert res.threshold == (1.5,)

    def test_empty_raises(self):
        with pytest.raises(EmptyInput):
            cis_select({})

    def test_label_passthrough(self):
        res = cis_select({"10.1/a": 0.0, "10.1/b": 1.0}, label="CIS_X")
        assert res.label == "CIS_X"

    def test_select_by_set_matches_manual_composition(self):
        rng = np.random.default_rng(31)
        m = random_matrix(rng, 40)
        auto = select_by_set(m, SET_I_PRIME, q=0.9)
        manual = cis_select(cis(m, SET_I_PRIME), q=0.9, label="CIS_Iprime")
        assert auto.selected == manual.selected
        assert auto.label == "CIS_Iprime"
        assert auto.threshold == manual.threshold


class TestBruteForceAgreement:
    """Both methods agree with a direct enumeration on small matrices."""

    def brute_geometric(self, m, cat_a, cat_b, q):
        za = zscores(m.column(cat_a)).scores
        zb = zscores(m.column(cat_b)).scores
        ta = quantile_lower_bound(za, q)
        tb = quantile_lower_bound(zb, q)
        return {doi for i, doi in enumerate(m.papers)
                if za[i] >= ta and zb[i] >= tb}

    def brute_cis(self, m, indicator_set, q):
        cols = [zscores(m.column(c)).scores for c in indicator_set.categories]
        totals = [sum(col[i] for col in cols) / len(cols)
                  for i in range(len(m.papers))]
        t = quantile_lower_bound(totals, q)
        return {doi for i, doi in enumerate(m.papers) if totals[i] >= t}

    def test_agreement_over_random_trials(self):
        rng = np.random.default_rng(41)
        for trial in range(60):
            m = random_matrix(rng, 20)
            q = float(rng.choice([0.8, 0.9, 0.95]))
            for cat_a, cat_b in STANDARD_PAIRS:
                got = geometric_select(m, cat_a, cat_b, q=q).selected
                assert got == self.brute_geometric(m, cat_a, cat_b, q)
            for indicator_set in STANDARD_SETS:
                got = select_by_set(m, indicator_set, q=q).selected
                assert got == self.brute_cis(m, indicator_set, q)


class TestAffineInvariance:
    @given(st.integers(min_value=0, max_value=2 ** 31 - 1),
           st.sampled_from([0.5, 3.0, 100.0]))
    @settings(max_examples=30, deadline=None)
    def test_scaling_any_column_keeps_selections(self, seed, factor):
        rng = np.random.default_rng(seed)
        base = rng.integers(0, 300, size=(25, 5))
        m1 = matrix_of(base)
        scaled = base.astype(float).copy()
        scaled[:, 1] *= factor
        scaled[:, 3] *= factor
        m2 = IndicatorMatrix(papers=m1.papers,
                             categories=m1.categories,
                             values=scaled)
        for cat_a, cat_b in STANDARD_PAIRS:
            assert (geometric_select(m1, cat_a, cat_b).selected
                    == geometric_select(m2, cat_a, cat_b).selected)
        for indicator_set in STANDARD_SETS:
            assert (select_by_set(m1, indicator_set).selected
                    == select_by_set(m2, indicator_set).selected)


class TestSelectionMatrix:
    def results(self):
        rng = np.random.default_rng(51)
        m = random_matrix(rng, 30)
        results = [select_by_set(m, s, q=0.9) for s in STANDARD_SETS]
        results += [geometric_select(m, a, b, q=0.9)
                    for a, b in STANDARD_PAIRS]
        return results

    def test_rows_cover_union_sorted(self):
        results = self.results()
        labels, rows = selection_matrix(results)
        union = set()
        for res in results:
            union |= res.selected
        assert [doi for doi, _ in rows] == sorted(union)
        assert labels == [res.label for res in results]

    def test_cells_match_memberships(self):
        results = self.results()
        _labels, rows = selection_matrix(results)
        for doi, flags in rows:
            for res in results:
                assert flags[res.label] == (doi in res.selected)

    def test_duplicate_labels_rejected(self):
        res = cis_select({"10.1/a": 0.0, "10.1/b": 1.0})
        with pytest.raises(ValueError):
            selection_matrix([res, res])

    def test_empty_results_give_empty_rows(self):
        labels, rows = selection_matrix([])
        assert labels == [] and rows == []


class TestSelectionResultInvariants:
    def test_selected_must_be_scored(self):
        from altimpact.selection import SelectionResult
        with pytest.raises(ValueError):
            SelectionResult(method="cis", label="CIS_X",
                            axes_or_set=("CIS_X",), threshold=(0.0,),
                            selected=frozenset({"10.1/a"}), scores={})

    def test_selected_scores_reach_threshold(self):
        rng = np.random.default_rng(61)
        m = random_matrix(rng, 45)
        res = select_by_set(m, SET_I, q=0.95)
        for doi in res.selected:
            assert res.scores[doi] >= res.threshold[0]
        unselected = set(m.papers) - res.selected
        for doi in unselected:
            assert res.scores[doi] < res.threshold[0]
