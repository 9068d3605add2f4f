"""Candidate selection: quantile-threshold geometry and composite scores.

Both methods standardize each category column first, so selections are
invariant under positive rescaling of any raw indicator. Thresholds are the
lower bound of the chosen quantile (default the 95th) and comparisons are
inclusive.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyIndicatorSet, EmptyInput, UnknownCategory
from .hierarchy import CAPTURES, CITATIONS, MENTIONS, SOCIAL_MEDIA, USAGE
from .kgraph import IndicatorMatrix
from .stats import quantile_lower_bound, zscores


@dataclass(frozen=True)
class IndicatorSet:
    """A named group of categories feeding one composite score."""

    name: str
    categories: tuple[str, ...]

    def __post_init__(self):
        if not self.categories:
            raise EmptyIndicatorSet(self.name)


SET_C = IndicatorSet("C", (CITATIONS,))
SET_A = IndicatorSet("A", (CAPTURES, MENTIONS, SOCIAL_MEDIA, USAGE))
SET_I = IndicatorSet("I", (CITATIONS, CAPTURES, MENTIONS, SOCIAL_MEDIA,
                           USAGE))
SET_I_PRIME = IndicatorSet("Iprime", (CITATIONS, MENTIONS, SOCIAL_MEDIA))
SET_A_PRIME = IndicatorSet("Aprime", (MENTIONS, SOCIAL_MEDIA))

STANDARD_SETS = (SET_C, SET_A, SET_I, SET_I_PRIME, SET_A_PRIME)

STANDARD_PAIRS = ((CITATIONS, SOCIAL_MEDIA),
                  (CITATIONS, MENTIONS),
                  (SOCIAL_MEDIA, MENTIONS))


@dataclass(frozen=True)
class SelectionResult:
    """The outcome of one selection method."""

    method: str          # "geometric" or "cis"
    label: str           # e.g. "G_c_s" or "CIS_I"
    axes_or_set: tuple
    threshold: tuple     # one or two threshold values
    selected: frozenset
    scores: dict

    def __post_init__(self):
        missing = self.selected - set(self.scores)
        if missing:
            raise ValueError("selected DOIs lack scores: %r" % missing)


def _column_zscores(matrix: IndicatorMatrix, category: str):
    if category not in matrix.categories:
        raise UnknownCategory(category)
    return zscores(matrix.column(category), source_indicator=category)


_PAIR_SHORT = {CITATIONS: "c", CAPTURES: "r", MENTIONS: "m",
               SOCIAL_MEDIA: "s", USAGE: "u"}


def pair_label(cat_a: str, cat_b: str) -> str:
    return "G_%s_%s" % (_PAIR_SHORT.get(cat_a, cat_a),
                        _PAIR_SHORT.get(cat_b, cat_b))


def geometric_select(matrix: IndicatorMatrix, cat_a: str, cat_b: str,
                     q: float = 0.95) -> SelectionResult:
    """Select papers in the upper-right corner of a two-category z plane.

    Axis values are the z-scores of each category column; each axis gets
    the quantile lower bound as its threshold and a paper is selected when
    it reaches both thresholds.
    """
    za = _column_zscores(matrix, cat_a)
    zb = _column_zscores(matrix, cat_b)
    ta = quantile_lower_bound(za.scores, q)
    tb = quantile_lower_bound(zb.scores, q)
    scores = {doi: (za.scores[i], zb.scores[i])
              for i, doi in enumerate(matrix.papers)}
    selected = frozenset(doi for doi, (a, b) in scores.items()
                         if a >= ta and b >= tb)
    return SelectionResult(method="geometric",
                           label=pair_label(cat_a, cat_b),
                           axes_or_set=(cat_a, cat_b),
                           threshold=(ta, tb),
                           selected=selected, scores=scores)


def cis(matrix: IndicatorMatrix, indicator_set: IndicatorSet) -> dict:
    """Comprehensive Impact Score: mean of z-scores over the set.

    CIS(p) = sum of z(p, category) over the set's categories, divided by
    the set size; defined for every paper in the matrix.
    """
    if not indicator_set.categories:
        raise EmptyIndicatorSet(indicator_set.name)
    columns = [_column_zscores(matrix, cat).scores
               for cat in indicator_set.categories]
    k = len(columns)
    return {doi: sum(col[i] for col in columns) / k
            for i, doi in enumerate(matrix.papers)}


def cis_select(cis_scores: dict, q: float = 0.95,
               label: str = "CIS") -> SelectionResult:
    """Threshold composite scores at the quantile lower bound."""
    if not cis_scores:
        raise EmptyInput("no scores to select from")
    t = quantile_lower_bound(list(cis_scores.values()), q)
    selected = frozenset(doi for doi, s in cis_scores.items() if s >= t)
    return SelectionResult(method="cis", label=label, axes_or_set=(label,),
                           threshold=(t,), selected=selected,
                           scores=dict(cis_scores))


def select_by_set(matrix: IndicatorMatrix, indicator_set: IndicatorSet,
                  q: float = 0.95) -> SelectionResult:
    """Convenience wrapper: score with cis() then threshold."""
    scores = cis(matrix, indicator_set)
    return cis_select(scores, q, label="CIS_%s" % indicator_set.name)


def selection_matrix(results: list) -> tuple:
    """Cross-tabulate methods: (method labels, rows).

    Rows cover the union of all selected DOIs, sorted; each row is
    (doi, {label: bool}).
    """
    labels = [res.label for res in results]
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate method labels: %r" % labels)
    universe = set()
    for res in results:
        universe |= res.selected
    rows = []
    for doi in sorted(universe):
        rows.append((doi, {res.label: doi in res.selected
                           for res in results}))
    return labels, rows
