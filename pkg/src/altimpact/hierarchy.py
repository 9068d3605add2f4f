"""Category-metric-source hierarchy for impact indicators.

Indicators are organised on three levels: a category groups metrics that are
similar in meaning, a metric names the indicator itself, and a source tracks
where the value was observed. The table below lists the known triples; any
observation outside it is retained but flagged by the harvester.
"""

from __future__ import annotations

from dataclasses import dataclass

CITATIONS = "Citations"
CAPTURES = "Captures"
MENTIONS = "Mentions"
SOCIAL_MEDIA = "SocialMedia"
USAGE = "Usage"

# Canonical category order used for matrix columns and report layouts.
CATEGORY_ORDER = (CITATIONS, CAPTURES, MENTIONS, SOCIAL_MEDIA, USAGE)


@dataclass(frozen=True)
class HierarchyEntry:
    """One known (category, metric, source) triple."""

    category: str
    metric: str
    source: str


KNOWN_HIERARCHY = (
    HierarchyEntry(CITATIONS, "Citation Count", "Scopus"),
    HierarchyEntry(CAPTURES, "Readers", "Mendeley"),
    HierarchyEntry(MENTIONS, "Blog Mentions", "Blog"),
    HierarchyEntry(MENTIONS, "News Mentions", "News"),
    HierarchyEntry(MENTIONS, "Q&A Site Mentions", "Stack Exchange"),
    HierarchyEntry(MENTIONS, "References", "Wikipedia"),
    HierarchyEntry(SOCIAL_MEDIA, "Shares, Likes & Comments", "Facebook"),
    HierarchyEntry(SOCIAL_MEDIA, "Tweets", "Twitter"),
    HierarchyEntry(USAGE, "Abstract Views", "Digital Commons"),
)

_KNOWN_TRIPLES = {(e.category, e.metric, e.source) for e in KNOWN_HIERARCHY}


def is_known(category: str, metric: str, source: str) -> bool:
    """Return True when the triple belongs to the known hierarchy."""
    return (category, metric, source) in _KNOWN_TRIPLES


def is_category(name: str) -> bool:
    return name in CATEGORY_ORDER


def metrics_of(category: str) -> tuple[str, ...]:
    """All known metric names under a category, in table order."""
    return tuple(e.metric for e in KNOWN_HIERARCHY if e.category == category)


def sources_of(category: str) -> tuple[str, ...]:
    """All known source names under a category, in table order."""
    return tuple(e.source for e in KNOWN_HIERARCHY if e.category == category)
