"""Indicator knowledge graph: population, queries, serialization.

The graph uses a deliberately small fixed vocabulary of six predicates.
Each article node (an https://doi.org/ URI) carries a hasDoi literal and
one hasIndicator link per observation; each indicator node is described by
hasCategory, hasMetric, hasSource and hasValue. There is no class
hierarchy and no reasoning: the analyses only need structural lookups.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from urllib.parse import quote, unquote

import numpy as np

from .errors import DuplicateObservation, UnknownArticle
from .hierarchy import CATEGORY_ORDER

VOCAB = "https://altimpact.example/vocab#"
INDICATOR_NS = "https://altimpact.example/indicator/"
ARTICLE_NS = "https://doi.org/"

HAS_DOI = VOCAB + "hasDoi"
HAS_INDICATOR = VOCAB + "hasIndicator"
HAS_CATEGORY = VOCAB + "hasCategory"
HAS_METRIC = VOCAB + "hasMetric"
HAS_SOURCE = VOCAB + "hasSource"
HAS_VALUE = VOCAB + "hasValue"


@dataclass(frozen=True, order=True)
class Triple:
    """One graph edge; the object is an IRI or a typed literal."""

    subject: str
    predicate: str
    object: str
    object_type: str = "iri"  # iri | integer | string | date

    def __post_init__(self):
        if not (self.subject and self.predicate and self.object != ""):
            raise ValueError("triple components must be non-empty")


def article_node(doi: str) -> str:
    return ARTICLE_NS + doi


def indicator_node(doi: str, category: str, metric: str, source: str) -> str:
    key = "|".join((doi, category, metric, source))
    return INDICATOR_NS + quote(key, safe="")


class KnowledgeGraph:
    """Triple store over articles and their indicator observations."""

    def __init__(self):
        self.triples: set[Triple] = set()
        self.article_index: dict[str, str] = {}
        self.indicator_index: dict[tuple, int] = {}

    def __len__(self) -> int:
        return len(self.triples)

    def articles(self) -> list[str]:
        return sorted(self.article_index)

    def _add_article(self, doi: str) -> str:
        node = self.article_index.get(doi)
        if node is None:
            node = article_node(doi)
            self.article_index[doi] = node
            self.triples.add(Triple(node, HAS_DOI, doi, "string"))
        return node

    def _add_observation(self, doi: str, category: str, metric: str,
                         source: str, value: int):
        key = (doi, category, metric, source)
        if key in self.indicator_index:
            if self.indicator_index[key] != value:
                raise DuplicateObservation(
                    "%r seen with values %d and %d"
                    % (key, self.indicator_index[key], value))
            return
        if value < 0:
            raise ValueError("indicator value must be non-negative")
        art = self._add_article(doi)
        ind = indicator_node(doi, category, metric, source)
        self.triples.add(Triple(art, HAS_INDICATOR, ind, "iri"))
        self.triples.add(Triple(ind, HAS_CATEGORY, category, "string"))
        self.triples.add(Triple(ind, HAS_METRIC, metric, "string"))
        self.triples.add(Triple(ind, HAS_SOURCE, source, "string"))
        self.triples.add(Triple(ind, HAS_VALUE, str(int(value)), "integer"))
        self.indicator_index[key] = int(value)


def populate(observations, article_dois=()) -> KnowledgeGraph:
    """Build a graph from observations plus any indicator-less articles.

    article_dois lists DOIs that must appear as article nodes even when no
    observation mentions them (papers legitimately record all-zero
    indicators). Raises DuplicateObservation when one (doi, category,
    metric, source) key arrives twice with different values.
    """
    kg = KnowledgeGraph()
    for doi in article_dois:
        kg._add_article(doi)
    for obs in observations:
        kg._add_observation(obs.doi, obs.category, obs.metric, obs.source,
                            obs.value)
    return kg


def category_value(kg: KnowledgeGraph, doi: str, category: str) -> int:
    """Sum of all metric values under one category for one article."""
    if doi not in kg.article_index:
        raise UnknownArticle(doi)
    return sum(v for (d, c, _m, _s), v in kg.indicator_index.items()
               if d == doi and c == category)


def metric_value(kg: KnowledgeGraph, doi: str, metric: str,
                 source: str | None = None) -> int:
    """Sum of values for one metric (optionally pinned to a source)."""
    if doi not in kg.article_index:
        raise UnknownArticle(doi)
    return sum(v for (d, _c, m, s), v in kg.indicator_index.items()
               if d == doi and m == metric
               and (source is None or s == source))


@dataclass(frozen=True, eq=False)
class IndicatorMatrix:
    """Papers x categories numeric matrix; absences are zeros."""

    papers: tuple[str, ...]
    categories: tuple[str, ...]
    values: np.ndarray

    def column(self, category: str) -> np.ndarray:
        return self.values[:, self.categories.index(category)]

    def row(self, doi: str) -> np.ndarray:
        return self.values[self.papers.index(doi), :]


def to_matrix(kg: KnowledgeGraph,
              categories=CATEGORY_ORDER) -> IndicatorMatrix:
    """Aggregate the graph into a papers x categories matrix.

    Rows follow DOI lexicographic order; columns follow the caller's
    category list. A cell is the sum of that category's metric values for
    that paper, 0 when the paper has none.
    """
    cats = tuple(categories)
    if not cats or len(set(cats)) != len(cats):
        raise ValueError("categories must be non-empty and distinct")
    papers = tuple(kg.articles())
    values = np.zeros((len(papers), len(cats)), dtype=np.int64)
    idx = {p: i for i, p in enumerate(papers)}
    cidx = {c: j for j, c in enumerate(cats)}
    for (doi, category, _m, _s), v in kg.indicator_index.items():
        j = cidx.get(category)
        if j is not None:
            values[idx[doi], j] += v
    return IndicatorMatrix(papers=papers, categories=cats, values=values)


def zero_filtered_subgraph(kg: KnowledgeGraph, categories) -> KnowledgeGraph:
    """Keep exactly the articles positive in every listed category.

    Indicator triples of the kept articles are preserved verbatim.
    """
    cats = list(categories)
    if not cats:
        raise ValueError("categories must be non-empty")
    sub = KnowledgeGraph()
    for doi in kg.articles():
        if all(category_value(kg, doi, c) > 0 for c in cats):
            sub._add_article(doi)
            for (d, c, m, s), v in kg.indicator_index.items():
                if d == doi:
                    sub._add_observation(d, c, m, s, v)
    return sub


# tabs and newlines would break the line format, so they are escaped in
# every field; quotes only matter inside literals
_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r", '"': '"'}


def _escape(text: str, quotes: bool) -> str:
    for raw, enc in _ESCAPES.items():
        text = text.replace(raw, enc)
    if quotes:
        text = text.replace('"', '\\"')
    return text


def _unescape(text: str) -> str:
    def sub(match):
        key = match.group(1)
        if key not in _UNESCAPES:
            raise ValueError("bad escape %r" % match.group(0))
        return _UNESCAPES[key]

    return re.sub(r"\\(.)", sub, text)


def _encode_object(triple: Triple) -> str:
    if triple.object_type == "iri":
        return "<%s>" % _escape(triple.object, quotes=False)
    return '"%s"^^%s' % (_escape(triple.object, quotes=True),
                         triple.object_type)


_LITERAL_RE = re.compile(r'^"(.*)"\^\^(integer|string|date)$', re.DOTALL)


def _decode_object(text: str) -> tuple[str, str]:
    if text.startswith("<") and text.endswith(">"):
        return _unescape(text[1:-1]), "iri"
    match = _LITERAL_RE.match(text)
    if not match:
        raise ValueError("unparseable triple object: %r" % text)
    return _unescape(match.group(1)), match.group(2)


def serialize(kg: KnowledgeGraph, format: str = "triples") -> bytes:
    """Serialize the graph bit-exactly.

    triples: one "<subject>\\t<predicate>\\t<object>" line per triple,
    lexicographically sorted. json: object keyed by DOI with each article's
    observation list sorted by (category, metric, source).
    """
    if format == "triples":
        lines = sorted(
            "%s\t%s\t%s" % ("<%s>" % _escape(t.subject, quotes=False),
                            "<%s>" % _escape(t.predicate, quotes=False),
                            _encode_object(t))
            for t in kg.triples)
        out = "\n".join(lines)
        if lines:
            out += "\n"
        return out.encode("utf-8")
    if format == "json":
        doc = {}
        for doi in kg.articles():
            entries = sorted(
                (c, m, s, v)
                for (d, c, m, s), v in kg.indicator_index.items() if d == doi)
            doc[doi] = [{"category": c, "metric": m, "source": s, "value": v}
                        for c, m, s, v in entries]
        return (json.dumps(doc, indent=2, sort_keys=True) + "\n").encode(
            "utf-8")
    raise ValueError("unknown serialization format %r" % format)


def parse_triples(data: bytes) -> KnowledgeGraph:
    """Rebuild a graph from its triples serialization."""
    kg = KnowledgeGraph()
    described: dict[str, dict] = {}
    links = []
    for line in data.decode("utf-8").splitlines():
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError("malformed triple line: %r" % line)
        subject, _ = _decode_object(parts[0])
        predicate, _ = _decode_object(parts[1])
        obj, otype = _decode_object(parts[2])
        if predicate == HAS_DOI:
            kg._add_article(obj)
        elif predicate == HAS_INDICATOR:
            links.append((subject, obj))
        else:
            described.setdefault(subject, {})[predicate] = (obj, otype)
    node_to_doi = {node: doi for doi, node in kg.article_index.items()}
    for art, ind in links:
        doi = node_to_doi.get(art)
        if doi is None:
            raise ValueError("indicator link from unknown article %r" % art)
        desc = described.get(ind, {})
        try:
            category = desc[HAS_CATEGORY][0]
            metric = desc[HAS_METRIC][0]
            source = desc[HAS_SOURCE][0]
            value = int(desc[HAS_VALUE][0])
        except KeyError as exc:
            raise ValueError("incomplete indicator node %r" % ind) from exc
        kg._add_observation(doi, category, metric, source, value)
    return kg
