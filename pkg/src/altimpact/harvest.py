"""Resolve DOIs and gather citation counts plus altmetrics per DOI.

The workflow mirrors a fan-out over the sample: every record is resolved to
a DOI, then the citation count and the altmetrics for that DOI are fetched
independently (possibly in parallel) and merged into one sorted observation
list. Backends are pluggable: a live HTTP client for real services and a
JSON fixture store for hermetic runs.
"""

from __future__ import annotations

import datetime as dt
import json
import logging
import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import requests

from . import hierarchy
from .errors import BackendError, ResolutionFailed, ResolverUnavailable
from .ingest import PaperRecord, SampleSet, normalize_doi

logger = logging.getLogger(__name__)

CITATION_METRIC = "Citation Count"
CITATION_SOURCE = "Scopus"

ENV_RESOLVER_URL = "ALTIMPACT_RESOLVER_URL"
ENV_CITATIONS_URL = "ALTIMPACT_CITATIONS_URL"
ENV_ALTMETRICS_URL = "ALTIMPACT_ALTMETRICS_URL"
ENV_API_TOKEN = "ALTIMPACT_API_TOKEN"

RETRY_ATTEMPTS = 3
RETRY_BASE_DELAY = 1.0


def validate_doi(value: str) -> str:
    """Normalize a DOI and check its shape (starts with "10.", has "/")."""
    norm = normalize_doi(value)
    if norm is None or not norm.startswith("10.") or "/" not in norm:
        raise ValueError("not a DOI: %r" % value)
    return norm


@dataclass(frozen=True, order=True)
class IndicatorObservation:
    """One harvested value positioned in the indicator hierarchy."""

    doi: str
    category: str
    metric: str
    source: str
    value: int
    retrieved_at: dt.datetime
    known_hierarchy: bool = True

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("indicator value must be non-negative")


@dataclass(frozen=True)
class PipelineFailure:
    """A record that could not be processed, with the stage that failed."""

    local_id: str
    doi: str | None
    stage: str
    reason: str


class FixtureStore:
    """Offline indicator data keyed by DOI.

    File format: JSON object mapping DOI strings to
    {"citation_count": int|null,
     "altmetrics": [{"category", "metric", "source", "value"}]}.
    """

    def __init__(self, entries: dict):
        self.entries = {validate_doi(k): v for k, v in entries.items()}

    @classmethod
    def from_path(cls, path) -> "FixtureStore":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(json.load(fh))

    def citation_count(self, doi: str):
        entry = self.entries.get(doi)
        if entry is None:
            return None
        return entry.get("citation_count")

    def altmetrics(self, doi: str) -> list[dict]:
        entry = self.entries.get(doi)
        if entry is None:
            return []
        return list(entry.get("altmetrics", []))

    def dois(self):
        return set(self.entries)


class FixtureResolver:
    """Resolve (first author, title) queries against a JSON lookup table.

    File format: JSON object mapping "first_author|title" (lower-case) to
    the DOI string.
    """

    def __init__(self, table: dict):
        self.table = {k.lower(): validate_doi(v) for k, v in table.items()}

    @classmethod
    def from_path(cls, path) -> "FixtureResolver":
        with open(path, "r", encoding="utf-8") as fh:
            return cls(json.load(fh))

    def resolve(self, first_author: str | None, title: str) -> str:
        key = "%s|%s" % ((first_author or "").lower(), title.lower())
        doi = self.table.get(key)
        if doi is None:
            raise ResolutionFailed("no match for %r" % key)
        return doi


class LiveResolver:
    """Resolve metadata queries against an HTTP service.

    The endpoint is read from ALTIMPACT_RESOLVER_URL and an optional bearer
    token from ALTIMPACT_API_TOKEN. Token values are never logged.
    """

    def __init__(self, base_url: str | None = None,
                 token: str | None = None, timeout: float = 30.0):
        self.base_url = base_url or os.environ.get(ENV_RESOLVER_URL)
        if not self.base_url:
            raise ResolverUnavailable(
                "no resolver URL configured (%s)" % ENV_RESOLVER_URL)
        self.token = token if token is not None else os.environ.get(
            ENV_API_TOKEN)
        self.timeout = timeout

    def resolve(self, first_author: str | None, title: str) -> str:
        params = {"author": first_author or "", "title": title, "rows": 1}
        payload = _get_with_retry(self.base_url, params, self.token,
                                  self.timeout, ResolverUnavailable)
        items = payload.get("items", [])
        if not items:
            raise ResolutionFailed("no match for %r" % title)
        if len(items) > 1:
            logger.info("multiple matches for %r; keeping the top-ranked one",
                        title)
        doi = items[0].get("doi")
        if not doi:
            raise ResolutionFailed("match for %r carries no DOI" % title)
        return validate_doi(doi)


class FixtureCitationBackend:
    """Citation counts read from a FixtureStore."""

    def __init__(self, store: FixtureStore):
        self.store = store

    def fetch(self, doi: str) -> list[dict]:
        count = self.store.citation_count(doi)
        if count is None:
            return []
        return [{"category": hierarchy.CITATIONS, "metric": CITATION_METRIC,
                 "source": CITATION_SOURCE, "value": int(count)}]


class FixtureAltmetricsBackend:
    """Altmetric observations read from a FixtureStore."""

    def __init__(self, store: FixtureStore):
        self.store = store

    def fetch(self, doi: str) -> list[dict]:
        return self.store.altmetrics(doi)


class LiveIndicatorBackend:
    """Indicator values fetched from an HTTP service, keyed by DOI.

    Expects the service to return the same JSON shape the fixture stores:
    a citation endpoint returns {"citation_count": int|null} and an
    altmetrics endpoint returns {"altmetrics": [...]}.
    """

    def __init__(self, kind: str, base_url: str | None = None,
                 token: str | None = None, timeout: float = 30.0):
        env = ENV_CITATIONS_URL if kind == "citations" else ENV_ALTMETRICS_URL
        self.kind = kind
        self.base_url = base_url or os.environ.get(env)
        if not self.base_url:
            raise BackendError("no %s URL configured (%s)" % (kind, env))
        self.token = token if token is not None else os.environ.get(
            ENV_API_TOKEN)
        self.timeout = timeout

    def fetch(self, doi: str) -> list[dict]:
        payload = _get_with_retry(self.base_url, {"doi": doi}, self.token,
                                  self.timeout, BackendError)
        if self.kind == "citations":
            count = payload.get("citation_count")
            if count is None:
                return []
            return [{"category": hierarchy.CITATIONS,
                     "metric": CITATION_METRIC,
                     "source": CITATION_SOURCE, "value": int(count)}]
        return list(payload.get("altmetrics", []))


def _get_with_retry(url, params, token, timeout, error_cls):
    headers = {}
    if token:
        headers["Authorization"] = "Bearer %s" % token
    last = None
    for attempt in range(RETRY_ATTEMPTS):
        try:
            resp = requests.get(url, params=params, headers=headers,
                                timeout=timeout)
            if resp.status_code >= 500:
                raise error_cls("server error %d" % resp.status_code)
            if resp.status_code != 200:
                raise error_cls("unexpected status %d" % resp.status_code)
            return resp.json()
        except (requests.RequestException, ValueError, error_cls) as exc:
            last = exc
            if attempt + 1 < RETRY_ATTEMPTS:
                time.sleep(RETRY_BASE_DELAY * (2 ** attempt))
    raise error_cls("request failed after %d attempts: %s"
                    % (RETRY_ATTEMPTS, last))


def resolve_doi(record: PaperRecord, resolver) -> str:
    """Resolve a record to its DOI via the metadata resolver.

    The resolver's answer wins over a locally recorded DOI; disagreements
    (manual typos in the spreadsheet) are logged, not raised.
    """
    if not record.title.strip():
        raise ResolutionFailed("record %s has no title" % record.local_id)
    resolved = validate_doi(resolver.resolve(record.first_author,
                                             record.title))
    if record.doi is not None and record.doi != resolved:
        logger.warning("record %s: local DOI %s differs from resolved %s; "
                       "keeping the resolved one",
                       record.local_id, record.doi, resolved)
    return resolved


def harvest_indicators(doi: str, citation_backend, altmetrics_backend,
                       retrieved_at: dt.datetime) -> list[IndicatorObservation]:
    """Fetch citation and altmetric values for one DOI and merge them.

    Absent data contributes nothing; a value of zero is a real observation.
    Raises BackendError when a backend fails or returns conflicting
    duplicates.
    """
    raw = []
    raw.extend(citation_backend.fetch(doi))
    raw.extend(altmetrics_backend.fetch(doi))
    merged = {}
    for item in raw:
        try:
            key = (item["category"], item["metric"], item["source"])
            value = int(item["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise BackendError("malformed indicator for %s: %r"
                               % (doi, item)) from exc
        if value < 0:
            raise BackendError("negative indicator for %s: %r" % (doi, item))
        if key in merged and merged[key] != value:
            raise BackendError("conflicting duplicate %r for %s" % (key, doi))
        merged[key] = value
    observations = []
    for (category, metric, source), value in merged.items():
        known = hierarchy.is_known(category, metric, source)
        if not known:
            logger.warning("unknown hierarchy triple %r for %s",
                           (category, metric, source), doi)
        observations.append(IndicatorObservation(
            doi=doi, category=category, metric=metric, source=source,
            value=value, retrieved_at=retrieved_at, known_hierarchy=known))
    observations.sort()
    return observations


def run_pipeline(sample: SampleSet, resolver, citation_backend,
                 altmetrics_backend, max_workers: int = 1,
                 retrieved_at: dt.datetime | None = None):
    """Process every record: resolve, then harvest.

    Returns (observations, failures). Observations are sorted by
    (doi, category, metric, source) so the result is independent of the
    execution schedule; failures are sorted by record id. Nothing is
    emitted for a DOI whose resolution failed.
    """
    if retrieved_at is None:
        retrieved_at = dt.datetime.now(dt.timezone.utc).replace(microsecond=0)
    failures = []
    failures_lock = threading.Lock()

    def process(record: PaperRecord):
        try:
            doi = resolve_doi(record, resolver)
        except (ResolutionFailed, ResolverUnavailable) as exc:
            with failures_lock:
                failures.append(PipelineFailure(
                    record.local_id, record.doi, "resolve", str(exc)))
            return []
        try:
            return harvest_indicators(doi, citation_backend,
                                      altmetrics_backend, retrieved_at)
        except BackendError as exc:
            with failures_lock:
                failures.append(PipelineFailure(
                    record.local_id, doi, "harvest", str(exc)))
            return []

    observations = []
    if max_workers <= 1:
        for record in sample.records:
            observations.extend(process(record))
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            for batch in pool.map(process, sample.records):
                observations.extend(batch)
    # distinct records can legitimately resolve to the same DOI; drop the
    # byte-identical duplicates that produces
    observations = sorted(set(observations))
    failures.sort(key=lambda f: f.local_id)
    return observations, failures
