"""Tests for DOI resolution and the indicator harvesting pipeline."""

import datetime as dt
import json
import logging

import pytest

from altimpact.errors import (
    BackendError,
    ResolutionFailed,
    ResolverUnavailable,
)
from altimpact.harvest import (
    CITATION_METRIC,
    CITATION_SOURCE,
    FixtureAltmetricsBackend,
    FixtureCitationBackend,
    FixtureResolver,
    FixtureStore,
    IndicatorObservation,
    LiveIndicatorBackend,
    LiveResolver,
    harvest_indicators,
    resolve_doi,
    run_pipeline,
    validate_doi,
)
from altimpact.hierarchy import CAPTURES, CITATIONS, MENTIONS, SOCIAL_MEDIA
from altimpact.ingest import PaperRecord, SampleSet

WHEN = dt.datetime(2020, 3, 1, tzinfo=dt.timezone.utc)
WINDOW = (dt.date(2020, 1, 15), dt.date(2020, 2, 24))


def record(local_id="r1", title="Clinical features of something",
           authors=("Chen J",), doi=None):
    return PaperRecord(local_id=local_id, authors=authors, title=title,
                       doi=doi, publication_date=dt.date(2020, 1, 24),
                       journal="Lancet")


def sample_of(*records):
    return SampleSet(records=tuple(records), window_start=WINDOW[0],
                     window_end=WINDOW[1])


class TestValidateDoi:
    def test_accepts_and_normalizes(self):
        assert validate_doi(" 10.1000/XYZ ") == "10.1000/xyz"

    @pytest.mark.parametrize(
        "bad", ["", "hello", "10.1000", "11.1/x",
                "https://doi.org/10.1000/xyz"])
    def test_rejects_non_dois(self, bad):
        with pytest.raises(ValueError):
            validate_doi(bad)


class TestFixtureStore:
    def make(self):
        return FixtureStore({
            "10.1/a": {"citation_count": 12,
                       "altmetrics": [{"category": SOCIAL_MEDIA,
                                       "metric": "Tweets",
                                       "source": "Twitter", "value": 5}]},
            "10.1/b": {"citation_count": None, "altmetrics": []},
        })

    def test_citation_count(self):
        store = self.make()
        assert store.citation_count("10.1/a") == 12
        assert store.citation_count("10.1/b") is None
        assert store.citation_count("10.1/missing") is None

    def test_altmetrics_list(self):
        store = self.make()
        assert store.altmetrics("10.1/a")[0]["value"] == 5
        assert store.altmetrics("10.1/missing") == []

    def test_keys_are_validated(self):
        with pytest.raises(ValueError):
            FixtureStore({"not a doi": {}})

    def test_from_path(self, tmp_path):
        path = tmp_path / "fixture.json"
        path.write_text(json.dumps({"10.1/a": {"citation_count": 3}}))
        store = FixtureStore.from_path(path)
        assert store.dois() == {"10.1/a"}
        assert store.citation_count("10.1/a") == 3


class TestResolvers:
    def test_fixture_resolver_matches_case_insensitively(self):
        resolver = FixtureResolver({"chen j|some title": "10.1/a"})
        assert resolver.resolve("Chen J", "Some Title") == "10.1/a"

    def test_fixture_resolver_miss_raises(self):
        resolver = FixtureResolver({})
        with pytest.raises(ResolutionFailed):
            resolver.resolve("Chen J", "Some Title")

    def test_fixture_resolver_none_author(self):
        resolver = FixtureResolver({"|anonymous work": "10.1/a"})
        assert resolver.resolve(None, "Anonymous Work") == "10.1/a"

    def test_live_resolver_requires_url(self, monkeypatch):
        monkeypatch.delenv("ALTIMPACT_RESOLVER_URL", raising=False)
        with pytest.raises(ResolverUnavailable):
            LiveResolver()

    def test_live_resolver_parses_top_item(self, monkeypatch):
        calls = {}

        class FakeResponse:
            status_code = 200

            def json(self):
                return {"items": [{"doi": "10.1/A"}, {"doi": "10.2/b"}]}

        def fake_get(url, params=None, headers=None, timeout=None):
            calls["url"] = url
            calls["params"] = params
            calls["headers"] = headers
            return FakeResponse()

        monkeypatch.setattr("altimpact.harvest.requests.get", fake_get)
        resolver = LiveResolver(base_url="https://resolver.test/q",
                                token="secret")
        assert resolver.resolve("Chen J", "Some Title") == "10.1/a"
        assert calls["url"] == "https://resolver.test/q"
        assert calls["params"]["title"] == "Some Title"
        assert calls["headers"]["Authorization"] == "Bearer secret"

    def test_live_resolver_no_items_raises(self, monkeypatch):
        class FakeResponse:
            status_code = 200

            def json(self):
                return {"items": []}

        monkeypatch.setattr("altimpact.harvest.requests.get",
                            lambda *a, **k: FakeResponse())
        resolver = LiveResolver(base_url="https://resolver.test/q")
        with pytest.raises(ResolutionFailed):
            resolver.resolve("Chen J", "Some Title")

    def test_live_resolver_retries_server_errors(self, monkeypatch):
        attempts = []

        class Bad:
            status_code = 503

            def json(self):
                return {}

        monkeypatch.setattr("altimpact.harvest.time.sleep",
                            lambda s: attempts.append(s))
        monkeypatch.setattr("altimpact.harvest.requests.get",
                            lambda *a, **k: Bad())
        resolver = LiveResolver(base_url="https://resolver.test/q")
        with pytest.raises(ResolverUnavailable):
            resolver.resolve("Chen J", "Some Title")
        # two sleeps between three attempts, exponential backoff
        assert attempts == [1.0, 2.0]


class TestBackends:
    def test_fixture_citation_backend_shapes_item(self):
        store = FixtureStore({"10.1/a": {"citation_count": 7}})
        items = FixtureCitationBackend(store).fetch("10.1/a")
        assert items == [{"category": CITATIONS, "metric": CITATION_METRIC,
                          "source": CITATION_SOURCE, "value": 7}]

    def test_fixture_citation_backend_absent_is_empty(self):
        store = FixtureStore({"10.1/a": {"citation_count": None}})
        assert FixtureCitationBackend(store).fetch("10.1/a") == []

    def test_fixture_altmetrics_backend_copies(self):
        raw = [{"category": SOCIAL_MEDIA, "metric": "Tweets",
                "source": "Twitter", "value": 2}]
        store = FixtureStore({"10.1/a": {"altmetrics": raw}})
        backend = FixtureAltmetricsBackend(store)
        fetched = backend.fetch("10.1/a")
        assert fetched == raw
        fetched.append("sentinel")
        assert backend.fetch("10.1/a") == raw

    def test_live_backend_requires_url(self, monkeypatch):
        monkeypatch.delenv("ALTIMPACT_CITATIONS_URL", raising=False)
        with pytest.raises(BackendError):
            LiveIndicatorBackend("citations")

    def test_live_citation_backend(self, monkeypatch):
        class FakeResponse:
            status_code = 200

            def json(self):
                return {"citation_count": 9}

        monkeypatch.setattr("altimpact.harvest.requests.get",
                            lambda *a, **k: FakeResponse())
        backend = LiveIndicatorBackend("citations",
                                       base_url="https://cit.test/q")
        assert backend.fetch("10.1/a")[0]["value"] == 9

    def test_live_altmetrics_backend(self, monkeypatch):
        class FakeResponse:
            status_code = 200

            def json(self):
                return {"altmetrics": [{"category": MENTIONS,
                                        "metric": "News Mentions",
                                        "source": "News", "value": 4}]}

        monkeypatch.setattr("altimpact.harvest.requests.get",
                            lambda *a, **k: FakeResponse())
        backend = LiveIndicatorBackend("altmetrics",
                                       base_url="https://alt.test/q")
        assert backend.fetch("10.1/a")[0]["source"] == "News"

    def test_live_backend_non_200_raises(self, monkeypatch):
        class FakeResponse:
            status_code = 404

            def json(self):
                return {}

        monkeypatch.setattr("altimpact.harvest.time.sleep", lambda s: None)
        monkeypatch.setattr("altimpact.harvest.requests.get",
                            lambda *a, **k: FakeResponse())
        backend = LiveIndicatorBackend("citations",
                                       base_url="https://cit.test/q")
        with pytest.raises(BackendError):
            backend.fetch("10.1/a")


class TestResolveDoi:
    def test_resolver_answer_wins_and_logs_mismatch(self, caplog):
        resolver = FixtureResolver({"chen j|t|": "10.1/resolved"})
        rec = record(title="t|", doi="10.1/local")
        with caplog.at_level(logging.WARNING, logger="altimpact.harvest"):
            assert resolve_doi(rec, resolver) == "10.1/resolved"
        assert any("differs" in m for m in caplog.messages)

    def test_agreement_is_silent(self, caplog):
        resolver = FixtureResolver({"chen j|t": "10.1/same"})
        rec = record(title="t", doi="10.1/same")
        with caplog.at_level(logging.WARNING, logger="altimpact.harvest"):
            assert resolve_doi(rec, resolver) == "10.1/same"
        assert caplog.messages == []

    def test_blank_title_fails_fast(self):
        resolver = FixtureResolver({})
        with pytest.raises(ResolutionFailed):
            resolve_doi(record(title="   "), resolver)


class TestHarvestIndicators:
    def backends(self, citation_count=3, altmetrics=()):
        store = FixtureStore({"10.1/a": {"citation_count": citation_count,
                                         "altmetrics": list(altmetrics)}})
        return FixtureCitationBackend(store), FixtureAltmetricsBackend(store)

    def test_merges_both_backends_sorted(self):
        cit, alt = self.backends(altmetrics=[
            {"category": SOCIAL_MEDIA, "metric": "Tweets",
             "source": "Twitter", "value": 8},
            {"category": CAPTURES, "metric": "Readers",
             "source": "Mendeley", "value": 2},
        ])
        obs = harvest_indicators("10.1/a", cit, alt, WHEN)
        assert [o.category for o in obs] == [CAPTURES, CITATIONS,
                                             SOCIAL_MEDIA]
        assert obs == sorted(obs)
        assert all(o.retrieved_at == WHEN for o in obs)

    def test_zero_is_a_real_observation(self):
        cit, alt = self.backends(citation_count=0)
        obs = harvest_indicators("10.1/a", cit, alt, WHEN)
        assert len(obs) == 1 and obs[0].value == 0

    def test_identical_duplicates_collapse(self):
        item = {"category": SOCIAL_MEDIA, "metric": "Tweets",
                "source": "Twitter", "value": 8}
        cit, alt = self.backends(citation_count=None,
                                 altmetrics=[item, dict(item)])
        obs = harvest_indicators("10.1/a", cit, alt, WHEN)
        assert len(obs) == 1

    def test_conflicting_duplicates_raise(self):
        item = {"category": SOCIAL_MEDIA, "metric": "Tweets",
                "source": "Twitter", "value": 8}
        other = dict(item, value=9)
        cit, alt = self.backends(citation_count=None,
                                 altmetrics=[item, other])
        with pytest.raises(BackendError):
            harvest_indicators("10.1/a", cit, alt, WHEN)

    def test_malformed_item_raises(self):
        cit, alt = self.backends(citation_count=None,
                                 altmetrics=[{"category": SOCIAL_MEDIA}])
        with pytest.raises(BackendError):
            harvest_indicators("10.1/a", cit, alt, WHEN)

    def test_negative_value_raises(self):
        cit, alt = self.backends(citation_count=None, altmetrics=[
            {"category": SOCIAL_MEDIA, "metric": "Tweets",
             "source": "Twitter", "value": -1}])
        with pytest.raises(BackendError):
            harvest_indicators("10.1/a", cit, alt, WHEN)

    def test_unknown_hierarchy_is_flagged_not_dropped(self, caplog):
        cit, alt = self.backends(citation_count=None, altmetrics=[
            {"category": "Videos", "metric": "Plays",
             "source": "SomeTube", "value": 4}])
        with caplog.at_level(logging.WARNING, logger="altimpact.harvest"):
            obs = harvest_indicators("10.1/a", cit, alt, WHEN)
        assert len(obs) == 1
        assert obs[0].known_hierarchy is False
        assert any("unknown hierarchy" in m for m in caplog.messages)


class TestIndicatorObservation:
    def test_negative_value_rejected(self):
        with pytest.raises(ValueError):
            IndicatorObservation(doi="10.1/a", category=CITATIONS,
                                 metric=CITATION_METRIC,
                                 source=CITATION_SOURCE, value=-3,
                                 retrieved_at=WHEN)


class TestRunPipeline:
    def fixture(self):
        return {
            "10.1/a": {"citation_count": 5, "altmetrics": [
                {"category": SOCIAL_MEDIA, "metric": "Tweets",
                 "source": "Twitter", "value": 11}]},
            "10.1/b": {"citation_count": 2, "altmetrics": []},
            "10.1/c": {"citation_count": None, "altmetrics": [
                {"category": MENTIONS, "metric": "News Mentions",
                 "source": "News", "value": 6}]},
        }

    def setup_pipeline(self):
        store = FixtureStore(self.fixture())
        resolver = FixtureResolver({
            "chen j|paper a": "10.1/a",
            "li w|paper b": "10.1/b",
            "wang y|paper c": "10.1/c",
        })
        sample = sample_of(
            record("r1", title="Paper A", authors=("Chen J",)),
            record("r2", title="Paper B", authors=("Li W",)),
            record("r3", title="Paper C", authors=("Wang Y",)),
        )
        return sample, resolver, store

    def test_serial_run_collects_everything(self):
        sample, resolver, store = self.setup_pipeline()
        obs, failures = run_pipeline(
            sample, resolver, FixtureCitationBackend(store),
            FixtureAltmetricsBackend(store), retrieved_at=WHEN)
        assert failures == []
        assert len(obs) == 4
        assert obs == sorted(obs)

    def test_parallel_matches_serial(self):
        sample, resolver, store = self.setup_pipeline()
        args = (resolver, FixtureCitationBackend(store),
                FixtureAltmetricsBackend(store))
        serial, _ = run_pipeline(sample, *args, max_workers=1,
                                 retrieved_at=WHEN)
        parallel, _ = run_pipeline(sample, *args, max_workers=4,
                                   retrieved_at=WHEN)
        assert serial == parallel

    def test_resolution_failure_recorded_not_fatal(self):
        sample, resolver, store = self.setup_pipeline()
        bad = sample_of(*sample.records,
                        record("r4", title="Paper D", authors=("Nobody Q",)))
        obs, failures = run_pipeline(
            bad, resolver, FixtureCitationBackend(store),
            FixtureAltmetricsBackend(store), retrieved_at=WHEN)
        assert len(obs) == 4
        assert [f.local_id for f in failures] == ["r4"]
        assert failures[0].stage == "resolve"

    def test_harvest_failure_recorded_with_doi(self):
        sample, resolver, store = self.setup_pipeline()

        class Exploding:
            def fetch(self, doi):
                if doi == "10.1/b":
                    raise BackendError("boom")
                return []

        obs, failures = run_pipeline(
            sample, resolver, Exploding(), FixtureAltmetricsBackend(store),
            retrieved_at=WHEN)
        assert [f.local_id for f in failures] == ["r2"]
        assert failures[0].stage == "harvest"
        assert failures[0].doi == "10.1/b"

    def test_duplicate_resolution_deduplicates_observations(self):
        store = FixtureStore(self.fixture())
        resolver = FixtureResolver({
            "chen j|paper a": "10.1/a",
            "chen j|paper a again": "10.1/a",
        })
        sample = sample_of(
            record("r1", title="Paper A", authors=("Chen J",)),
            record("r2", title="Paper A again", authors=("Chen J",)),
        )
        obs, failures = run_pipeline(
            sample, resolver, FixtureCitationBackend(store),
            FixtureAltmetricsBackend(store), retrieved_at=WHEN)
        assert failures == []
        assert len(obs) == 2
        assert len({o.doi for o in obs}) == 1

    def test_default_timestamp_is_utc_whole_seconds(self):
        sample, resolver, store = self.setup_pipeline()
        obs, _ = run_pipeline(sample, resolver,
                              FixtureCitationBackend(store),
                              FixtureAltmetricsBackend(store))
        assert obs[0].retrieved_at.tzinfo is dt.timezone.utc
        assert obs[0].retrieved_at.microsecond == 0
