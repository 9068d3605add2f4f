"""Tests for sample CSV parsing and validation."""

import datetime as dt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from altimpact.errors import DuplicateLocalId, MalformedCsv
from altimpact.ingest import (
    PaperRecord,
    SampleSet,
    normalize_doi,
    parse_sample,
    serialize_sample,
    validate_sample,
)

WINDOW = (dt.date(2020, 1, 15), dt.date(2020, 2, 24))

GOOD_CSV = b"""id,authors,title,doi,publication_date,journal
P1,Doe J; Roe R,Viral pneumonia outcomes,10.1000/ABC,2020-01-20,The Lancet
P2,Poe E,Transmission dynamics,,2020-02-01,
P3,Lee K; Kim M; Park S,Genomic characterisation,10.1000/xyz,,BMJ
"""


def parse(data=GOOD_CSV, window=WINDOW):
    return parse_sample(data, window)


class TestParseSample:
    def test_parses_records_in_order(self):
        sample = parse()
        assert len(sample) == 3
        assert [r.local_id for r in sample.records] == ["P1", "P2", "P3"]

    def test_authors_split_on_semicolon(self):
        sample = parse()
        assert sample.records[0].authors == ("Doe J", "Roe R")
        assert sample.records[2].authors == ("Lee K", "Kim M", "Park S")
        assert sample.records[0].first_author == "Doe J"

    def test_doi_normalized_to_lowercase(self):
        sample = parse()
        assert sample.records[0].doi == "10.1000/abc"

    def test_empty_doi_becomes_none(self):
        sample = parse()
        assert sample.records[1].doi is None

    def test_dates_and_journal_parsed(self):
        sample = parse()
        assert sample.records[0].publication_date == dt.date(2020, 1, 20)
        assert sample.records[2].publication_date is None
        assert sample.records[0].journal == "The Lancet"
        assert sample.records[1].journal is None

    def test_window_recorded(self):
        sample = parse()
        assert sample.window_start == WINDOW[0]
        assert sample.window_end == WINDOW[1]

    def test_window_order_enforced(self):
        with pytest.raises(ValueError):
            SampleSet(records=(), window_start=WINDOW[1],
                      window_end=WINDOW[0])

    def test_missing_column_rejected(self):
        with pytest.raises(MalformedCsv, match="doi"):
            parse(b"id,authors,title\nP1,A,T\n")

    def test_missing_header_rejected(self):
        with pytest.raises(MalformedCsv):
            parse(b"")

    def test_duplicate_id_rejected(self):
        data = (b"id,authors,title,doi\n"
                b"P1,A,First,10.1/a\n"
                b"P1,B,Second,10.1/b\n")
        with pytest.raises(DuplicateLocalId):
            parse(data)

    def test_empty_id_rejected(self):
        with pytest.raises(MalformedCsv):
            parse(b"id,authors,title,doi\n,A,Title,10.1/a\n")

    def test_empty_title_rejected(self):
        with pytest.raises(MalformedCsv):
            parse(b"id,authors,title,doi\nP1,A,,10.1/a\n")

    def test_bad_date_rejected(self):
        data = (b"id,authors,title,doi,publication_date\n"
                b"P1,A,Title,10.1/a,20-01-2020\n")
        with pytest.raises(MalformedCsv, match="publication_date"):
            parse(data)

    def test_non_utf8_rejected(self):
        with pytest.raises(MalformedCsv, match="UTF-8"):
            parse(b"id,authors,title,doi\nP1,A,T\xff,10.1/a\n")


class TestNormalizeDoi:
    def test_lowercases_and_trims(self):
        assert normalize_doi(" 10.1016/S0140-6736(20)30183-5 ") == \
            "10.1016/s0140-6736(20)30183-5"

    def test_empty_forms(self):
        assert normalize_doi(None) is None
        assert normalize_doi("") is None
        assert normalize_doi("   ") is None


class TestValidateSample:
    def test_flags_missing_doi(self):
        warnings = validate_sample(parse())
        assert [(w.local_id, w.kind) for w in warnings] == [
            ("P2", "MissingDoi")]

    def test_flags_out_of_window_date(self):
        data = (b"id,authors,title,doi,publication_date\n"
                b"P1,A,Title,10.1/a,2019-12-01\n")
        warnings = validate_sample(parse(data))
        assert warnings[0].kind == "OutOfWindow"

    def test_window_bounds_inclusive(self):
        data = (b"id,authors,title,doi,publication_date\n"
                b"P1,A,Title one,10.1/a,2020-01-15\n"
                b"P2,B,Title two,10.1/b,2020-02-24\n")
        assert validate_sample(parse(data)) == []

    def test_flags_empty_authors(self):
        data = b"id,authors,title,doi\nP1,,Title,10.1/a\n"
        warnings = validate_sample(parse(data))
        assert [w.kind for w in warnings] == ["EmptyAuthors"]

    def test_warnings_sorted_by_id(self):
        data = (b"id,authors,title,doi\n"
                b"P9,,Late title,\n"
                b"P1,,Early title,\n")
        warnings = validate_sample(parse(data))
        assert [w.local_id for w in warnings] == ["P1", "P1", "P9", "P9"]


class TestSerializeSample:
    def test_round_trip(self):
        sample = parse()
        again = parse_sample(serialize_sample(sample), WINDOW)
        assert again.records == sample.records

    def test_round_trip_is_stable(self):
        once = serialize_sample(parse())
        twice = serialize_sample(parse_sample(once, WINDOW))
        assert once == twice

    @given(st.lists(
        st.tuples(
            st.text(alphabet="abcdefgh", min_size=1, max_size=6),
            st.text(alphabet="XYZ w.", min_size=1, max_size=12).map(str.strip)
            .filter(bool),
        ),
        min_size=1, max_size=8, unique_by=lambda t: t[0]))
    def test_round_trip_arbitrary_records(self, rows):
        records = tuple(
            PaperRecord(local_id=lid, authors=("A B",), title=title,
                        doi=None, publication_date=None, journal=None)
            for lid, title in rows)
        sample = SampleSet(records=records, window_start=WINDOW[0],
                           window_end=WINDOW[1])
        again = parse_sample(serialize_sample(sample), WINDOW)
        assert again.records == sample.records
