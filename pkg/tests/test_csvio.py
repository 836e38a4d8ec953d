import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ttestkit.classical import SampleSummary, two_sample_t
from ttestkit.csvio import parse_records, records_to_text, write_records
from ttestkit.equivalence import ExperimentRecord
from ttestkit.errors import CorpusError, DataError, DegenerateSampleError

SUMMARY = b"study,site,t,n1,n2\nanchoring,osu,2.31,45,47\n"


class TestParse:
    def test_summary_layout(self):
        (r,) = parse_records(SUMMARY)
        assert (r.study_id, r.site_id, r.t, r.n1, r.n2) == ("anchoring", "osu", 2.31, 45, 47)
        assert r.n_eff == pytest.approx(22.99, abs=0.01)

    def test_group_layout_uses_pooled_t(self):
        text = "study,site,n1,mean1,var1,n2,mean2,var2\nx,y,12,1.5,2.0,15,0.5,1.0\n"
        (r,) = parse_records(text)
        expected = two_sample_t(SampleSummary(12, 1.5, 2.0), SampleSummary(15, 0.5, 1.0)).t
        assert r.t == expected
        assert r.nu == 25

    def test_one_sample_sentinels(self):
        text = "study,site,t,n1,n2\na,b,1.0,10,\na,c,1.0,10,0\n"
        assert all(r.one_sample for r in parse_records(text))
        group = "study,site,n1,mean1,var1,n2,mean2,var2\na,b,50,-0.5,1.0,,,\n"
        (r,) = parse_records(group)
        assert r.t == pytest.approx(-0.5 * 50 ** 0.5)

    def test_columns_in_any_order_with_comments_and_crlf(self):
        text = "# exported\r\nn2,n1,t,site,study\r\n\r\n47,45,2.31,osu,anchoring\r\n# trailing\r\n"
        (r,) = parse_records(text)
        assert (r.study_id, r.t, r.n1, r.n2) == ("anchoring", 2.31, 45, 47)

    def test_bom_and_file_objects(self):
        assert parse_records(io.BytesIO(b"\xef\xbb\xbf" + SUMMARY))[0].study_id == "anchoring"
        assert parse_records(io.StringIO(SUMMARY.decode()))[0].site_id == "osu"

    def test_empty_input(self):
        with pytest.raises(CorpusError):
            parse_records(b"")

    def test_header_only(self):
        with pytest.raises(CorpusError):
            parse_records(b"study,site,t,n1,n2\n")

    def test_zero_variance_names_row(self):
        text = "study,site,n1,mean1,var1,n2,mean2,var2\nok,a,10,1,1,10,0,1\nbad,b,10,1,0,10,0,1\n"
        with pytest.raises(DataError, match="row 3") as info:
            parse_records(text)
        assert info.value.row == 3

    @pytest.mark.parametrize("row,message", [
        ("a,b,oops,10,10", "not numeric"),
        ("a,b,1.0,1,10", "n1"),
        ("a,b,1.0,10.5,10", "whole number"),
        ("a,b,nan,10,10", "not finite"),
        ("a,b,1.0,10", "fields"),
    ])
    def test_bad_rows(self, row, message):
        with pytest.raises(DataError, match=message):
            parse_records(f"study,site,t,n1,n2\n{row}\n")

    def test_unknown_column(self):
        with pytest.raises(DataError, match="unknown column"):
            parse_records("study,site,t,n1,n2,extra\na,b,1,10,10,x\n")

    def test_incomplete_header(self):
        with pytest.raises(DataError, match="incomplete header"):
            parse_records("study,site,t\na,b,1\n")

    def test_invalid_utf8(self):
        with pytest.raises(DataError):
            parse_records(b"study,site,t,n1,n2\n\xff,b,1,10,10\n")

    def test_degenerate_group_is_data_error(self):
        assert issubclass(DegenerateSampleError, DataError)


identifiers = st.text(alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\r\n\x00"),
                      max_size=12)
records = st.builds(
    ExperimentRecord,
    study_id=identifiers,
    site_id=identifiers,
    t=st.floats(-1e6, 1e6, allow_nan=False),
    n1=st.integers(2, 10 ** 6),
    n2=st.one_of(st.just(0), st.integers(2, 10 ** 6)),
)


class TestRoundTrip:
    @given(st.lists(records, min_size=1, max_size=20))
    @settings(max_examples=200, deadline=None)
    def test_emit_then_parse_is_identity(self, recs):
        back = parse_records(records_to_text(recs, comments=["seed: 1"]))
        assert [r.summary_fields() for r in back] == [r.summary_fields() for r in recs]

    def test_comment_lines_written_first(self):
        buf = io.StringIO()
        write_records([ExperimentRecord("a", "b", 1.0, 10)], buf, comments=["model: x", "seed: 2"])
        lines = buf.getvalue().splitlines()
        assert lines[:3] == ["# model: x", "# seed: 2", "study,site,t,n1,n2"]

    def test_line_break_in_identifier_rejected(self):
        with pytest.raises(DataError):
            records_to_text([ExperimentRecord("a\nb", "c", 1.0, 10)])

    def test_comment_like_identifier_survives(self):
        recs = [ExperimentRecord("# not a comment", " padded ", -0.0, 3, 0)]
        back = parse_records(records_to_text(recs))
        assert [r.summary_fields() for r in back] == [r.summary_fields() for r in recs]

    def test_nul_rejected_both_ways(self):
        with pytest.raises(DataError):
            records_to_text([ExperimentRecord("a\x00", "c", 1.0, 10)])
        with pytest.raises(DataError, match="row 2"):
            parse_records("study,site,t,n1,n2\na\x00,b,1,10,10\n")
