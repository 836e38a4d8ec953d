"""CSV ingestion and emission for experiment corpora.

Two input layouts are recognised from the header:

* summary:      ``study,site,t,n1,n2``
* group stats:  ``study,site,n1,mean1,var1,n2,mean2,var2``

An empty or zero ``n2`` marks a one-sample experiment.  Lines starting
with ``#`` are comments.  Emission always uses the summary layout, with
``t`` written by ``repr`` so a write/read cycle is exact.
"""

import csv
import io
import math

from .classical import SampleSummary, one_sample_t, two_sample_t
from .equivalence import ExperimentRecord
from .errors import CorpusError, DataError

SUMMARY_COLUMNS = ("study", "site", "t", "n1", "n2")
GROUP_COLUMNS = ("study", "site", "n1", "mean1", "var1", "n2", "mean2", "var2")


def _as_text(source):
    if isinstance(source, bytes):
        data = source
    elif isinstance(source, str):
        return source
    else:
        data = source.read()
        if isinstance(data, str):
            return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise DataError(f"input is not valid UTF-8: {exc}") from None


def _split_row(line, line_no):
    try:
        return next(csv.reader([line]))
    except csv.Error as exc:
        raise DataError(f"malformed CSV: {exc}", line_no) from None


def _number(cells, name, line_no):
    raw = cells[name].strip()
    try:
        value = float(raw)
    except ValueError:
        raise DataError(f"column {name!r} is not numeric: {raw!r}", line_no) from None
    if not math.isfinite(value):
        raise DataError(f"column {name!r} is not finite: {raw!r}", line_no)
    return value


def _count(cells, name, line_no, allow_empty=False):
    raw = cells[name].strip()
    if raw == "" and allow_empty:
        return 0
    value = _number(cells, name, line_no)
    if not value.is_integer():
        raise DataError(f"column {name!r} must be a whole number, got {raw!r}", line_no)
    return int(value)


def _group(cells, suffix, line_no):
    n = _count(cells, "n" + suffix, line_no)
    mean = _number(cells, "mean" + suffix, line_no)
    var = _number(cells, "var" + suffix, line_no)
    try:
        return SampleSummary(n, mean, var)
    except DataError as exc:
        raise DataError(f"group {suffix}: {exc}", line_no) from None


def _record_from_groups(cells, line_no, variant):
    g1 = _group(cells, "1", line_no)
    n2 = _count(cells, "n2", line_no, allow_empty=True)
    if n2 == 0:
        ts = one_sample_t(g1)
    else:
        ts = two_sample_t(g1, _group(cells, "2", line_no), variant)
    return ExperimentRecord(cells["study"], cells["site"], ts.t, g1.n, n2)


def _record_from_summary(cells, line_no):
    t = _number(cells, "t", line_no)
    n1 = _count(cells, "n1", line_no)
    n2 = _count(cells, "n2", line_no, allow_empty=True)
    try:
        return ExperimentRecord(cells["study"], cells["site"], t, n1, n2)
    except DataError as exc:
        raise DataError(str(exc), line_no) from None


def parse_records(source, variant="pooled"):
    """Parse a corpus from bytes, text or a file object.

    Errors name the 1-based line number of the offending row.  ``variant``
    selects the two-sample t used for group-statistics rows.
    """
    text = _as_text(source)
    header = None
    records = []
    for line_no, line in enumerate(text.split("\n"), start=1):
        line = line.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        row = _split_row(line, line_no)
        if header is None:
            header = tuple(c.strip() for c in row)
            cols = set(header)
            if len(cols) != len(header):
                raise DataError(f"duplicate column in header {header!r}", line_no)
            if cols == set(SUMMARY_COLUMNS):
                build = _record_from_summary
            elif cols == set(GROUP_COLUMNS):
                build = lambda c, n: _record_from_groups(c, n, variant)  # noqa: E731
            else:
                known = set(SUMMARY_COLUMNS) | set(GROUP_COLUMNS)
                unknown = sorted(cols - known)
                detail = f"unknown column(s) {unknown}" if unknown else f"incomplete header {list(header)}"
                raise DataError(f"{detail}; expected {','.join(SUMMARY_COLUMNS)} or {','.join(GROUP_COLUMNS)}",
                                line_no)
            continue
        if len(row) != len(header):
            raise DataError(f"expected {len(header)} fields, found {len(row)}", line_no)
        records.append(build(dict(zip(header, row)), line_no))
    if header is None:
        raise CorpusError("input has no header row")
    if not records:
        raise CorpusError("input has no data rows")
    return records


def write_records(records, stream, comments=()):
    """Write records in the summary layout, preceded by ``# `` comment lines."""
    for c in comments:
        stream.write(f"# {c}\n")
    writer = csv.writer(stream, lineterminator="\n")
    quote_all = csv.writer(stream, lineterminator="\n", quoting=csv.QUOTE_ALL)
    writer.writerow(SUMMARY_COLUMNS)
    for r in records:
        for text in (r.study_id, r.site_id):
            if any(c in text for c in "\n\r\x00"):
                raise DataError(f"identifier {text!r} contains a line break or NUL")
        row = [r.study_id, r.site_id, repr(float(r.t)), str(r.n1), str(r.n2)]
        if r.study_id.startswith("#"):
            quote_all.writerow(row)
        else:
            writer.writerow(row)


def records_to_text(records, comments=()):
    buf = io.StringIO()
    write_records(records, buf, comments)
    return buf.getvalue()
