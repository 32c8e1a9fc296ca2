import numpy as np
import pytest

from freqgc.ingest import IngestError, TimeSeries, align, load_csv


def write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_happy_path(tmp_path):
    p = write(tmp_path, "date,sent\n1965-07,0.1\n1965-08,-0.2\n1965-09,0.3\n")
    s = load_csv(p, "sent")
    assert len(s) == 3
    np.testing.assert_allclose(s.values, [0.1, -0.2, 0.3])
    assert (s.start, s.end) == ("1965-07", "1965-09")
    assert s.name == "sent"


def test_gap_names_missing_month(tmp_path):
    p = write(tmp_path, "date,sent\n1965-07,0.1\n1965-09,0.3\n")
    with pytest.raises(IngestError, match="1965-08"):
        load_csv(p, "sent")


def test_interior_sentinel(tmp_path):
    p = write(tmp_path, "date,r\n1965-07,0.1\n1965-08,-99.99\n1965-09,0.3\n")
    with pytest.raises(IngestError, match="line 3"):
        load_csv(p, "r")


def test_edge_sentinels_trimmed_with_na_drop(tmp_path):
    p = write(tmp_path, "date,r\n1965-06,-99.99\n1965-07,0.1\n1965-08,0.2\n1965-09,\n")
    with pytest.raises(IngestError):
        load_csv(p, "r")
    s = load_csv(p, "r", na_drop=True)
    assert (s.start, s.end, len(s)) == ("1965-07", "1965-08", 2)


def test_interior_sentinel_still_fails_with_na_drop(tmp_path):
    p = write(tmp_path, "date,r\n1965-07,0.1\n1965-08,-99.99\n1965-09,0.3\n")
    with pytest.raises(IngestError):
        load_csv(p, "r", na_drop=True)


def test_missing_column(tmp_path):
    p = write(tmp_path, "date,r\n1965-07,0.1\n")
    with pytest.raises(IngestError, match="'x'"):
        load_csv(p, "x")


def test_non_numeric(tmp_path):
    p = write(tmp_path, "date,r\n1965-07,0.1\n1965-08,abc\n")
    with pytest.raises(IngestError, match="line 3"):
        load_csv(p, "r")


def test_custom_date_format(tmp_path):
    p = write(tmp_path, "month, Lo 30\n196507,1.2\n196508,0.5\n")
    s = load_csv(p, "Lo 30", date_column="month", date_format="%Y%m")
    assert s.start == "1965-07" and len(s) == 2


def test_out_of_order(tmp_path):
    p = write(tmp_path, "date,r\n1965-08,0.1\n1965-07,0.2\n")
    with pytest.raises(IngestError, match="out of order"):
        load_csv(p, "r")


def test_bad_date(tmp_path):
    p = write(tmp_path, "date,r\nJuly 1965,0.1\n")
    with pytest.raises(IngestError, match="line 2"):
        load_csv(p, "r")


class TestAlign:
    def test_identity(self):
        a = TimeSeries.from_values(np.arange(5.0), "1970-01")
        x, y = align(a, a)
        np.testing.assert_array_equal(x.values, a.values)
        np.testing.assert_array_equal(y.periods, a.periods)

    def test_intersection(self):
        months_a = (2015 - 1965) * 12 + (9 - 7) + 1
        months_b = (2016 - 1970) * 12 + 12
        a = TimeSeries.from_values(np.arange(months_a, dtype=float), "1965-07", "a")
        b = TimeSeries.from_values(np.arange(months_b, dtype=float), "1970-01", "b")
        x, y = align(a, b)
        assert (x.start, x.end, y.start, y.end) == ("1970-01", "2015-09", "1970-01", "2015-09")
        assert len(x) == len(y)

    def test_disjoint(self):
        a = TimeSeries.from_values(np.arange(3.0), "1970-01")
        b = TimeSeries.from_values(np.arange(3.0), "1980-01")
        with pytest.raises(IngestError, match="no overlap"):
            align(a, b)


def test_timeseries_rejects_gaps():
    with pytest.raises(IngestError):
        TimeSeries(np.array(["2000-01", "2000-03"], dtype="datetime64[M]"), [1.0, 2.0])
