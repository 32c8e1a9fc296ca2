import csv
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from freqgc.config import SpectralConfig
from freqgc.ingest import TimeSeries
from freqgc.pipeline import TooShortError, run_pipeline
from freqgc.report import CSV_COLUMNS, emit_report, svg_plot
from freqgc.synthetic import TransferGenerator, generate


def series_pair(coeffs, T, seed):
    x, y = generate(TransferGenerator(coeffs, T=T, seed=seed))
    return TimeSeries.from_values(x, "1965-07", "x"), TimeSeries.from_values(y, "1965-07", "y")


@pytest.fixture(scope="module")
def causal_report():
    x, y = series_pair((1.0,), 600, 21)
    return run_pipeline(x, y, SpectralConfig(direction="both"))


def test_causal_pair_both_bands(causal_report):
    r = causal_report.result("x->y")
    assert r.bands.long.verdict == r.bands.short.verdict == "causal"
    back = causal_report.result("y->x")
    assert back.bands.long.verdict == back.bands.short.verdict == "not-causal"


def test_report_contents(causal_report):
    assert causal_report.T == 600
    assert causal_report.sizes.M == 24
    assert set(causal_report.models) == {"x", "y"}
    assert len(causal_report.unit_roots) == 2
    assert causal_report.provenance["resolved"]["M"] == 24
    assert causal_report.warnings == []


def test_independent_pairs_not_causal():
    verdicts = []
    for seed in range(10):
        x, y = series_pair((), 600, 100 + seed)
        r = run_pipeline(x, y, SpectralConfig(arma_x=(0, 0), arma_y=(0, 0))).results[0]
        verdicts.append(r.bands.long.causal or r.bands.short.causal)
    assert sum(verdicts) <= 1


def test_too_short():
    x, y = series_pair((), 50, 1)
    with pytest.raises(TooShortError):
        run_pipeline(x, y)


def test_random_walk_warns():
    x, y = series_pair((), 300, 2)
    rw = TimeSeries(x.periods, np.cumsum(x.values), "rw")
    report = run_pipeline(rw, y, SpectralConfig(arma_x=(1, 0), arma_y=(0, 0)))
    assert any("rw" in w and "unit root" in w for w in report.warnings)


def test_short_sample_warning():
    x, y = series_pair((), 150, 3)
    report = run_pipeline(x, y, SpectralConfig(arma_x=(0, 0), arma_y=(0, 0)))
    assert any("short sample" in w for w in report.warnings)


def test_misaligned_inputs_are_trimmed():
    x, y = series_pair((1.0,), 400, 4)
    y2 = TimeSeries(y.periods[12:], y.values[12:], "y")
    report = run_pipeline(x, y2, SpectralConfig(arma_x=(0, 0), arma_y=(0, 0)))
    assert report.T == 388


class TestEmit:
    def test_files_and_shape(self, causal_report, tmp_path):
        paths = emit_report(causal_report, tmp_path)
        names = sorted(p.name for p in paths)
        assert names == ["curve_x_to_y.csv", "curve_x_to_y.svg", "curve_y_to_x.csv",
                         "curve_y_to_x.svg", "summary.txt"]
        with open(tmp_path / "curve_x_to_y.csv") as fh:
            rows = list(csv.reader(fh))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert len(rows) - 1 == causal_report.config.grid_size

    def test_single_direction_names(self, tmp_path):
        x, y = series_pair((1.0,), 300, 5)
        report = run_pipeline(x, y, SpectralConfig(arma_x=(0, 0), arma_y=(0, 0), grid_size=32))
        names = sorted(p.name for p in emit_report(report, tmp_path, svg=False))
        assert names == ["curve.csv", "summary.txt"]

    def test_csv_deterministic(self, tmp_path):
        x, y = series_pair((0.5,), 300, 6)
        cfg = SpectralConfig(grid_size=64)
        emit_report(run_pipeline(x, y, cfg), tmp_path / "a")
        emit_report(run_pipeline(x, y, cfg), tmp_path / "b")
        for name in ("curve.csv", "curve.svg"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_svg_matches_csv(self, causal_report, tmp_path):
        emit_report(causal_report, tmp_path)
        with open(tmp_path / "curve_x_to_y.csv") as fh:
            rows = list(csv.DictReader(fh))
        root = ET.parse(tmp_path / "curve_x_to_y.svg").getroot()
        ns = {"s": "http://www.w3.org/2000/svg"}
        plot = root.find(".//s:g[@id='plot']", ns)
        left, top = float(plot.get("data-left")), float(plot.get("data-top"))
        w, h = float(plot.get("data-width")), float(plot.get("data-height"))
        xmax, ymax = float(plot.get("data-xmax")), float(plot.get("data-ymax"))
        pts = [tuple(map(float, p.split(","))) for p in
               root.find(".//s:polyline[@id='curve']", ns).get("points").split()]
        assert len(pts) == len(rows)
        for (px, py), row in zip(pts, rows):
            assert (px - left) / w * xmax == pytest.approx(float(row["lambda"]), abs=1e-4)
            assert (1 - (py - top) / h) * ymax == pytest.approx(float(row["h_granger"]), abs=1e-4)
        crit = root.find(".//s:line[@id='critical']", ns)
        assert crit.get("stroke-dasharray")
        y_crit = (1 - (float(crit.get("y1")) - top) / h) * ymax
        assert y_crit == pytest.approx(float(rows[0]["crit_granger"]), abs=1e-4)

    def test_summary_has_table_and_sizes(self, causal_report, tmp_path):
        emit_report(causal_report, tmp_path)
        text = (tmp_path / "summary.txt").read_text()
        for needle in ("ADF", "PP", "No trend", "Trend", "ARMA(", "n' =", "M = 24",
                       "long-term", "short-term", "sha256" if causal_report.provenance["inputs"] else "version"):
            assert needle in text


def test_dashed_line_at_paper_threshold():
    # a curve at T=603, M=24 must draw the critical value at 0.1943
    from freqgc.spectral import gc_curve
    r = np.random.default_rng(0)
    c = gc_curve(r.standard_normal(603), r.standard_normal(603), SpectralConfig(M=24, grid_size=16))
    assert c.crit_granger == pytest.approx(0.1943, abs=1e-4)
    svg = svg_plot(c)
    root = ET.fromstring(svg)
    line = root.find(".//{http://www.w3.org/2000/svg}line[@id='critical']")
    assert float(line.get("data-value")) == pytest.approx(0.1943, abs=1e-4)
