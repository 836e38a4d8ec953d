import re
import xml.etree.ElementTree as ET

import pytest

from ttestkit.equivalence import EquivalenceFit, fit_line
from ttestkit.errors import FitError
from ttestkit.figure import emit_figure, render_svg

SVG_NS = "{http://www.w3.org/2000/svg}"


def _collinear():
    pts = [(1.0, -1.8), (4.0, 1.2), (9.0, 6.2)]
    return pts, fit_line(pts)


def _line_y(x1, y1, x2, y2, x):
    return y1 + (y2 - y1) * (x - x1) / (x2 - x1)


class TestRender:
    def test_is_valid_svg(self):
        pts, fit = _collinear()
        root = ET.fromstring(render_svg(pts, fit))
        assert root.tag == f"{SVG_NS}svg"
        assert len(root.findall(f".//{SVG_NS}circle")) == 3

    def test_line_passes_through_collinear_points(self):
        pts, fit = _collinear()
        root = ET.fromstring(render_svg(pts, fit))
        line = root.find(f".//{SVG_NS}line[@class='fit']")
        x1, y1, x2, y2 = (float(line.get(k)) for k in ("x1", "y1", "x2", "y2"))
        for c in root.findall(f".//{SVG_NS}circle"):
            cx, cy = float(c.get("cx")), float(c.get("cy"))
            assert cy == pytest.approx(_line_y(x1, y1, x2, y2, cx), abs=0.01)

    def test_annotation(self):
        pts, fit = _collinear()
        text = render_svg(pts, fit)
        assert re.search(r"slope = 1\b", text)
        assert "R² = 1.0000" in text
        assert "intercept = -2.8" in text

    def test_refuses_empty_points(self):
        with pytest.raises(FitError):
            render_svg([], EquivalenceFit(1.0, 0.0, 0.0, 1.0, 3))

    def test_refuses_missing_fit(self):
        with pytest.raises(FitError):
            render_svg([(0.0, 0.0)], None)


class TestEmit:
    def test_writes_both_files_deterministically(self, tmp_path):
        pts, fit = _collinear()
        svg1, csv1 = emit_figure(pts, fit, tmp_path / "a.svg")
        svg2, csv2 = emit_figure(pts, fit, tmp_path / "b.svg")
        assert csv1.name == "a.points.csv"
        assert svg1.read_bytes() == svg2.read_bytes()
        assert csv1.read_bytes() == csv2.read_bytes()

    def test_points_csv_is_exact(self, tmp_path):
        pts = [(0.1, 0.2), (1.0 / 3.0, -2.5), (7.0, 4.25)]
        _, csv_path = emit_figure(pts, fit_line(pts), tmp_path / "f.svg")
        lines = csv_path.read_text().splitlines()
        assert lines[0] == "log_inv_p,log_bf10"
        assert [tuple(map(float, ln.split(","))) for ln in lines[1:]] == pts

    def test_unwritable_path(self, tmp_path):
        pts, fit = _collinear()
        with pytest.raises(OSError):
            emit_figure(pts, fit, tmp_path / "missing" / "f.svg")
