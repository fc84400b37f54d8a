import xml.etree.ElementTree as ET

import numpy as np
import pytest

from kippenhahn.convsupp import SurfaceSample, surface_samples
from kippenhahn.numrange import CurveSample, boundary_samples, kippenhahn_samples
from kippenhahn.pencil import Pencil, roman_pencil
from kippenhahn.render import Layer, PlotSpec, read_csv, render_svg, write_csv

NS = "{http://www.w3.org/2000/svg}"


def nilpotent():
    a = np.array([[0, 1], [0, 0]], dtype=complex)
    return Pencil([(a + a.conj().T) / 2, (a - a.conj().T) / 2j])


class TestSvg:
    def test_single_point(self):
        doc = render_svg(PlotSpec([Layer("points", [[0.0, 0.0]])]))
        root = ET.fromstring(doc)
        assert len(root.findall(f".//{NS}circle")) == 1

    def test_square_polygon(self):
        sq = [[0, 0], [1, 0], [1, 1], [0, 1]]
        root = ET.fromstring(render_svg(PlotSpec([Layer("polygon", sq)])))
        paths = root.findall(f".//{NS}path")
        assert len(paths) == 1
        d = paths[0].get("d").split()
        assert d.count("M") == 1 and d.count("L") == 3 and d[-1] == "Z"

    def test_y_axis_flipped(self):
        spec = PlotSpec([Layer("points", [[0.0, 1.0]])], width=100, height=100,
                        viewport=(0.0, 1.0, 0.0, 1.0))
        c = ET.fromstring(render_svg(spec)).find(f".//{NS}circle")
        assert (float(c.get("cx")), float(c.get("cy"))) == (0.0, 0.0)

    def test_deterministic(self, rng):
        spec = PlotSpec([Layer("polyline", rng.normal(size=(20, 2))),
                         Layer("points", rng.normal(size=(5, 2)), stroke="red")])
        assert render_svg(spec) == render_svg(spec)

    def test_bad_viewport(self):
        with pytest.raises(ValueError):
            render_svg(PlotSpec([Layer("points", [[0, 0]])], viewport=(0, 0, 0, 1)))

    def test_bad_layer(self):
        with pytest.raises(ValueError):
            Layer("points", np.zeros((0, 2)))
        with pytest.raises(ValueError):
            Layer("blob", [[0, 0]])

    def test_disk_picture(self):
        # curve points and hull of the radius-1/2 disk land on the same pixel circle
        p = nilpotent()
        curve = np.array([s.point for s in kippenhahn_samples(p, 360)])
        touch, _ = boundary_samples(p, 360)
        spec = PlotSpec([Layer("polygon", touch), Layer("points", curve)],
                        width=1000, height=1000, viewport=(-0.6, 0.6, -0.6, 0.6))
        root = ET.fromstring(render_svg(spec))
        centre, radius_px = 500.0, 0.5 * 1000 / 1.2
        for c in root.findall(f".//{NS}circle"):
            r = np.hypot(float(c.get("cx")) - centre, float(c.get("cy")) - centre)
            assert abs(r - radius_px) <= 1.0
        coords = root.find(f".//{NS}path").get("d").replace("M", "").replace("L", "")
        xy = np.array(coords.replace("Z", "").split(), dtype=float).reshape(-1, 2)
        r = np.hypot(xy[:, 0] - centre, xy[:, 1] - centre)
        assert np.abs(r - radius_px).max() <= 1.0


class TestCsv:
    def test_empty(self, tmp_path):
        path = tmp_path / "e.csv"
        write_csv([], path)
        assert path.read_text().splitlines() == ["theta,branch,lambda,lambda_prime,x1,x2"]

    def test_line_count(self, tmp_path, rng):
        samples = kippenhahn_samples(Pencil([np.diag([1.0, 2.0, 3.0]), np.eye(3)]), 3)[:3]
        path = tmp_path / "c.csv"
        write_csv(samples, path)
        assert len(path.read_text().splitlines()) == 4

    def test_curve_round_trip(self, tmp_path, rng):
        a = rng.normal(size=(3, 3))
        samples = kippenhahn_samples(Pencil([a + a.T, np.diag([1.0, 0.0, -1.0])]), 50)
        path = tmp_path / "curve.csv"
        write_csv(samples, path)
        header, data = read_csv(path)
        assert header == ["theta", "branch", "lambda", "lambda_prime", "x1", "x2"]
        for s, row in zip(samples, data):
            assert (row[0], int(row[1]), row[2], row[3], row[4], row[5]) == \
                (s.theta, s.branch, s.lam, s.lam_prime, *s.point)

    def test_surface_round_trip(self, tmp_path, rng):
        g = rng.normal(size=(20, 3))
        samples = surface_samples(roman_pencil(), g / np.linalg.norm(g, axis=1, keepdims=True))
        path = tmp_path / "surface.csv"
        write_csv(samples, path)
        header, data = read_csv(path)
        assert header == ["u1", "u2", "u3", "branch", "lambda", "x1", "x2", "x3"]
        for s, row in zip(samples, data):
            assert tuple(row[:3]) == s.direction and row[4] == s.lam and tuple(row[5:]) == s.point

    def test_unwritable(self, tmp_path):
        with pytest.raises(OSError, match="cannot write CSV"):
            write_csv([], tmp_path / "missing" / "x.csv")

    def test_wrong_type(self, tmp_path):
        with pytest.raises(TypeError):
            write_csv([1, 2], tmp_path / "x.csv")
