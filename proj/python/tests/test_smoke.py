import json
import math
import os

import pytest

import adscurv

DATA = os.environ.get("ADSCURV_TEST_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "tests", "data"))


def disc_distance(p, q):
    p, q = complex(*p), complex(*q)
    return 2 * math.atanh(abs(p - q) / abs(1 - p * q.conjugate()))


def test_distance_matches_disc_formula():
    p, q = adscurv.H2Point.polar(1.0, 0.3), adscurv.H2Point.polar(0.7, 2.0)
    assert adscurv.h2_distance(p, q) == pytest.approx(disc_distance(p.poincare, q.poincare), abs=1e-12)


def test_equilateral_triangle():
    a = math.acosh(3.0)
    angles = adscurv.comparison_angles(a, a, a)
    assert all(x == pytest.approx(math.acos(0.75), abs=1e-12) for x in angles)
    assert adscurv.triangle_area(a, a, a) == pytest.approx(math.pi - 3 * math.acos(0.75), abs=1e-12)
    with pytest.raises(adscurv.DegenerateTriangle):
        adscurv.comparison_angles(1, 1, 2)


def test_chord_bound():
    assert adscurv.isosceles_chord(0.05, 0.5) <= math.sinh(0.05) * 0.5


def test_chart_lines():
    assert adscurv.classify_chart_line((0, 0, 0), (0, 0.5, 0)) == "SpaceLike"
    assert adscurv.classify_chart_line((0, 0, 0), (0.5, 0, 0)) == "TimeLike"


def test_octagon_group():
    assert [adscurv.octagon_ball_size(r) for r in range(4)] == [1, 9, 65, 457]
    assert adscurv.octagon_systole(4) == pytest.approx(2 * math.acosh(1 + math.sqrt(2)), abs=1e-8)


def test_triangulation_check():
    with open(os.path.join(DATA, "octagon.json")) as f:
        doc = json.load(f)
    reports = adscurv.check_triangulation(doc)
    assert [r["status"] for r in reports] == ["PASS", "PASS"]
    with open(os.path.join(DATA, "bad_triangle.json")) as f:
        bad = json.load(f)
    with pytest.raises(adscurv.BadTriangle):
        adscurv.check_triangulation(bad)


def test_verify_and_errors():
    out = adscurv.verify(only=["fkepsi"])
    assert out["summary"]["status"] == "PASS"
    assert len(out["reports"]) == 1
    assert "fkepsi" in adscurv.property_names()
    with pytest.raises(adscurv.InputError):
        adscurv.verify(only=["nonsense"])
    with pytest.raises(adscurv.InputError):
        adscurv.surface(fn="wobbly")


def test_approx_on_input():
    out = adscurv.approx(input=os.path.join(DATA, "octagon.json"))
    assert out["summary"]["status"] == "PASS"
