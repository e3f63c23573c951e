"""Python access to the adscurv library."""

import json

from ._core import (
    BadTriangle,
    DegenerateTriangle,
    Error,
    H2Point,
    InputError,
    classify_chart_line,
    comparison_angles,
    h2_distance,
    isosceles_chord,
    octagon_ball_size,
    octagon_systole,
    property_names,
    triangle_area,
)
from . import _core


def _run(command, fn="zero", src="u0", eps=(0.4, 0.2, 0.1), input="", h=0.05, steiner=1,
         pairs=200, samples=2000, seed=1, only=()):
    return json.loads(_core.run_command(command, fn, src, list(eps), input, h, steiner, pairs,
                                        samples, seed, list(only)))


def surface(**options):
    return _run("surface", **options)


def approx(**options):
    return _run("approx", **options)


def verify(**options):
    return _run("verify", **options)


def check_triangulation(doc):
    """Cone-angle and excess reports for a triangulation given as a dict or JSON text."""
    text = doc if isinstance(doc, str) else json.dumps(doc)
    return json.loads(_core.triangulation_check(text))
