import math
import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from cyclephase.circstats import circular_mean, resultant_length, rose_histogram
from cyclephase.plotting import emit_rose_svg

NS = {"s": "http://www.w3.org/2000/svg"}


def parse(svg):
    root = ET.fromstring(svg)
    wedges = root.findall("s:path[@class='wedge']", NS)
    arrow = root.find("s:line[@id='mean-vector']", NS)
    return root, wedges, arrow


def arrow_angle(arrow):
    x1, y1, x2, y2 = (float(arrow.get(k)) for k in ("x1", "y1", "x2", "y2"))
    return math.atan2(-(y2 - y1), x2 - x1)  # screen y points down


def bin_of(angle, bins):
    return int(np.floor((angle + np.pi) / (2 * np.pi / bins))) % bins


def test_uniform_counts_equal_radii():
    _, wedges, arrow = parse(emit_rose_svg(np.full(12, 5)))
    assert len(wedges) == 12
    assert len({w.get("data-radius") for w in wedges}) == 1
    assert arrow is None


def test_single_bin():
    counts = np.zeros(12, int)
    counts[4] = 7
    centre = -np.pi + 4.5 * 2 * np.pi / 12
    _, wedges, arrow = parse(emit_rose_svg(counts, centre, 1.0))
    assert [w.get("data-bin") for w in wedges] == ["4"]
    assert bin_of(arrow_angle(arrow), 12) == 4


def test_concentrated_sample_arrow_in_modal_bin():
    centre = -np.pi + 8.5 * 2 * np.pi / 12  # bin 8, away from its edges
    phases = np.random.default_rng(0).vonmises(centre, 8.0, 400)
    counts, _ = rose_histogram(phases, 12)
    mu, r = circular_mean(phases), resultant_length(phases)
    _, wedges, arrow = parse(emit_rose_svg(counts, mu, r))
    modal = int(np.argmax(counts))
    assert modal == 8
    assert bin_of(arrow_angle(arrow), 12) == modal
    assert float(arrow.get("data-length")) == pytest.approx(r)
    radii = {int(w.get("data-bin")): float(w.get("data-radius")) for w in wedges}
    assert max(radii, key=radii.get) == modal


def test_radius_proportional_to_count():
    counts = [1, 2, 0, 4, 0, 0, 0, 0]
    _, wedges, _ = parse(emit_rose_svg(counts))
    r = {int(w.get("data-bin")): float(w.get("data-radius")) for w in wedges}
    assert r[1] == pytest.approx(2 * r[0]) and r[3] == pytest.approx(4 * r[0])
    assert 2 not in r


def test_wedge_spans_its_bin():
    counts = np.zeros(8, int)
    counts[2] = 1
    svg = emit_rose_svg(counts, size=200)
    nums = [float(v) for v in re.search(r'd="M ([^"]+)"', svg).group(1).replace("L", "").replace("A", "").replace("Z", "").split()]
    cx, cy, x0, y0 = nums[:4]
    x1, y1 = nums[-2:]
    a0 = math.atan2(-(y0 - cy), x0 - cx)
    a1 = math.atan2(-(y1 - cy), x1 - cx)
    assert a0 == pytest.approx(-np.pi + 2 * np.pi / 8 * 2)
    assert a1 == pytest.approx(-np.pi + 2 * np.pi / 8 * 3)


def test_needs_four_bins():
    with pytest.raises(ValueError):
        emit_rose_svg([1, 2, 3])


def test_title_and_wellformed():
    root, _, _ = parse(emit_rose_svg(np.ones(6), title="circadian"))
    assert root.find("s:title", NS).text == "circadian"
