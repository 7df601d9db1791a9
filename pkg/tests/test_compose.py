import numpy as np
import pytest

from attention_mosaic.compose import (PanelLayout, compose_panels, parse_panel,
                                      parse_panel_list)
from conftest import rand_image


def test_single_panel_identity(rng):
    img = rand_image(rng, 4, 4)
    out = compose_panels([img], PanelLayout(panels=("original",), gutter_px=2))
    assert np.array_equal(out, img)


def test_two_panels_gutter_columns(rng):
    a = rand_image(rng, 4, 4)
    b = rand_image(rng, 4, 4)
    layout = PanelLayout(panels=("original", "machine"), gutter_px=2,
                         background=(7, 8, 9))
    out = compose_panels([a, b], layout)
    assert out.shape == (4, 10, 3)
    assert np.array_equal(out[:, :4], a)
    assert np.all(out[:, 4:6] == [7, 8, 9])
    assert np.array_equal(out[:, 6:], b)


def test_three_panels_no_gutter_offsets(rng):
    panels = [rand_image(rng, 4, 4) for _ in range(3)]
    layout = PanelLayout(panels=("original", "machine", "human"), gutter_px=0)
    out = compose_panels(panels, layout)
    assert out.shape == (4, 12, 3)
    assert np.array_equal(out[:, 5], panels[1][:, 1])


def test_different_widths_allowed(rng):
    a = rand_image(rng, 3, 4)
    b = rand_image(rng, 7, 4)
    layout = PanelLayout(panels=("original", "machine"), gutter_px=1)
    assert compose_panels([a, b], layout).shape == (4, 11, 3)


def test_height_mismatch_rejected(rng):
    layout = PanelLayout(panels=("original", "machine"), gutter_px=0)
    with pytest.raises(ValueError):
        compose_panels([rand_image(rng, 4, 4), rand_image(rng, 4, 5)], layout)


def test_empty_rejected():
    with pytest.raises(ValueError):
        compose_panels([], PanelLayout(panels=(), gutter_px=0))


def test_count_mismatch_rejected(rng):
    with pytest.raises(ValueError):
        compose_panels([rand_image(rng, 4, 4)],
                       PanelLayout(panels=("original", "human"), gutter_px=0))


def test_parse_panel_list():
    assert parse_panel_list("original, machine,human") == ("original", "machine", "human")
    assert parse_panel("file:/tmp/x.png") == "file:/tmp/x.png"
    with pytest.raises(ValueError):
        parse_panel("bogus")
    with pytest.raises(ValueError):
        parse_panel_list(",,")
