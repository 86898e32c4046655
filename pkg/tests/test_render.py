import pytest

from errors import InputError
from geometry import deoscillate, h_set, truncated_cells
from groundstate import hexagon_config
from lattice import embed
from render import scene, write_svg
from surface import wulff_set


def test_scene_layers_in_painting_order():
    cfg = hexagon_config(1)
    h = h_set(cfg)
    svg = scene([("cells", truncated_cells(cfg)), ("hn", h), ("hnprime", deoscillate(h)),
                 ("sites", embed(cfg.sites))], version="9.9")
    assert svg.startswith('<?xml')
    assert "hexcluster 9.9" in svg
    assert svg.index('id="cells"') < svg.index('id="hn"') < svg.index('id="hnprime"')


def test_empty_scene():
    assert "<svg" in scene([])


def test_write_svg(tmp_path):
    path = tmp_path / "w.svg"
    write_svg(str(path), [("wulff", wulff_set())])
    assert 'id="wulff"' in path.read_text()
    with pytest.raises(InputError):
        write_svg(str(tmp_path / "no" / "w.svg"), [])
