import json

import numpy as np
import pytest

from attention_mosaic.cli import main, parse_hex_color
from attention_mosaic.errors import FormatError
from attention_mosaic.image_io import load_gray_png, load_image, save_image
from attention_mosaic.pipeline import (HumanSpec, LayoutSpec, MachineSpec,
                                       PipelineConfig, run_pipeline)
from conftest import rand_image


@pytest.fixture
def stimulus(tmp_path, rng):
    img = rand_image(rng, 48, 48)
    p = tmp_path / "img.png"
    save_image(img, p)
    fix = tmp_path / "fix.csv"
    fix.write_text("x,y,t_ms,weight\n12.0,12.0,0,1.0\n36.0,30.0,80,2.0\n")
    return img, p, fix


def test_parse_hex_color():
    assert parse_hex_color("FF8000") == (255, 128, 0)
    assert parse_hex_color("#102030") == (16, 32, 48)
    with pytest.raises(FormatError):
        parse_hex_color("XYZ")


def test_saliency_subcommand(stimulus, tmp_path):
    _, img_path, _ = stimulus
    out = tmp_path / "map.png"
    code = main(["saliency", "--in", str(img_path), "--method", "sobel",
                 "--out", str(out)])
    assert code == 0
    assert load_gray_png(out).shape == (48, 48)


def test_fixmap_subcommand(stimulus, tmp_path):
    _, img_path, fix_path = stimulus
    out = tmp_path / "fixmap.png"
    code = main(["fixmap", "--fixations", str(fix_path), "--in", str(img_path),
                 "--sigma", "3", "--out", str(out)])
    assert code == 0
    assert load_gray_png(out).max() == 65535


def test_full_shell_pipeline_matches_run(stimulus, tmp_path):
    """saliency | sample | tessellate reproduces the run pipeline byte-exactly."""
    img, img_path, fix_path = stimulus
    map_png = tmp_path / "m.png"
    sites_csv = tmp_path / "s.csv"
    mosaic_png = tmp_path / "mosaic.png"
    assert main(["saliency", "--in", str(img_path), "--method", "sobel",
                 "--out", str(map_png)]) == 0
    assert main(["sample", "--saliency-file", str(map_png), "--sites", "100",
                 "--seed", "3", "--out", str(sites_csv)]) == 0
    assert main(["tessellate", "--in", str(img_path), "--sites-file", str(sites_csv),
                 "--border", "1", "--out", str(mosaic_png)]) == 0

    cfg = PipelineConfig(input=str(img_path), output=str(tmp_path / "run.png"),
                         machine=MachineSpec(method="sobel"), sites=100, seed=3,
                         layout=LayoutSpec(panels=("machine",), gutter_px=0))
    run_pipeline(cfg)
    assert (tmp_path / "run.png").read_bytes() == mosaic_png.read_bytes()


def test_compose_subcommand(stimulus, tmp_path):
    img, img_path, _ = stimulus
    out = tmp_path / "double.png"
    code = main(["compose", "--panels", f"file:{img_path},file:{img_path}",
                 "--gutter", "3", "--background", "000000", "--out", str(out)])
    assert code == 0
    got = load_image(out)
    assert got.shape == (48, 99, 3)
    assert np.all(got[:, 48:51] == 0)


def test_run_subcommand_and_exit_codes(stimulus, tmp_path, capsys):
    img, img_path, fix_path = stimulus
    out = tmp_path / "trip.png"
    code = main(["run", "--in", str(img_path), "--out", str(out),
                 "--method", "sobel", "--fixations", str(fix_path),
                 "--sites", "120", "--seed", "1", "--gutter", "2",
                 "--panels", "original,machine,human"])
    assert code == 0
    assert load_image(out).shape == (48, 48 * 3 + 4, 3)
    assert (tmp_path / "trip.png.manifest.json").exists()

    # validation error -> 1 (bad flag choice)
    assert main(["run", "--in", str(img_path), "--out", str(out),
                 "--method", "bogus"]) == 1
    # missing input file -> 2 (I/O)
    assert main(["run", "--in", str(tmp_path / "ghost.png"), "--out", str(out),
                 "--method", "sobel", "--panels", "machine"]) == 2
    # missing fixation file surfaces as I/O with stage name
    code = main(["run", "--in", str(img_path), "--out", str(out),
                 "--method", "sobel", "--fixations", str(tmp_path / "ghost.csv"),
                 "--panels", "human"])
    err = capsys.readouterr().err
    assert code == 2
    assert "human-saliency" in err


def test_print_config(stimulus, tmp_path, capsys):
    img, img_path, fix_path = stimulus
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"sites": 777, "machine": {"method": "sobel"}}))
    code = main(["run", "--config", str(cfg_path), "--in", str(img_path),
                 "--out", "x.png", "--seed", "9", "--print-config"])
    assert code == 0
    data = json.loads(capsys.readouterr().out)
    assert data["sites"] == 777
    assert data["seed"] == 9
    assert data["machine"]["method"] == "sobel"
    assert data["input"] == str(img_path)
    # nothing executed
    assert not (tmp_path / "x.png").exists()


def test_missing_required_flag_is_validation_error(capsys):
    assert main(["saliency", "--out", "x.png"]) == 1
    assert "required" in capsys.readouterr().err


def test_unknown_subcommand_is_validation_error():
    assert main(["frobnicate"]) == 1


def test_sample_rejects_bad_map(tmp_path, stimulus):
    img, img_path, _ = stimulus
    # RGB png is not a gray map -> validation error
    assert main(["sample", "--saliency-file", str(img_path), "--sites", "10",
                 "--seed", "0", "--out", str(tmp_path / "s.csv")]) == 1


def test_tessellate_labels_out(stimulus, tmp_path):
    img, img_path, _ = stimulus
    sites_csv = tmp_path / "s.csv"
    sites_csv.write_text("i,x,y\n0,10.5,10.5\n1,30.5,30.5\n")
    labels_png = tmp_path / "labels.png"
    assert main(["tessellate", "--in", str(img_path), "--sites-file", str(sites_csv),
                 "--labels-out", str(labels_png), "--out", str(tmp_path / "m.png")]) == 0
    labels = load_gray_png(labels_png)
    assert set(np.unique(labels)) == {0, 1}
