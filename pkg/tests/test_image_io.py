import struct
import zlib

import numpy as np
import pytest
from PIL import Image

from attention_mosaic.errors import FormatError
from attention_mosaic.image_io import (GRAY_MAX, gray_map_to_u16, load_gray_png,
                                       load_image, luminance, save_gray_map,
                                       save_image)
from conftest import rand_image


def _chunk(tag, data):
    c = struct.pack(">I", len(data)) + tag + data
    return c + struct.pack(">I", zlib.crc32(tag + data) & 0xFFFFFFFF)


def png_bytes_16bit(pixels, color_type):
    """Hand-built 16-bit PNG; color_type 0 = gray, 2 = RGB."""
    h, w = pixels.shape[:2]
    sig = b"\x89PNG\r\n\x1a\n"
    ihdr = _chunk(b"IHDR", struct.pack(">IIBBBBB", w, h, 16, color_type, 0, 0, 0))
    be = pixels.astype(">u2")
    raw = b"".join(b"\x00" + be[y].tobytes() for y in range(h))
    return sig + ihdr + _chunk(b"IDAT", zlib.compress(raw)) + _chunk(b"IEND", b"")


class TestLoadImage:
    def test_ppm_1x1_red(self, tmp_path):
        p = tmp_path / "red.ppm"
        p.write_bytes(b"P6\n1 1\n255\n\xff\x00\x00")
        img = load_image(p)
        assert img.shape == (1, 1, 3)
        assert tuple(img[0, 0]) == (255, 0, 0)

    def test_truncated_png_is_format_error(self, tmp_path):
        p = tmp_path / "broken.png"
        good = png_bytes_16bit(np.zeros((4, 4), np.uint16), 0)
        p.write_bytes(good[:30])
        with pytest.raises(FormatError):
            load_image(p)

    def test_missing_file_is_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_image(tmp_path / "nope.png")

    def test_unsupported_format_rejected(self, tmp_path):
        p = tmp_path / "img.jpg"
        Image.fromarray(np.zeros((4, 4, 3), np.uint8)).save(p, format="JPEG")
        with pytest.raises(FormatError):
            load_image(p)

    def test_16bit_rgb_high_byte(self, tmp_path):
        px = np.array([[[0x1234, 0xFF00, 0x00FF], [0xABCD, 0x8081, 0x7FFF]]], np.uint16)
        p = tmp_path / "deep.png"
        p.write_bytes(png_bytes_16bit(px, 2))
        img = load_image(p)
        assert np.array_equal(img, px >> 8)

    def test_16bit_gray_high_byte(self, tmp_path):
        g = np.array([[0x1234, 0xFF00], [0x00FF, 0xABCD]], np.uint16)
        p = tmp_path / "gray16.png"
        p.write_bytes(png_bytes_16bit(g, 0))
        img = load_image(p)
        expect = np.repeat((g >> 8).astype(np.uint8)[:, :, None], 3, axis=2)
        assert np.array_equal(img, expect)

    def test_alpha_composited_over_white(self, tmp_path):
        rgba = np.array([[[10, 20, 30, 0], [10, 20, 30, 255], [100, 0, 0, 128]]], np.uint8)
        p = tmp_path / "a.png"
        Image.fromarray(rgba, "RGBA").save(p)
        img = load_image(p)
        assert tuple(img[0, 0]) == (255, 255, 255)
        assert tuple(img[0, 1]) == (10, 20, 30)
        # round((100*128 + 255*127)/255) etc., computed independently
        expect = tuple(round((c * 128 + 255 * 127) / 255) for c in (100, 0, 0))
        assert tuple(img[0, 2]) == expect

    def test_zero_dimension_rejected(self, tmp_path):
        p = tmp_path / "zero.ppm"
        p.write_bytes(b"P6\n0 0\n255\n")
        with pytest.raises(FormatError):
            load_image(p)


class TestSaveImage:
    def test_1x1_black_is_valid_png(self, tmp_path):
        p = tmp_path / "out.png"
        save_image(np.zeros((1, 1, 3), np.uint8), p)
        with Image.open(p) as img:
            assert img.format == "PNG" and img.size == (1, 1)

    def test_round_trip_bit_exact(self, rng, tmp_path):
        for size in (32, 64):
            img = rand_image(rng, size, size)
            p = tmp_path / f"rt{size}.png"
            save_image(img, p)
            assert np.array_equal(load_image(p), img)

    def test_unwritable_path_is_oserror(self, tmp_path, rng):
        with pytest.raises(OSError):
            save_image(rand_image(rng, 4, 4), tmp_path / "no" / "dir" / "x.png")


class TestLuminance:
    def test_reference_values(self):
        img = np.array([[[255, 255, 255], [0, 0, 0], [255, 0, 0]]], np.uint8)
        lum = luminance(img)
        assert lum[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert lum[0, 1] == 0.0
        # direct formula evaluation: 0.2126 * (255/255)
        assert lum[0, 2] == pytest.approx(0.2126 * (255 / 255), abs=1e-12)

    def test_shape_and_bounds(self, rng):
        img = rand_image(rng, 17, 9)
        lum = luminance(img)
        assert lum.shape == (9, 17)
        assert lum.min() >= 0.0 and lum.max() <= 1.0


class TestGrayMapIO:
    def test_quantization_maps_max_to_65535(self):
        g = np.array([[0.0, 1.0], [2.0, 4.0]])
        u16 = gray_map_to_u16(g)
        assert u16[1, 1] == GRAY_MAX
        assert u16[0, 0] == 0
        assert u16[0, 1] == round(GRAY_MAX / 4)

    def test_all_zero_serializes_to_zero(self, tmp_path):
        p = tmp_path / "z.png"
        save_gray_map(np.zeros((3, 5)), p)
        assert np.array_equal(load_gray_png(p), np.zeros((3, 5)))

    def test_save_load_round_trips_quantized_values(self, rng, tmp_path):
        g = rng.random((12, 7)) * 3.7
        p = tmp_path / "g.png"
        save_gray_map(g, p)
        assert np.array_equal(load_gray_png(p), gray_map_to_u16(g).astype(np.float64))

    def test_8bit_gray_loads(self, tmp_path):
        p = tmp_path / "g8.png"
        Image.fromarray(np.full((2, 2), 128, np.uint8), "L").save(p)
        assert np.array_equal(load_gray_png(p), np.full((2, 2), 128.0))

    def test_rgb_png_rejected(self, tmp_path, rng):
        p = tmp_path / "rgb.png"
        save_image(rand_image(rng, 4, 4), p)
        with pytest.raises(FormatError):
            load_gray_png(p)
