"""Image container, PGM/PPM/PNG readers, and phantom generator."""

import numpy as np
import pytest

from dtcwtfuse import (GrayImage, TruncatedPayloadError,
                       UnsupportedFormatError, generate_phantom_pair,
                       read_image, to_grayscale, write_image)
from dtcwtfuse.image_io import phantom_geometry


def test_gray_image_validation():
    img = GrayImage([[1, 2], [3, 4]])
    assert img.pixels.dtype == np.float64
    assert (img.height, img.width) == (2, 2)
    assert img.range_max == 255.0
    with pytest.raises(ValueError):
        GrayImage(np.zeros(4))
    with pytest.raises(ValueError):
        GrayImage([[0.0, np.nan]])
    with pytest.raises(ValueError):
        GrayImage([[0.0, np.inf]])
    with pytest.raises(ValueError):
        GrayImage([[1.0]], range_max=0.0)
    with pytest.raises(ValueError):
        GrayImage([[1.0]], range_max=-5.0)


def test_pgm_decode_2x2(tmp_path):
    path = tmp_path / "t.pgm"
    path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 128, 255, 64]))
    img = read_image(path)
    assert img.range_max == 255.0
    assert np.array_equal(img.pixels, [[0, 128], [255, 64]])


def test_pgm_header_comments(tmp_path):
    path = tmp_path / "c.pgm"
    path.write_bytes(b"P5\n# made by hand\n2 1\n# maxval next\n255\n"
                     + bytes([7, 9]))
    img = read_image(path)
    assert np.array_equal(img.pixels, [[7, 9]])


def test_pgm_16bit_big_endian(tmp_path):
    path = tmp_path / "w.pgm"
    path.write_bytes(b"P5\n2 1\n65535\n" + bytes([0x01, 0x02, 0x03, 0x04]))
    img = read_image(path)
    assert img.range_max == 65535.0
    assert np.array_equal(img.pixels, [[258, 772]])


def test_write_read_round_trip(tmp_path):
    # Clamp-and-round is the only quantisation; reading back must be exact.
    rng = np.random.default_rng(77)
    for k, shape in enumerate([(1, 1), (5, 3), (16, 16), (7, 31)]):
        px = rng.uniform(-20.0, 300.0, size=shape)
        path = tmp_path / ("r%d.pgm" % k)
        write_image(GrayImage(px), path)
        back = read_image(path)
        assert np.array_equal(back.pixels, np.rint(np.clip(px, 0.0, 255.0)))
        # a second pass over already-integer pixels is byte-stable
        write_image(back, path)
        again = read_image(path)
        assert np.array_equal(back.pixels, again.pixels)


def test_write_clamps_and_rounds(tmp_path):
    path = tmp_path / "c.pgm"
    write_image(GrayImage([[255.4, -3.0, 127.5]]), path)
    assert np.array_equal(read_image(path).pixels, [[255, 0, 128]])


def test_write_16bit_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    px = rng.uniform(0.0, 65535.0, size=(9, 4))
    path = tmp_path / "deep.pgm"
    write_image(GrayImage(px, 65535.0), path)
    back = read_image(path)
    assert back.range_max == 65535.0
    assert np.array_equal(back.pixels, np.rint(px))


def test_truncated_payload(tmp_path):
    path = tmp_path / "short.pgm"
    path.write_bytes(b"P5\n2 2\n255\n" + bytes([1, 2, 3]))
    with pytest.raises(TruncatedPayloadError):
        read_image(path)


def test_truncated_header(tmp_path):
    path = tmp_path / "h.pgm"
    path.write_bytes(b"P5\n2")
    with pytest.raises(TruncatedPayloadError):
        read_image(path)
    path.write_bytes(b"P5\n1 1\n255")  # header complete, no payload byte
    with pytest.raises(TruncatedPayloadError):
        read_image(path)


def test_unsupported_formats(tmp_path):
    path = tmp_path / "x.bin"
    path.write_bytes(b"P7\nwhatever")
    with pytest.raises(UnsupportedFormatError):
        read_image(path)
    path.write_bytes(b"GIF89a....")
    with pytest.raises(UnsupportedFormatError):
        read_image(path)
    path.write_bytes(b"P5\nab 2\n255\n\x00\x00")
    with pytest.raises(UnsupportedFormatError):
        read_image(path)
    path.write_bytes(b"P5\n1 1\n0\n\x00")
    with pytest.raises(UnsupportedFormatError):
        read_image(path)
    path.write_bytes(b"P5\n1 1\n70000\n\x00\x00")
    with pytest.raises(UnsupportedFormatError):
        read_image(path)


def test_missing_file_is_oserror(tmp_path):
    with pytest.raises(OSError):
        read_image(tmp_path / "nope.pgm")


def test_ppm_luma_conversion(tmp_path):
    path = tmp_path / "rgb.ppm"
    path.write_bytes(b"P6\n2 1\n255\n" + bytes([255, 0, 0, 0, 255, 0]))
    img = read_image(path)
    # BT.601: 0.299*255 = 76.245 -> 76, 0.587*255 = 149.685 -> 150
    assert np.array_equal(img.pixels, [[76, 150]])
    assert img.range_max == 255.0


def test_png_reading(tmp_path):
    PIL = pytest.importorskip("PIL.Image")
    rng = np.random.default_rng(5)
    gray = rng.integers(0, 256, size=(6, 8)).astype(np.uint8)
    p1 = tmp_path / "g.png"
    PIL.fromarray(gray, mode="L").save(p1)
    img = read_image(p1)
    assert img.range_max == 255.0
    assert np.array_equal(img.pixels, gray)

    rgb = rng.integers(0, 256, size=(4, 4, 3)).astype(np.uint8)
    p2 = tmp_path / "c.png"
    PIL.fromarray(rgb, mode="RGB").save(p2)
    img = read_image(p2)
    want = np.rint(0.299 * rgb[:, :, 0] + 0.587 * rgb[:, :, 1]
                   + 0.114 * rgb[:, :, 2])
    assert np.array_equal(img.pixels, want)

    p3 = tmp_path / "p.png"
    PIL.fromarray(gray, mode="L").convert("P").save(p3)
    with pytest.raises(UnsupportedFormatError):
        read_image(p3)


def test_to_grayscale():
    img = to_grayscale([[255.0]], [[255.0]], [[255.0]])
    assert abs(img.pixels[0, 0] - 255.0) < 1e-9
    img = to_grayscale([[0.0]], [[0.0]], [[0.0]])
    assert img.pixels[0, 0] == 0.0
    img = to_grayscale([[0.0]], [[255.0]], [[0.0]])
    assert abs(img.pixels[0, 0] - 149.685) < 1e-12
    with pytest.raises(ValueError):
        to_grayscale(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))
    rng = np.random.default_rng(1)
    r, g, b = rng.uniform(0, 255, (3, 10, 10))
    out = to_grayscale(r, g, b).pixels
    assert out.min() >= 0.0 and out.max() <= 255.0


def test_phantom_determinism_and_shape():
    a1, b1 = generate_phantom_pair(64, 7)
    a2, b2 = generate_phantom_pair(64, 7)
    assert np.array_equal(a1.pixels, a2.pixels)
    assert np.array_equal(b1.pixels, b2.pixels)
    for img in (a1, b1):
        assert img.pixels.shape == (64, 64)
        assert img.range_max == 255.0
        assert img.pixels.min() >= 0.0 and img.pixels.max() <= 255.0
    # different seeds produce different pairs
    a3, _ = generate_phantom_pair(64, 8)
    assert not np.array_equal(a1.pixels, a3.pixels)


def test_phantom_size_validation():
    with pytest.raises(ValueError):
        generate_phantom_pair(24, 0)
    with pytest.raises(ValueError):
        generate_phantom_pair(50, 0)
    generate_phantom_pair(40, 0)  # smallest interesting multiple of 8


def test_phantom_ring_contrast():
    ct, mr = generate_phantom_pair(128, 1)
    _, _, ring, interior = phantom_geometry(128)
    assert ct.pixels[ring].std() > ct.pixels[interior].std()
    # complementary intensity layout: bone bright in CT, dark in MR,
    # parenchyma the other way round
    assert ct.pixels[ring].mean() > 120.0
    assert mr.pixels[ring].mean() < 30.0
    assert mr.pixels[interior].mean() > 100.0
    assert ct.pixels[interior].mean() < 40.0
