"""Grayscale image container, bit-exact PGM/PNG I/O, and phantom synthesis.

The pipeline works on real-valued pixel grids; quantisation to integer
intensities happens only when an image is written to disk.  Binary PGM
(P5) is the canonical interchange format because it round-trips exactly.
P6 colour images and 8-bit PNG files can be read for convenience and are
converted to luminance on load.
"""

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter


class UnsupportedFormatError(ValueError):
    """File magic or pixel layout is not one of the supported formats."""


class TruncatedPayloadError(ValueError):
    """Header-declared pixel payload is longer than the file contents."""


# BT.601 luma weights used for all colour to grayscale conversion.
_LUMA_R, _LUMA_G, _LUMA_B = 0.299, 0.587, 0.114


@dataclass(eq=False)
class GrayImage:
    """A 2-D grid of real-valued intensities with a nominal range.

    Parameters
    ----------
    pixels : ndarray
        2-D float array of intensities, row-major.
    range_max : float
        Nominal top of the intensity scale (the ``L`` of the quality
        metrics), 255 for 8-bit data.  Pixel values may drift outside
        ``[0, range_max]`` during processing; they are clamped on write.
    """

    pixels: np.ndarray
    range_max: float = 255.0

    def __post_init__(self):
        self.pixels = np.asarray(self.pixels, dtype=np.float64)
        if self.pixels.ndim != 2:
            raise ValueError("pixels must be a 2-D array")
        if not np.all(np.isfinite(self.pixels)):
            raise ValueError("pixels must be finite")
        if not (self.range_max > 0):
            raise ValueError("range_max must be positive")

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def width(self):
        return self.pixels.shape[1]


def _tokenize_pnm_header(data, count):
    """Read `count` whitespace-separated integer tokens after the magic,
    skipping '#' comment lines, and return (tokens, payload_offset)."""
    tokens = []
    i = 2  # past the 2-byte magic
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i:i + 1].isspace():
            i += 1
        if i < n and data[i:i + 1] == b"#":
            while i < n and data[i] != 0x0A:
                i += 1
            continue
        start = i
        while i < n and not data[i:i + 1].isspace():
            i += 1
        if start == i:
            raise TruncatedPayloadError("PNM header ended before all fields")
        try:
            tokens.append(int(data[start:i]))
        except ValueError:
            raise UnsupportedFormatError(
                "malformed PNM header token %r" % data[start:i])
    # exactly one whitespace byte separates the header from the payload
    if i >= n:
        raise TruncatedPayloadError("PNM file has no pixel payload")
    i += 1
    return tokens, i


def _decode_samples(payload, count, maxval, what):
    """Decode `count` PNM samples of width implied by maxval from payload."""
    if not 0 < maxval < 65536:
        raise UnsupportedFormatError("PNM maxval %d out of range" % maxval)
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    nbytes = count * dtype.itemsize
    if len(payload) < nbytes:
        raise TruncatedPayloadError(
            "%s payload truncated: expected %d bytes, found %d"
            % (what, nbytes, len(payload)))
    return np.frombuffer(payload[:nbytes], dtype=dtype).astype(np.float64)


def read_image(path):
    """Load a grayscale image from a PGM (P5), PPM (P6) or PNG file.

    P5 data is returned verbatim.  P6 and RGB PNG data are reduced to
    luminance with the BT.601 weights and rounded to the nearest integer
    intensity.  ``range_max`` is set from the sample width: 255 for one
    byte per sample, 65535 for two.

    Parameters
    ----------
    path : str or path-like
        File to read.

    Returns
    -------
    GrayImage

    Raises
    ------
    OSError
        Unreadable file.
    UnsupportedFormatError
        Unknown magic or an unsupported pixel layout.
    TruncatedPayloadError
        Header promises more samples than the file delivers.
    """
    with open(path, "rb") as fh:
        data = fh.read()

    magic = data[:2]
    if magic == b"P5":
        (width, height, maxval), off = _tokenize_pnm_header(data, 3)
        flat = _decode_samples(data[off:], width * height, maxval, "PGM")
        range_max = 65535.0 if maxval > 255 else 255.0
        return GrayImage(flat.reshape(height, width), range_max)

    if magic == b"P6":
        (width, height, maxval), off = _tokenize_pnm_header(data, 3)
        flat = _decode_samples(data[off:], 3 * width * height, maxval, "PPM")
        rgb = flat.reshape(height, width, 3)
        range_max = 65535.0 if maxval > 255 else 255.0
        gray = to_grayscale(rgb[:, :, 0], rgb[:, :, 1], rgb[:, :, 2],
                            range_max=range_max)
        return GrayImage(np.rint(gray.pixels), range_max)

    if magic == b"\x89P":
        from PIL import Image

        with Image.open(path) as im:
            if im.mode == "L":
                return GrayImage(np.asarray(im, dtype=np.float64), 255.0)
            if im.mode == "RGB":
                arr = np.asarray(im, dtype=np.float64)
                gray = to_grayscale(arr[:, :, 0], arr[:, :, 1], arr[:, :, 2])
                return GrayImage(np.rint(gray.pixels), 255.0)
            raise UnsupportedFormatError(
                "PNG mode %r not supported (only L and RGB)" % im.mode)

    raise UnsupportedFormatError("unrecognised image magic %r" % magic)


def write_image(img, path):
    """Write an image as binary PGM, clamping and rounding the pixels.

    Values are clamped to ``[0, range_max]`` and rounded to the nearest
    integer.  One byte per sample is used when the rounded range fits in
    255, otherwise two big-endian bytes.  Reading the file back yields
    exactly the clamped-rounded pixels.

    Parameters
    ----------
    img : GrayImage
    path : str or path-like
    """
    maxval = int(round(img.range_max))
    if not 1 <= maxval <= 65535:
        raise ValueError("range_max %r not representable in PGM" % img.range_max)
    q = np.rint(np.clip(img.pixels, 0.0, img.range_max))
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    header = ("P5\n%d %d\n%d\n" % (img.width, img.height, maxval)).encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(q.astype(dtype).tobytes())


def to_grayscale(r, g, b, range_max=255.0):
    """Combine colour channels into a luminance image (BT.601 weights).

    Parameters
    ----------
    r, g, b : array_like
        Channels of identical shape.
    range_max : float, optional
        Intensity range of the source channels.

    Returns
    -------
    GrayImage
        Pixels equal to ``0.299 R + 0.587 G + 0.114 B``, unrounded.
    """
    r = np.asarray(r, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if not (r.shape == g.shape == b.shape):
        raise ValueError("channel shapes differ: %s %s %s"
                         % (r.shape, g.shape, b.shape))
    return GrayImage(_LUMA_R * r + _LUMA_G * g + _LUMA_B * b, range_max)


# ----------------------------------------------------------------------
# Synthetic phantom pair
# ----------------------------------------------------------------------

def phantom_geometry(size):
    """Radial coordinate grid and ring/interior masks shared by the pair.

    Returns (radius, angle, ring_mask, interior_mask) for a centred
    annulus whose mid-radius is 0.44 of the image side.  The ring is
    kept thin, as a skull cross-section would be at this scale.
    """
    c = (size - 1) / 2.0
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    radius = np.hypot(yy - c, xx - c)
    angle = np.arctan2(yy - c, xx - c)
    r_ring = 0.44 * size
    half_w = 0.012 * size
    ring = np.abs(radius - r_ring) <= half_w
    interior = radius < (r_ring - half_w)
    return radius, angle, ring, interior


def generate_phantom_pair(size, seed):
    """Synthesise a co-registered CT-like / MR-like grayscale pair.

    The first image mimics a CT slice: a thin bright bone ring with
    angular density modulation around a dark, nearly featureless
    interior.  The second mimics an MR slice: the skull is a dark band
    while the parenchyma is bright, carrying smooth hyper- and
    hypo-intense blobs plus mild texture.  The two are complementary on
    purpose, each holding structure the other lacks, and both are
    deterministic in ``(size, seed)``.

    Parameters
    ----------
    size : int
        Side length; at least 32 and divisible by 8 so the pair can be
        decomposed to the depths used elsewhere.
    seed : int
        Seed for the pseudorandom structure.

    Returns
    -------
    (GrayImage, GrayImage)
        The CT-like and MR-like images, both with ``range_max`` 255.
    """
    if size < 32:
        raise ValueError("phantom size must be at least 32, got %d" % size)
    if size % 8 != 0:
        raise ValueError("phantom size must be divisible by 8, got %d" % size)

    rng = np.random.default_rng(seed)
    radius, angle, ring, interior = phantom_geometry(size)
    r_ring = 0.44 * size

    # CT-like: bone ring with strong angular modulation plus grain.
    phase = rng.uniform(0.0, 2.0 * np.pi)
    grain = gaussian_filter(rng.standard_normal((size, size)), 1.2)
    ct = np.full((size, size), 6.0)
    ct[ring] = (190.0 + 20.0 * np.sin(5.0 * angle[ring] + phase)
                + 10.0 * grain[ring])
    haze = gaussian_filter(rng.standard_normal((size, size)), 0.06 * size)
    ct[interior] = 18.0 + 4.0 * haze[interior]

    # MR-like: dark bone band, bright parenchyma with bipolar blobs.
    # Alternating blob signs keep the interior mean stable across seeds.
    mr = np.full((size, size), 4.0)
    mr[ring] = 8.0
    blobs = np.zeros((size, size))
    c = (size - 1) / 2.0
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    for k in range(8):
        rho = rng.uniform(0.0, 0.55) * r_ring
        th = rng.uniform(0.0, 2.0 * np.pi)
        by, bx = c + rho * np.sin(th), c + rho * np.cos(th)
        amp = rng.uniform(80.0, 150.0) * (1.0 if k % 2 == 0 else -1.0)
        sigma = rng.uniform(0.05, 0.11) * size
        blobs += amp * np.exp(-((yy - by) ** 2 + (xx - bx) ** 2)
                              / (2.0 * sigma ** 2))
    texture = gaussian_filter(rng.standard_normal((size, size)), 1.0)
    mr[interior] = 170.0 + blobs[interior] + 7.0 * texture[interior]

    ct_img = GrayImage(np.clip(ct, 0.0, 255.0), 255.0)
    mr_img = GrayImage(np.clip(mr, 0.0, 255.0), 255.0)
    return ct_img, mr_img
