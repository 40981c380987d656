"""Quality indices for fused images: EN, SD, SSIM, CC, PSNR.

Entropy and standard deviation are no-reference measures of the fused
image alone; the other three compare against a reference.  All use
global whole-image statistics.  The SSIM here is the single-window
variant with a plain sigma_r * sigma_f contrast term rather than the
covariance of the windowed original, so it scores luminance and
contrast agreement, not structure alignment; this matches how the index
is usually reported for whole-image fusion comparisons.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["MetricsReport", "entropy", "std_dev", "ssim",
           "cross_correlation", "psnr", "evaluate"]

CSV_HEADER = "en,sd,ssim,cc,psnr"


def _fmt(value):
    return "inf" if math.isinf(value) else repr(float(value))


@dataclass
class MetricsReport:
    """The five quality indices for one (reference, fused) pair."""

    en: float
    sd: float
    ssim: float
    cc: float
    psnr: float

    def to_dict(self):
        """Plain dict in canonical field order; +inf PSNR becomes "inf"."""
        d = {"en": self.en, "sd": self.sd, "ssim": self.ssim, "cc": self.cc}
        d["psnr"] = "inf" if math.isinf(self.psnr) else self.psnr
        return d

    def to_json(self):
        return json.dumps(self.to_dict())

    def to_csv(self):
        """Two lines: the ``en,sd,ssim,cc,psnr`` header and the values."""
        values = [self.en, self.sd, self.ssim, self.cc, self.psnr]
        return CSV_HEADER + "\n" + ",".join(_fmt(v) for v in values)


def _histogram(img):
    """Normalised histogram over integer intensity bins 0..range_max."""
    nbins = int(round(img.range_max)) + 1
    q = np.clip(np.rint(img.pixels), 0, nbins - 1).astype(np.int64)
    counts = np.bincount(q.ravel(), minlength=nbins)
    return counts / q.size


def _check_pair(ref, fused, need_range=True):
    if ref.pixels.shape != fused.pixels.shape:
        raise ValueError("images differ in size: %s vs %s"
                         % (ref.pixels.shape, fused.pixels.shape))
    if need_range and ref.range_max != fused.range_max:
        raise ValueError("images differ in range_max: %r vs %r"
                         % (ref.range_max, fused.range_max))


def entropy(img):
    """Shannon entropy of the intensity histogram, in bits.

    Pixels are rounded to the nearest integer bin in [0, range_max];
    empty bins contribute nothing.  A constant image scores 0; a
    uniform histogram scores log2 of the bin count.
    """
    p = _histogram(img)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def std_dev(img):
    """Population standard deviation of the quantised intensity histogram.

    Computed from the same histogram as :func:`entropy`, so it measures
    the spread of displayed intensities:
    ``sqrt(sum_i (i - mean)^2 p_i)`` with bin index i.
    """
    p = _histogram(img)
    i = np.arange(p.size)
    mean = float(i @ p)
    return float(np.sqrt((i - mean) ** 2 @ p))


def ssim(ref, fused):
    """Global structural similarity of a (reference, fused) pair.

    Single-window form over whole-image statistics:

        SSIM = (2 mu_r mu_f + C1)(2 sigma_r sigma_f + C2)
               / ((mu_r^2 + mu_f^2 + C1)(sigma_r^2 + sigma_f^2 + C2))

    with C1 = (0.01 L)^2, C2 = (0.03 L)^2, population sigmas, and
    L = range_max.  Equal images score exactly 1; the AM-GM inequality
    bounds the result by 1.
    """
    _check_pair(ref, fused)
    L = ref.range_max
    c1 = (0.01 * L) ** 2
    c2 = (0.03 * L) ** 2
    mu_r = ref.pixels.mean()
    mu_f = fused.pixels.mean()
    sig_r = ref.pixels.std()
    sig_f = fused.pixels.std()
    return float((2 * mu_r * mu_f + c1) * (2 * sig_r * sig_f + c2)
                 / ((mu_r ** 2 + mu_f ** 2 + c1)
                    * (sig_r ** 2 + sig_f ** 2 + c2)))


def cross_correlation(ref, fused):
    """Spectral-fidelity correlation ``2 sum(r f) / (sum r^2 + sum f^2)``.

    Equals 1 when the images are identical and is undefined when both
    are all zero, which is reported as an error.
    """
    _check_pair(ref, fused, need_range=False)
    num = 2.0 * float(np.sum(ref.pixels * fused.pixels))
    den = float(np.sum(ref.pixels ** 2) + np.sum(fused.pixels ** 2))
    if den == 0.0:
        raise ValueError("cross correlation undefined: both images all zero")
    return num / den


def psnr(ref, fused):
    """Peak signal-to-noise ratio ``10 log10(L^2 / MSE)`` in decibels.

    Identical images return ``float('inf')``, serialised as the string
    "inf" by the report formatters.
    """
    _check_pair(ref, fused)
    mse = float(np.mean((ref.pixels - fused.pixels) ** 2))
    if mse == 0.0:
        return float("inf")
    return float(10.0 * np.log10(ref.range_max ** 2 / mse))


def evaluate(ref, fused):
    """All five indices for a pair; EN and SD describe the fused image only.

    Parameters
    ----------
    ref, fused : GrayImage
        Same dimensions and range_max.

    Returns
    -------
    MetricsReport
    """
    return MetricsReport(en=entropy(fused),
                         sd=std_dev(fused),
                         ssim=ssim(ref, fused),
                         cc=cross_correlation(ref, fused),
                         psnr=psnr(ref, fused))
