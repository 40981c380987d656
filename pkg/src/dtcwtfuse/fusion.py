"""Rule-based merging of DTCWT pyramids and the end-to-end pipeline.

Fusion happens coefficient by coefficient: the four lowpass arrays are
treated as one logical low-frequency set merged with the LFC rule, and
every oriented subband is merged with the HFC rule.  When a weighting
method is active, each coefficient set is scaled by its own PCA or PSO
weight pair first; rules are applied to the weighted coefficients.
"""

from dataclasses import dataclass

import numpy as np

from .feature_select import (PsoConfig, apply_weights, pca_weights,
                             pso_fusion_weights, subband_seed)
from .image_io import GrayImage
from .transform import DtcwtPyramid, dtcwt_forward, dtcwt_inverse

__all__ = ["FusionSpec", "fuse_rule", "fuse_pyramids", "fuse_pipeline",
           "METHODS", "RULES"]

METHODS = ("none", "pca", "pso")
RULES = ("avg", "max", "min")


@dataclass
class FusionSpec:
    """What to do to a pair of pyramids.

    ``method`` selects the weighting route (``none`` skips weighting),
    ``lfc_rule`` merges the lowpass set and ``hfc_rule`` the oriented
    subbands, each one of ``avg``, ``max``, ``min``.  ``seed`` feeds the
    per-subband swarms when the method is ``pso``; ``pso`` carries their
    hyperparameters (``None`` means defaults).
    """

    method: str = "pca"
    lfc_rule: str = "avg"
    hfc_rule: str = "max"
    levels: int = 2
    seed: int = 0
    pso: PsoConfig = None

    def validate(self):
        if self.method not in METHODS:
            raise ValueError("unknown method %r (expected one of %s)"
                             % (self.method, "/".join(METHODS)))
        for name, rule in (("lfc_rule", self.lfc_rule),
                           ("hfc_rule", self.hfc_rule)):
            if rule not in RULES:
                raise ValueError("unknown %s %r (expected one of %s)"
                                 % (name, rule, "/".join(RULES)))
        if self.levels < 1:
            raise ValueError("levels must be at least 1, got %d" % self.levels)


def fuse_rule(a, b, rule):
    """Merge two equal-shape coefficient sets element by element.

    ``avg`` takes the arithmetic mean (componentwise for complex data).
    ``max``/``min`` select whichever element has the larger/smaller
    value (real) or magnitude (complex), returning the winner intact so
    complex phase survives selection.  Ties select from ``a``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("coefficient sets differ in shape: %s vs %s"
                         % (a.shape, b.shape))
    if np.iscomplexobj(a) != np.iscomplexobj(b):
        raise ValueError("cannot fuse a real set with a complex set")
    if rule == "avg":
        return (a + b) / 2.0
    if rule not in ("max", "min"):
        raise ValueError("unknown rule %r" % rule)
    ka, kb = (np.abs(a), np.abs(b)) if np.iscomplexobj(a) else (a, b)
    if rule == "max":
        return np.where(ka >= kb, a, b)
    return np.where(ka <= kb, a, b)


def _check_structure(pa, pb):
    if pa.levels != pb.levels:
        raise ValueError("pyramids differ in level count: %d vs %d"
                         % (pa.levels, pb.levels))
    if (pa.original_height, pa.original_width) != \
            (pb.original_height, pb.original_width):
        raise ValueError("pyramids come from differently sized images")
    for la, lb in zip(pa.lowpass, pb.lowpass):
        if la.shape != lb.shape:
            raise ValueError("pyramid lowpass shapes differ")
    for ba, bb in zip(pa.highpass, pb.highpass):
        if ba.shape != bb.shape:
            raise ValueError("pyramid subband shapes differ")


def _weights_for(set_a, set_b, spec, level, orientation):
    """Weight pair for one coefficient set, honouring the spec method.

    Complex sets are judged by magnitude.  Level 0 denotes the lowpass
    set; PSO seeds are decorrelated per subband so evaluation order
    cannot matter.
    """
    flat_a, flat_b = np.ravel(set_a), np.ravel(set_b)
    if np.iscomplexobj(flat_a):
        flat_a, flat_b = np.abs(flat_a), np.abs(flat_b)
    if spec.method == "pca":
        return pca_weights(flat_a, flat_b)
    cfg = spec.pso if spec.pso is not None else PsoConfig()
    cfg = PsoConfig(n=cfg.n, i_max=cfg.i_max, w1=cfg.w1,
                    phi1=cfg.phi1, phi2=cfg.phi2,
                    seed=subband_seed(spec.seed, level, orientation))
    return pso_fusion_weights(flat_a, flat_b, cfg)


def fuse_pyramids(pa, pb, spec):
    """Merge two structurally identical pyramids under a fusion spec.

    Parameters
    ----------
    pa, pb : DtcwtPyramid
        Decompositions of the two sources, same levels and dimensions.
    spec : FusionSpec

    Returns
    -------
    DtcwtPyramid
        Structurally identical to the inputs.
    """
    spec.validate()
    _check_structure(pa, pb)

    la, lb = pa.lowpass, pb.lowpass
    if spec.method != "none":
        w = _weights_for(np.concatenate([x.ravel() for x in la]),
                         np.concatenate([x.ravel() for x in lb]),
                         spec, 0, 0)
        la = [w.w_a * x for x in la]
        lb = [w.w_b * x for x in lb]
    lowpass = [fuse_rule(x, y, spec.lfc_rule) for x, y in zip(la, lb)]

    highpass = []
    for lvl, (ba, bb) in enumerate(zip(pa.highpass, pb.highpass), start=1):
        fused = np.empty_like(ba)
        for k in range(6):
            sa, sb = ba[:, :, k], bb[:, :, k]
            if spec.method != "none":
                w = _weights_for(sa, sb, spec, lvl, k)
                sa, sb = apply_weights(sa, sb, w)
            fused[:, :, k] = fuse_rule(sa, sb, spec.hfc_rule)
        highpass.append(fused)

    return DtcwtPyramid(pa.levels, pa.original_height, pa.original_width,
                        lowpass, highpass, pa.range_max)


def fuse_pipeline(img_a, img_b, spec, want_pyramid=False):
    """Fuse two co-registered grayscale images end to end.

    Both images are decomposed to ``spec.levels``, the pyramids merged
    per ``spec``, and the result reconstructed and clamped to the
    intensity range.  Deterministic for fixed inputs and seed.

    Parameters
    ----------
    img_a, img_b : GrayImage
        Same dimensions and range_max.
    spec : FusionSpec
    want_pyramid : bool, optional
        Also return the fused pyramid (for inspection dumps).

    Returns
    -------
    GrayImage, or (GrayImage, DtcwtPyramid) if requested.
    """
    if img_a.pixels.shape != img_b.pixels.shape:
        raise ValueError("images differ in size: %s vs %s"
                         % (img_a.pixels.shape, img_b.pixels.shape))
    if img_a.range_max != img_b.range_max:
        raise ValueError("images differ in range_max: %r vs %r"
                         % (img_a.range_max, img_b.range_max))
    spec.validate()

    pa = dtcwt_forward(img_a, spec.levels)
    pb = dtcwt_forward(img_b, spec.levels)
    fused_pyr = fuse_pyramids(pa, pb, spec)
    out = dtcwt_inverse(fused_pyr)
    img = GrayImage(np.clip(out.pixels, 0.0, img_a.range_max),
                    img_a.range_max)
    return (img, fused_pyr) if want_pyramid else img
