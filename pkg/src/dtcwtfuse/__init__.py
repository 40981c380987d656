"""Image fusion in the 2-D dual-tree complex wavelet domain.

Decompose two co-registered grayscale images with the DTCWT, weight
each subband pair by PCA or particle-swarm search, merge with simple
elementwise rules, reconstruct, and score the result with standard
fusion quality indices.  The ``dtcwtfuse`` console script exposes the
same pipeline from the shell.
"""

from .feature_select import (PsoConfig, WeightPair, apply_weights,
                             pca_weights, pso_fusion_weights, pso_minimize,
                             subband_seed)
from .fusion import FusionSpec, fuse_pipeline, fuse_pyramids, fuse_rule
from .image_io import (GrayImage, TruncatedPayloadError,
                       UnsupportedFormatError, generate_phantom_pair,
                       read_image, to_grayscale, write_image)
from .metrics import (MetricsReport, cross_correlation, entropy, evaluate,
                      psnr, ssim, std_dev)
from .transform import (ORIENTATIONS_DEG, DtcwtPyramid, dtcwt_forward,
                        dtcwt_inverse, shift_energy_ratio)

__version__ = "0.1.0"

__all__ = [
    "GrayImage", "UnsupportedFormatError", "TruncatedPayloadError",
    "read_image", "write_image", "to_grayscale", "generate_phantom_pair",
    "DtcwtPyramid", "ORIENTATIONS_DEG", "dtcwt_forward", "dtcwt_inverse",
    "shift_energy_ratio",
    "WeightPair", "PsoConfig", "subband_seed", "pca_weights",
    "apply_weights", "pso_minimize", "pso_fusion_weights",
    "FusionSpec", "fuse_rule", "fuse_pyramids", "fuse_pipeline",
    "MetricsReport", "entropy", "std_dev", "ssim", "cross_correlation",
    "psnr", "evaluate",
    "__version__",
]
