"""
How the two weighting routes behave
===================================

PCA weights follow the dominant eigenvector of the coefficient
covariance; the swarm maximizes fused variance under a soft
sum-to-one anchor.  A few constructed inputs make their different
temperaments visible.
"""

import numpy as np

from dtcwtfuse import (PsoConfig, pca_weights, pso_fusion_weights,
                       pso_minimize)

rng = np.random.default_rng(42)

# 1. identical statistics: both routes should treat the sources evenly
shared = rng.standard_normal(500) * 20.0
w = pca_weights(shared, shared.copy())
print("pca on identical inputs:      w_a=%.3f w_b=%.3f" % (w.w_a, w.w_b))

# 2. one source dominates: a is a scaled-up version of a common signal
a = 3.0 * shared + rng.standard_normal(500)
b = shared + rng.standard_normal(500)
w = pca_weights(a, b)
print("pca, a three times stronger:  w_a=%.3f w_b=%.3f" % (w.w_a, w.w_b))

# 3. the swarm on the same pair favours the high-variance source too,
# but is free to leave the w_a + w_b = 1 line when variance pays for it
w = pso_fusion_weights(a, b, PsoConfig(seed=0))
print("pso, same pair:               w_a=%.3f w_b=%.3f (sum %.3f)"
      % (w.w_a, w.w_b, w.w_a + w.w_b))

# 4. anti-correlated sources make the covariance eigenvector unusable
# (mixed signs); the PCA route falls back to an even split
noise = rng.standard_normal(500)
w = pca_weights(noise, -noise + 0.1 * rng.standard_normal(500))
print("pca on anti-correlated pair:  w_a=%.3f w_b=%.3f" % (w.w_a, w.w_b))

# 5. the raw minimizer on a classic test function, to show the swarm
# machinery on its own: the 2-D sphere has its optimum at the origin
cfg = PsoConfig(n=30, i_max=200, x_min=(-5.0, -5.0), x_max=(5.0, 5.0),
                seed=42)
pos, val, hist = pso_minimize(lambda v: float(np.dot(v, v)), cfg)
print("sphere minimum found at (%.2e, %.2e), f=%.2e, "
      "best-so-far halved %d times"
      % (pos[0], pos[1], val,
         int(np.sum(np.diff(hist) < -0.5 * np.abs(hist[:-1])))))
