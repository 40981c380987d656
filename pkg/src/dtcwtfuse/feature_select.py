"""Source weighting for fusion: PCA eigenweights and a PSO minimizer.

Both routes produce a :class:`WeightPair` that scales the coefficients
of the two sources before rule-based merging.  PCA takes the dominant
eigenvector of the 2x2 covariance of the flattened coefficient sets;
PSO searches the weight square [0, 1]^2 for maximal fused variance
under a soft sum-to-one anchor.  Complex subbands contribute through
their magnitudes.

The PSO fitness used for fusion weighting is a choice this library has
to make for itself: the usual formulations of swarm-selected fusion
weights leave the objective open.  Variance is the natural contrast
proxy here (it is also what the SD quality metric measures), and the
quadratic penalty keeps the fused dynamic range near that of an affine
source combination.  Swap the fitness by calling :func:`pso_minimize`
directly if a different criterion is wanted.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = [
    "WeightPair", "PsoConfig", "SwarmState",
    "pca_weights", "apply_weights", "pso_minimize", "pso_fusion_weights",
    "subband_seed",
]


@dataclass
class WeightPair:
    """Multiplicative weights for sources a and b, both finite and >= 0."""

    w_a: float
    w_b: float


@dataclass
class PsoConfig:
    """Swarm hyperparameters and search box.

    ``x_min``/``x_max`` give the per-dimension bounds (their common
    length sets the search dimensionality).  Defaults suit the
    two-dimensional weight search: 30 particles, 100 iterations,
    inertia 0.7, cognitive and social factors 1.5.
    """

    n: int = 30
    i_max: int = 100
    w1: float = 0.7
    phi1: float = 1.5
    phi2: float = 1.5
    x_min: tuple = (0.0, 0.0)
    x_max: tuple = (1.0, 1.0)
    seed: int = 0


@dataclass(eq=False)
class SwarmState:
    """Mutable swarm snapshot: positions, velocities, and bests."""

    x: np.ndarray
    v: np.ndarray
    pbest_x: np.ndarray
    pbest_val: np.ndarray
    gbest_x: np.ndarray
    gbest_val: float
    iteration: int = 0


def subband_seed(seed, level, orientation):
    """Derive a per-subband seed so concurrent swarms cannot collide.

    Level 0 tags the lowpass set and leaves the base seed unchanged;
    highpass subbands mix ``level`` (1-based) and ``orientation``
    (0..5) into the seed through a golden-ratio multiply.
    """
    tag = 0 if level == 0 else level * 6 + orientation + 1
    return (seed ^ (tag * 0x9E3779B9)) & 0xFFFFFFFF


# ----------------------------------------------------------------------
# PCA weights
# ----------------------------------------------------------------------

def pca_weights(a, b):
    """Dominant-eigenvector weights of the 2x2 covariance of (a, b).

    The sample covariance (divisor N-1) of the two flattened sets is
    eigendecomposed in closed form; the eigenvector of the larger
    eigenvalue is sign-fixed to a positive component sum and normalised
    by that sum, so the weights add to 1.  Degenerate inputs (both sets
    constant, or an eigenvector that cannot be made componentwise
    positive) fall back to (0.5, 0.5).

    Parameters
    ----------
    a, b : array_like
        Coefficient sets of equal length >= 2; flattened before use.

    Returns
    -------
    WeightPair
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size != b.size:
        raise ValueError("coefficient sets differ in length: %d vs %d"
                         % (a.size, b.size))
    if a.size < 2:
        raise ValueError("need at least 2 coefficients, got %d" % a.size)

    n = a.size
    da = a - a.mean()
    db = b - b.mean()
    alpha = da @ da / (n - 1)
    beta = db @ db / (n - 1)
    gamma = da @ db / (n - 1)

    scale = max(np.abs(a).max(), np.abs(b).max())
    if alpha + beta <= 1e-24 * scale * scale:
        return WeightPair(0.5, 0.5)

    lam = 0.5 * (alpha + beta) + math.hypot(0.5 * (alpha - beta), gamma)
    # Two algebraically equivalent eigenvector forms; take the better
    # conditioned one (the choice is symmetric under argument swap).
    u = (gamma, lam - alpha)
    w = (lam - beta, gamma)
    v1, v2 = u if u[0] ** 2 + u[1] ** 2 >= w[0] ** 2 + w[1] ** 2 else w

    s = v1 + v2
    if s < 0:
        v1, v2, s = -v1, -v2, -s
    if v1 <= 0 or v2 <= 0 or s <= 0:
        return WeightPair(0.5, 0.5)
    return WeightPair(v1 / s, v2 / s)


def apply_weights(a, b, w):
    """Scale two coefficient sets by their weight pair.

    Complex sets are scaled componentwise, so magnitudes scale by the
    weight and phases are untouched.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("coefficient sets differ in shape: %s vs %s"
                         % (a.shape, b.shape))
    return w.w_a * a, w.w_b * b


# ----------------------------------------------------------------------
# Particle swarm optimisation
# ----------------------------------------------------------------------

def _evaluate(fitness, x):
    vals = np.empty(x.shape[0])
    for i, row in enumerate(x):
        vals[i] = fitness(row)
        if not math.isfinite(vals[i]):
            raise ValueError("fitness returned non-finite value %r at "
                             "position %s" % (vals[i], row.tolist()))
    return vals


def pso_minimize(fitness, cfg):
    """Minimise a function over a box with a deterministic particle swarm.

    Positions start uniform in the box and velocities at zero.  Each
    iteration draws one fresh uniform scalar per particle for the
    cognitive term and one for the social term, updates

        v <- w1 v + phi1 (pbest - x) mu1 + phi2 (gbest - x) mu2
        x <- x + v

    caps ``|v|`` at half the box width per dimension, clamps positions
    into the box, and then updates the bests: a personal best moves only
    on strict improvement, and the global best is the minimum personal
    best (lowest particle index on ties).  Runs exactly ``cfg.i_max``
    iterations.

    Parameters
    ----------
    fitness : callable
        Maps a length-d position array to a finite float.
    cfg : PsoConfig

    Returns
    -------
    (ndarray, float, ndarray)
        Best position, its fitness value, and the global-best history
        with ``i_max + 1`` entries (the initial evaluation plus one per
        iteration).
    """
    x_min = np.asarray(cfg.x_min, dtype=np.float64)
    x_max = np.asarray(cfg.x_max, dtype=np.float64)
    if x_min.shape != x_max.shape or x_min.ndim != 1:
        raise ValueError("x_min and x_max must be 1-D and of equal length")
    if not np.all(x_min < x_max):
        raise ValueError("require x_min < x_max in every dimension")
    if cfg.n < 1:
        raise ValueError("population must be at least 1, got %d" % cfg.n)
    if cfg.i_max < 1:
        raise ValueError("i_max must be at least 1, got %d" % cfg.i_max)
    if not 0.0 <= cfg.w1 <= 1.0:
        raise ValueError("inertia w1 must lie in [0, 1], got %r" % cfg.w1)
    if cfg.phi1 < 0 or cfg.phi2 < 0:
        raise ValueError("phi1 and phi2 must be non-negative")

    d = x_min.size
    span = x_max - x_min
    v_cap = span / 2.0
    rng = np.random.default_rng(cfg.seed)

    x = x_min + span * rng.random((cfg.n, d))
    vals = _evaluate(fitness, x)
    g = int(np.argmin(vals))
    state = SwarmState(x=x, v=np.zeros((cfg.n, d)),
                       pbest_x=x.copy(), pbest_val=vals.copy(),
                       gbest_x=x[g].copy(), gbest_val=float(vals[g]))
    history = [state.gbest_val]

    for it in range(cfg.i_max):
        mu1 = rng.random((cfg.n, 1))
        mu2 = rng.random((cfg.n, 1))
        state.v = (cfg.w1 * state.v
                   + cfg.phi1 * (state.pbest_x - state.x) * mu1
                   + cfg.phi2 * (state.gbest_x - state.x) * mu2)
        np.clip(state.v, -v_cap, v_cap, out=state.v)
        state.x = np.clip(state.x + state.v, x_min, x_max)

        vals = _evaluate(fitness, state.x)
        improved = vals < state.pbest_val
        state.pbest_x[improved] = state.x[improved]
        state.pbest_val[improved] = vals[improved]
        g = int(np.argmin(state.pbest_val))
        state.gbest_x = state.pbest_x[g].copy()
        state.gbest_val = float(state.pbest_val[g])
        state.iteration = it + 1
        history.append(state.gbest_val)

    return state.gbest_x.copy(), state.gbest_val, np.asarray(history)


def pso_fusion_weights(a, b, cfg):
    """Swarm-searched fusion weights over the unit square.

    The fitness rewards variance of the weighted sum ``w_a a + w_b b``
    and penalises departure of ``w_a + w_b`` from 1:

        f(w) = -Var(w_a a + w_b b) + lambda (w_a + w_b - 1)^2

    with ``lambda = 10 Var(a concat b)``.  Both terms reduce to the
    second moments of the inputs, so the fitness is evaluated from
    precomputed statistics in constant time.  When the concatenated
    variance vanishes (both sets constant) lambda degenerates to 0 and
    is floored at 1 so the anchor still acts.  Complex inputs enter
    through their magnitudes.  Bounds are fixed to [0, 1]^2 regardless
    of ``cfg``.

    Parameters
    ----------
    a, b : array_like
        Coefficient sets of equal length >= 2.
    cfg : PsoConfig
        Hyperparameters and seed; bounds are overridden.

    Returns
    -------
    WeightPair
    """
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if np.iscomplexobj(a):
        a = np.abs(a)
    if np.iscomplexobj(b):
        b = np.abs(b)
    a = a.astype(np.float64, copy=False)
    b = b.astype(np.float64, copy=False)
    if a.size != b.size:
        raise ValueError("coefficient sets differ in length: %d vs %d"
                         % (a.size, b.size))
    if a.size < 2:
        raise ValueError("need at least 2 coefficients, got %d" % a.size)

    va = a.var()
    vb = b.var()
    cab = float(np.mean((a - a.mean()) * (b - b.mean())))
    lam = 10.0 * np.concatenate([a, b]).var()
    if lam <= 0.0:
        lam = 1.0

    def fitness(w):
        wa, wb = w
        var = wa * wa * va + 2.0 * wa * wb * cab + wb * wb * vb
        return -var + lam * (wa + wb - 1.0) ** 2

    box = replace(cfg, x_min=(0.0, 0.0), x_max=(1.0, 1.0))
    pos, _, _ = pso_minimize(fitness, box)
    return WeightPair(float(pos[0]), float(pos[1]))
