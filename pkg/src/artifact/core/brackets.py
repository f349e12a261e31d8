"""Japanese bracket <x> = sqrt(1 + |x|^2) and the inequalities it obeys.

The harnesses are randomized checks with explicit constants; they return the
worst observed ratio so callers (and tests) can assert the constant is never
violated.
"""

import numpy as np

from .jets import Jet

__all__ = [
    "japanese_bracket",
    "bracket_of",
    "peetre_harness",
    "separated_cone_harness",
    "bracket_peetre_harness",
]


def japanese_bracket(x):
    """<x> = sqrt(1 + |x|^2) for an array of vectors (last axis = components)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[None]
    return np.sqrt(1.0 + np.sum(x * x, axis=-1))


def bracket_of(components):
    """<x> on a list of coordinate components (arrays or Jets)."""
    if any(isinstance(c, Jet) for c in components):
        s = components[0] * components[0]
        for c in components[1:]:
            s = s + c * c
        return (1.0 + s).sqrt()
    s = 0.0
    for c in components:
        s = s + np.asarray(c, dtype=float) ** 2
    return np.sqrt(1.0 + s)


def peetre_harness(dim, power, n_samples=100_000, scale=50.0, seed=0):
    """Check (1 + |a-b|)^m <= (1 + |a|)^m (1 + |b|)^|m| with constant exactly 1.

    Returns (max_ratio, n_violations) where ratio = lhs / rhs; the inequality
    holds pointwise, so max_ratio <= 1 + eps and n_violations == 0.
    """
    rng = np.random.default_rng(seed)
    a = rng.uniform(-scale, scale, size=(n_samples, dim))
    b = rng.uniform(-scale, scale, size=(n_samples, dim))
    na = 1.0 + np.linalg.norm(a, axis=-1)
    nb = 1.0 + np.linalg.norm(b, axis=-1)
    nab = 1.0 + np.linalg.norm(a - b, axis=-1)
    lhs = nab**power
    rhs = na**power * nb ** abs(power)
    ratio = lhs / rhs
    tol = 1e-12
    return float(ratio.max()), int(np.sum(ratio > 1.0 + tol))


def bracket_peetre_harness(dim, power, n_samples=100_000, scale=50.0, seed=1):
    """Check <a>^m <= 2^(|m|/2) <a-b>^|m| <b>^m for all real m.

    (From <a>^2 <= 2 <a-b>^2 <b>^2 and its reciprocal.)  Returns
    (max_ratio, n_violations) with ratio = lhs / rhs.
    """
    rng = np.random.default_rng(seed)
    a = rng.uniform(-scale, scale, size=(n_samples, dim))
    b = rng.uniform(-scale, scale, size=(n_samples, dim))
    ba = japanese_bracket(a)
    bb = japanese_bracket(b)
    bab = japanese_bracket(a - b)
    lhs = ba**power
    rhs = 2.0 ** (abs(power) / 2.0) * bab ** abs(power) * bb**power
    ratio = lhs / rhs
    tol = 1e-12
    return float(ratio.max()), int(np.sum(ratio > 1.0 + tol))


def separated_cone_harness(
    axis1, axis2, half_angle, n_samples=10_000, scale=100.0, seed=2
):
    """For a in cone(axis1), b in cone(axis2): |a-b| >= C (|a| + |b|).

    The two closed cones of the given half-angle about the axes must only
    meet at the origin; the sharp constant is sin(gamma/2) where gamma is the
    minimal angle between rays of the two cones.  Returns
    (constant_used, min_ratio, n_violations) with ratio = |a-b|/(|a|+|b|).
    """
    axis1 = np.asarray(axis1, dtype=float)
    axis2 = np.asarray(axis2, dtype=float)
    axis1 = axis1 / np.linalg.norm(axis1)
    axis2 = axis2 / np.linalg.norm(axis2)
    between = np.arccos(np.clip(axis1 @ axis2, -1.0, 1.0))
    gamma = between - 2.0 * half_angle
    if gamma <= 0:
        raise ValueError("cones overlap: axis angle must exceed twice the half-angle")
    const = np.sin(gamma / 2.0)

    rng = np.random.default_rng(seed)
    a = _sample_cone(rng, axis1, half_angle, n_samples, scale)
    b = _sample_cone(rng, axis2, half_angle, n_samples, scale)
    norm_a = np.linalg.norm(a, axis=-1)
    norm_b = np.linalg.norm(b, axis=-1)
    diff = np.linalg.norm(a - b, axis=-1)
    ratio = diff / (norm_a + norm_b)
    tol = 1e-12
    return float(const), float(ratio.min()), int(np.sum(ratio < const - tol))


def _sample_cone(rng, axis, half_angle, n, scale):
    """Uniform-ish samples inside the cone of the given half-angle about axis."""
    dim = axis.shape[0]
    # random directions, then rotate a polar cap sample onto the axis;
    # for dim 2/3 this is plenty uniform for a violation search
    theta = rng.uniform(0.0, half_angle, size=n)
    r = rng.uniform(0.1, scale, size=n)
    if dim == 2:
        perp = np.array([-axis[1], axis[0]])
        sgn = rng.choice([-1.0, 1.0], size=n)
        dirs = (
            np.cos(theta)[:, None] * axis[None, :]
            + (sgn * np.sin(theta))[:, None] * perp[None, :]
        )
    else:
        raw = rng.normal(size=(n, dim))
        raw -= (raw @ axis)[:, None] * axis[None, :]
        nrm = np.linalg.norm(raw, axis=-1)
        nrm[nrm == 0] = 1.0
        perp = raw / nrm[:, None]
        dirs = np.cos(theta)[:, None] * axis[None, :] + np.sin(theta)[:, None] * perp
    return r[:, None] * dirs
