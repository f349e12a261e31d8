"""Smooth radial cutoff functions with exact plateaus.

Two kinds:
  * "bump":    1 on |x| <= inner, 0 on |x| >= outer
  * "annulus": 0 on |x| <= inner, 1 on |x| >= outer

The transition uses the normalized exponential-bump step
    S(t) = B(t) / (B(t) + B(1-t)),   B(t) = exp(-1/(2t)) for t > 0,
which rises smoothly from 0 to 1 on [0,1]; all derivatives vanish at the
endpoints, so the plateaus are exact and the function is jet-differentiable
to every order.  Works on numpy arrays and on Jets (with masked branches,
so batched jets may straddle plateau and transition regions).
"""

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError
from .jets import Jet

__all__ = ["CutoffFunction", "smooth_step"]

_CLIP = 1e-9


def _bump_B(t):
    # exp(-1/(2t)), with t already clipped into (0, 1]; underflows cleanly to 0
    return np.exp(-0.5 / t)


def smooth_step(t):
    """C-infinity step: 0 for t <= 0, 1 for t >= 1 (exact at double precision)."""
    t = np.clip(np.asarray(t, dtype=float), _CLIP, 1.0 - _CLIP)
    lo = _bump_B(t)
    hi = _bump_B(1.0 - t)
    return lo / (lo + hi)


def _smooth_step_jet(tjet):
    """smooth_step on a Jet whose constant term may straddle [0, 1]."""
    c = np.real(np.atleast_1d(tjet.value))
    in_lo = c <= _CLIP
    in_hi = c >= 1.0 - _CLIP
    mid = ~(in_lo | in_hi)
    # evaluate the analytic branch on a clamped copy to keep exp/log finite,
    # then overwrite the plateau lanes
    c_safe = np.clip(c, 2 * _CLIP, 1.0 - 2 * _CLIP)
    shift = c_safe - c
    t_safe = tjet + shift
    lo = (-0.5 / t_safe).exp()
    hi = (-0.5 / (1.0 - t_safe)).exp()
    val = lo / (lo + hi)
    val = val.where(~in_lo, 0.0)
    val = val.where(~in_hi, 1.0)
    return val


@dataclass(frozen=True)
class CutoffFunction:
    """Radial smooth cutoff; see module docstring for the two kinds."""

    kind: str = "bump"
    inner: float = 1.0
    outer: float = 2.0

    def __post_init__(self):
        if self.kind not in ("bump", "annulus"):
            raise ParameterError(f"unknown cutoff kind {self.kind!r}")
        if not (0 < self.inner < self.outer):
            raise ParameterError(
                f"need 0 < inner < outer, got inner={self.inner}, outer={self.outer}"
            )

    def of_radius(self, r):
        """Evaluate the profile at radius r (array or Jet, r >= 0)."""
        t_of = lambda rr: (rr - self.inner) / (self.outer - self.inner)
        if isinstance(r, Jet):
            rising = _smooth_step_jet(t_of(r))
        else:
            rising = smooth_step(t_of(np.asarray(r, dtype=float)))
        if self.kind == "bump":
            return 1.0 - rising
        return rising

    def __call__(self, x):
        """Evaluate at a point given as a sequence of components (arrays or Jets).

        A bare scalar/array is treated as a single component.
        """
        comps = x if isinstance(x, (list, tuple)) else [x]
        if any(isinstance(c, Jet) for c in comps):
            s = comps[0] * comps[0]
            for c in comps[1:]:
                s = s + c * c
            return self._radial_jet(s)
        s = np.zeros_like(np.asarray(comps[0], dtype=float))
        for c in comps:
            s = s + np.asarray(c, dtype=float) ** 2
        return self.of_radius(np.sqrt(s))

    def _radial_jet(self, s):
        """Profile at radius sqrt(s) for a jet s = |x|^2, masking the plateaus.

        sqrt is only ever expanded where inner < |x| < outer, so the radial
        composition stays analytic (the origin sits inside a plateau).
        """
        c = np.real(np.atleast_1d(s.value))
        lo = c <= self.inner**2
        hi = c >= self.outer**2
        mid = ~(lo | hi)
        midpoint = (0.5 * (self.inner + self.outer)) ** 2
        s_safe = s.where(mid, midpoint)
        r = s_safe.sqrt()
        rising = _smooth_step_jet((r - self.inner) / (self.outer - self.inner))
        rising = rising.where(~lo, 0.0)
        rising = rising.where(~hi, 1.0)
        if self.kind == "bump":
            return 1.0 - rising
        return rising

    def scaled(self, eps):
        """The map x -> chi(eps * x) as a callable with the same conventions."""

        def fn(x):
            comps = x if isinstance(x, (list, tuple)) else [x]
            return self([c * eps for c in comps])

        return fn
