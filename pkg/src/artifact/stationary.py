"""Stationary-phase asymptotics for large-parameter oscillatory integrals.

Covers the 1-d quadratic case, the n-dimensional quadratic theorem with the
full coefficient sequence c_j = (1/j!) (<Q^{-1}D,D>/(2i))^j a(x0), the
general-phase leading term behind a Newton critical-point search, and the
Fourier transform of imaginary Gaussians e^{+-i<Qx,x>/2}.  Expansions are
returned as structured records so the prefactor pieces (power of the large
parameter, signature phase, Hessian amplitude) stay separately inspectable.
"""

import math
from dataclasses import dataclass

import numpy as np

from .core import apply_quadratic_power, jet_of
from .errors import (
    AmbiguousCriticalPointsError,
    ParameterError,
    SingularMatrixError,
)

__all__ = [
    "QuadraticPhase",
    "AsymptoticExpansion",
    "StationaryReport",
    "stationary_1d",
    "stationary_quadratic",
    "stationary_general",
    "gaussian_fourier",
]

_EIG_REL_FLOOR = 1e-10  # eigenvalues below this times ||Q|| count as zero


def _signature_det(Q):
    """(signature, |det|^{1/2}, eigenvalues, eigenvectors) of a symmetric matrix."""
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ParameterError(f"need a square matrix, got shape {Q.shape}")
    if not np.allclose(Q, Q.T, atol=1e-12 * max(1.0, np.abs(Q).max())):
        raise ParameterError("matrix must be symmetric")
    w, v = np.linalg.eigh(Q)
    scale = np.max(np.abs(w))
    if scale == 0.0 or np.any(np.abs(w) <= _EIG_REL_FLOOR * scale):
        raise SingularMatrixError(
            f"degenerate quadratic form: eigenvalues {w} contain a numerical zero"
        )
    sgn = int(np.sum(w > 0) - np.sum(w < 0))
    return sgn, float(np.prod(np.abs(w)) ** 0.5), w, v


@dataclass(frozen=True, eq=False)
class QuadraticPhase:
    """Phase <Q (x - x0), x - x0> / 2 with cached spectral data."""

    matrix: np.ndarray
    center: np.ndarray = None

    def __post_init__(self):
        Q = np.asarray(self.matrix, dtype=float)
        sgn, root_det, w, v = _signature_det(Q)
        c = (
            np.zeros(Q.shape[0])
            if self.center is None
            else np.asarray(self.center, dtype=float)
        )
        if c.shape != (Q.shape[0],):
            raise ParameterError(f"center has shape {c.shape}, expected ({Q.shape[0]},)")
        # spectral data is trusted downstream: check it reproduces the matrix
        if np.max(np.abs((v * w) @ v.T - Q)) > 1e-12 * max(1.0, np.abs(w).max()):
            raise ParameterError("eigendecomposition failed to reproduce the matrix")
        object.__setattr__(self, "matrix", Q)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "signature", sgn)
        object.__setattr__(self, "root_abs_det", root_det)
        object.__setattr__(self, "eigenvalues", w)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __call__(self, x):
        d = np.asarray(x, dtype=float) - self.center
        return 0.5 * float(d @ self.matrix @ d)


@dataclass
class AsymptoticExpansion:
    """prefactor(lam) * sum_j coefficients[j] lam^{-j} with explicit pieces.

    prefactor(lam) = (2 pi/lam)^{-lambda_power} * phase_factor * amplitude
    * e^{i lam stationary_value}; lambda_power is the power of lam itself
    (-n/2 for an n-dim quadratic phase), stationary_value the phase value at
    the critical point.  The true remainder after the listed coefficients is
    O(lam^{remainder_exponent}).
    """

    lambda_power: float
    phase_factor: complex
    amplitude: float
    stationary_value: float
    coefficients: tuple
    remainder_exponent: float

    def prefactor(self, lam):
        return (
            (2.0 * np.pi / lam) ** (-self.lambda_power)
            * self.phase_factor
            * self.amplitude
            * np.exp(1j * lam * self.stationary_value)
        )

    def evaluate(self, lam):
        lam = float(lam)
        if lam <= 0:
            raise ParameterError("large parameter must be positive")
        series = sum(c * lam ** (-j) for j, c in enumerate(self.coefficients))
        return self.prefactor(lam) * series


def stationary_1d(a, order):
    """Expansion of integral e^{i lam x^2/2} a(x) dx about x = 0.

    Coefficients (i/2)^j a^{(2j)}(0) / j! for j <= order; the remainder is
    O(lam^{-1/2 - order - 1}).  `a` takes a one-entry component list.
    """
    if order < 0:
        raise ParameterError("expansion order must be >= 0")
    jet = jet_of(a, [0.0], 2 * order)
    coeffs = []
    for j in range(order + 1):
        # stored Taylor coefficient is a^{(2j)}(0) / (2j)!
        deriv = complex(jet.coeff((2 * j,))) * math.factorial(2 * j)
        coeffs.append((0.5j) ** j * deriv / math.factorial(j))
    return AsymptoticExpansion(
        lambda_power=-0.5,
        phase_factor=np.exp(1j * np.pi / 4),
        amplitude=1.0,
        stationary_value=0.0,
        coefficients=tuple(coeffs),
        remainder_exponent=-0.5 - order - 1,
    )


def stationary_quadratic(qp, a, order):
    """Expansion of integral e^{i lam <Q(x-x0),x-x0>/2} a(x) dx.

    c_j = (1/j!) (<Q^{-1}D,D>/(2i))^j a at the center; prefactor
    (2 pi/lam)^{n/2} e^{i pi sgn(Q)/4} / |det Q|^{1/2}.
    """
    if not isinstance(qp, QuadraticPhase):
        qp = QuadraticPhase(np.asarray(qp, dtype=float))
    if order < 0:
        raise ParameterError("expansion order must be >= 0")
    center = list(qp.center)
    coeffs = [
        complex(apply_quadratic_power(qp.matrix, j, a, center)) / math.factorial(j)
        for j in range(order + 1)
    ]
    return AsymptoticExpansion(
        lambda_power=-0.5 * qp.dim,
        phase_factor=np.exp(1j * np.pi * qp.signature / 4),
        amplitude=1.0 / qp.root_abs_det,
        stationary_value=0.0,
        coefficients=tuple(coeffs),
        remainder_exponent=-0.5 * qp.dim - order - 1,
    )


# ---------------------------------------------------------------------------
# general phase: Newton multistart + leading term


@dataclass(eq=False)
class StationaryReport:
    """Outcome of the general-phase leading-term analysis."""

    critical_point: np.ndarray
    hessian: np.ndarray
    expansion: AsymptoticExpansion
    diagnostic: str

    @property
    def nonstationary(self):
        return self.critical_point is None


def _gradient(jet, n):
    g = np.empty(n)
    for j in range(n):
        e = [0] * n
        e[j] = 1
        g[j] = float(np.real(jet.coeff(tuple(e))))
    return g


def _hessian(jet, n):
    H = np.empty((n, n))
    for j in range(n):
        for k in range(j, n):
            e = [0] * n
            e[j] += 1
            e[k] += 1
            c = float(np.real(jet.coeff(tuple(e))))
            H[j, k] = H[k, j] = 2.0 * c if j == k else c
    return H


def stationary_general(phi, a, search_box):
    """Leading term of integral e^{i lam phi(x)} a(x) dx over a search box.

    Multistart Newton (5 starts per axis) hunts critical points of phi in
    the box.  Exactly one non-degenerate point yields the leading term
    (2 pi/lam)^{n/2} e^{i lam phi(x*) + i pi sgn H/4} |det H|^{-1/2} a(x*);
    none yields a nonstationary report (the integral is O(lam^{-infinity}));
    several raise, since the single-point expansion does not apply.  Only
    the leading term is produced: the correction coefficients of a general
    phase have no closed form here.
    """
    box = [(float(lo), float(hi)) for lo, hi in search_box]
    n = len(box)
    if n == 0 or any(hi <= lo for lo, hi in box):
        raise ParameterError("search box must be nonempty with positive extent")
    axes = [np.linspace(lo, hi, 5) for lo, hi in box]
    starts = np.stack([m.ravel() for m in np.meshgrid(*axes, indexing="ij")], axis=1)

    found = []
    for x0 in starts:
        x = x0.copy()
        for _ in range(50):
            jet = jet_of(phi, list(x), 2)
            g = _gradient(jet, n)
            if np.linalg.norm(g) < 1e-10:
                break
            H = _hessian(jet, n)
            try:
                step = np.linalg.solve(H, g)
            except np.linalg.LinAlgError:
                break
            x = x - step
            if not np.all(np.isfinite(x)):
                break
        if not np.all(np.isfinite(x)):
            continue
        if np.linalg.norm(_gradient(jet_of(phi, list(x), 1), n)) >= 1e-10:
            continue
        if any(x[j] < box[j][0] - 1e-9 or x[j] > box[j][1] + 1e-9 for j in range(n)):
            continue
        if all(np.linalg.norm(x - y) > 1e-6 for y in found):
            found.append(x)

    if not found:
        empty = AsymptoticExpansion(
            lambda_power=0.0,
            phase_factor=1.0,
            amplitude=0.0,
            stationary_value=0.0,
            coefficients=(0.0,),
            remainder_exponent=-np.inf,
        )
        return StationaryReport(
            critical_point=None,
            hessian=None,
            expansion=empty,
            diagnostic="no critical point in box: rapid decay, O(lam^-inf)",
        )
    if len(found) > 1:
        raise AmbiguousCriticalPointsError(
            f"{len(found)} critical points found; the expansion assumes a unique one",
            points=found,
        )

    xs = found[0]
    jet = jet_of(phi, list(xs), 2)
    H = _hessian(jet, n)
    sgn, root_det, _, _ = _signature_det(H)
    phi0 = float(np.real(jet.value))
    a0 = complex(np.asarray(jet_of(a, list(xs), 0).value).reshape(()))
    expansion = AsymptoticExpansion(
        lambda_power=-0.5 * n,
        phase_factor=np.exp(1j * np.pi * sgn / 4),
        amplitude=1.0 / root_det,
        stationary_value=phi0,
        coefficients=(a0,),
        remainder_exponent=-0.5 * n - 1,
    )
    return StationaryReport(
        critical_point=xs,
        hessian=H,
        expansion=expansion,
        diagnostic=f"unique critical point at {xs} with signature {sgn}",
    )


def gaussian_fourier(Q, sign, xi):
    """Fourier transform of e^{+- i <Qx,x>/2} at xi (unitary normalization).

    Returns e^{+- i pi sgn(Q)/4} / |det Q|^{1/2} * e^{-+ i <Q^{-1} xi,xi>/2};
    the transform of an imaginary Gaussian is again an imaginary Gaussian.
    """
    if sign not in (+1, -1):
        raise ParameterError("sign must be +1 or -1")
    sgn, root_det, _, _ = _signature_det(Q)
    Q = np.asarray(Q, dtype=float)
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if xi.shape[-1] != Q.shape[0]:
        raise ParameterError(
            f"frequency has dimension {xi.shape[-1]}, matrix is {Q.shape[0]}x{Q.shape[0]}"
        )
    quad = np.einsum("...j,jk,...k->...", xi, np.linalg.inv(Q), xi)
    out = np.exp(sign * 1j * np.pi * sgn / 4) / root_det * np.exp(-sign * 1j * quad / 2)
    return complex(out) if np.ndim(out) == 0 else out
