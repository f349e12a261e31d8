"""Sampled fields on centered uniform grids, and the scaled Fourier transform.

Conventions, fixed once here and used everywhere else:

  * grid: M points per axis (M a power of two) on [-L, L), nodes
        x_j = (j - M/2) * dx,   dx = 2L / M,
    so x = 0 is always a node and the box is half-open on the right;
  * transform (unitary, with scale parameter h > 0):
        (F u)(xi) = (2 pi h)^(-n/2) integral e^{-i x.xi / h} u(x) dx,
    inverse has kernel e^{+i x.xi / h} and the same prefactor;
  * the transform of a grid function lives on the dual grid with spacing
        dxi = 2 pi h / (M dx) = pi h / L,
    half-width  pi h M / (2 L), again with xi = 0 a node.

With these choices the discrete transform below is the trapezoid-rule
quadrature of the integral and is exactly unitary on the grid (Plancherel
holds to machine precision), because

    x_j xi_q / h = 2 pi j q / M - pi (j + q) + pi M / 2,

so the kernel factors into numpy's FFT times integer-valued sign arrays
(-1)^j, (-1)^q and a constant phase e^{-i pi M/2} per axis -- no rounding.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatchError, ParameterError

__all__ = ["GridFunction", "fourier", "dual_half_widths"]

_MAGIC = "gridfunction-v1"


def _as_tuple(v, dim=None):
    if np.isscalar(v):
        if dim is None:
            return (float(v),)
        return (float(v),) * dim
    return tuple(float(x) for x in v)


def _check_sizes(sizes):
    for m in sizes:
        if m < 2 or (m & (m - 1)) != 0:
            raise ParameterError(f"grid sizes must be powers of two >= 2, got {sizes}")


@dataclass
class GridFunction:
    """Complex samples of a function on a centered uniform grid.

    values[j0, ..., j_{n-1}] is the sample at x = (axes[0][j0], ...).
    """

    half_widths: tuple
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        self.half_widths = _as_tuple(self.half_widths, self.values.ndim)
        if len(self.half_widths) != self.values.ndim:
            raise DimensionMismatchError(
                "half_widths / values rank mismatch",
                expected=self.values.ndim,
                got=len(self.half_widths),
            )
        _check_sizes(self.values.shape)

    # -- geometry ---------------------------------------------------------

    @property
    def dim(self):
        return self.values.ndim

    @property
    def sizes(self):
        return self.values.shape

    @property
    def spacing(self):
        return tuple(2.0 * L / m for L, m in zip(self.half_widths, self.sizes))

    def axes(self):
        return [
            (np.arange(m) - m // 2) * d for m, d in zip(self.sizes, self.spacing)
        ]

    def meshes(self):
        return list(np.meshgrid(*self.axes(), indexing="ij"))

    @classmethod
    def from_function(cls, f, half_widths, sizes, dim=None):
        """Sample f(components_list) on the grid; f gets broadcasting arrays."""
        if dim is None:
            dim = 1 if np.isscalar(sizes) else len(sizes)
        half_widths = _as_tuple(half_widths, dim)
        sizes = tuple(int(m) for m in np.atleast_1d(sizes)) if not np.isscalar(
            sizes
        ) else (int(sizes),) * dim
        _check_sizes(sizes)
        axes = [
            (np.arange(m) - m // 2) * (2.0 * L / m)
            for m, L in zip(sizes, half_widths)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        vals = np.asarray(f(mesh), dtype=complex)
        vals = np.broadcast_to(vals, tuple(sizes)).copy()
        return cls(half_widths, vals)

    def index_of(self, point):
        """Index of the nearest grid node to the given point."""
        point = np.atleast_1d(np.asarray(point, dtype=float))
        idx = []
        for p, d, m in zip(point, self.spacing, self.sizes):
            j = int(round(p / d)) + m // 2
            if not (0 <= j < m):
                raise ParameterError(f"point {point} outside grid")
            idx.append(j)
        return tuple(idx)

    def value_at(self, point):
        return self.values[self.index_of(point)]

    # -- algebra ----------------------------------------------------------

    def _like(self, values):
        return GridFunction(self.half_widths, values)

    def _coerce(self, other):
        if isinstance(other, GridFunction):
            if other.half_widths != self.half_widths or other.sizes != self.sizes:
                raise DimensionMismatchError(
                    "grid mismatch",
                    expected=(self.half_widths, self.sizes),
                    got=(other.half_widths, other.sizes),
                )
            return other.values
        return other

    def __add__(self, other):
        return self._like(self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._like(self.values - self._coerce(other))

    def __rsub__(self, other):
        return self._like(self._coerce(other) - self.values)

    def __mul__(self, other):
        return self._like(self.values * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._like(self.values / self._coerce(other))

    def __neg__(self):
        return self._like(-self.values)

    def conj(self):
        return self._like(np.conj(self.values))

    # -- metrics ----------------------------------------------------------

    def norm_l2(self):
        """Quadrature L2 norm: (prod dx)^(1/2) ||values||_2."""
        w = np.prod(self.spacing)
        return float(np.sqrt(w) * np.linalg.norm(self.values.ravel()))

    def inner(self, other):
        """L2 inner product (u, v) = integral u * conj(v)."""
        vals = self._coerce(other)
        w = np.prod(self.spacing)
        return complex(w * np.sum(self.values * np.conj(vals)))

    def norm_sup(self):
        return float(np.max(np.abs(self.values)))

    def boundary_ratio(self):
        """max |values| over the grid boundary, relative to the global max.

        Small (< 1e-12) means the field has decayed enough that periodization
        error from the FFT is negligible; trig polynomials legitimately fail
        this but transform exactly anyway.
        """
        peak = self.norm_sup()
        if peak == 0.0:
            return 0.0
        worst = 0.0
        for ax in range(self.dim):
            for face in (0, -1):
                sl = [slice(None)] * self.dim
                sl[ax] = face
                worst = max(worst, float(np.max(np.abs(self.values[tuple(sl)]))))
        return worst / peak

    # -- persistence ------------------------------------------------------

    def save(self, path):
        """One-line JSON header, then raw interleaved re/im float64 (LE, C order)."""
        header = {
            "format": _MAGIC,
            "dim": self.dim,
            "sizes": list(self.sizes),
            "half_widths": list(self.half_widths),
        }
        flat = np.ascontiguousarray(self.values).ravel()
        raw = np.empty(2 * flat.size, dtype="<f8")
        raw[0::2] = flat.real
        raw[1::2] = flat.imag
        with open(path, "wb") as fh:
            fh.write((json.dumps(header) + "\n").encode("utf-8"))
            fh.write(raw.tobytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            header_line = fh.readline()
            header = json.loads(header_line.decode("utf-8"))
            if header.get("format") != _MAGIC:
                raise ParameterError(f"not a {_MAGIC} file: {path}")
            sizes = tuple(int(m) for m in header["sizes"])
            count = 2 * int(np.prod(sizes))
            raw = np.frombuffer(fh.read(count * 8), dtype="<f8")
        if raw.size != count:
            raise ParameterError(f"truncated grid file: {path}")
        vals = (raw[0::2] + 1j * raw[1::2]).reshape(sizes)
        return cls(tuple(header["half_widths"]), vals)


def dual_half_widths(u, h=1.0):
    """Half-widths of the frequency grid dual to u's spatial grid."""
    return tuple(
        np.pi * h * m / (2.0 * L) for m, L in zip(u.sizes, u.half_widths)
    )


def _axis_signs(m):
    s = np.ones(m)
    s[1::2] = -1.0
    return s


def fourier(u, h=1.0, sign=-1):
    """Scaled Fourier transform of a GridFunction; see module docstring.

    sign=-1 is the forward transform (kernel e^{-i x.xi/h}); sign=+1 the
    inverse.  Either way the result lives on the dual grid and the pair
    round-trips to machine precision.
    """
    if h <= 0:
        raise ParameterError(f"scale h must be positive, got {h}")
    if sign not in (-1, +1):
        raise ParameterError(f"sign must be -1 or +1, got {sign}")
    n = u.dim
    vals = u.values
    # quadrature weight and unitary prefactor
    scale = np.prod(u.spacing) * (2.0 * np.pi * h) ** (-n / 2.0)
    phase = 1.0 + 0.0j
    for m in u.sizes:
        # e^{-i pi M / 2} per axis: +1 when M % 4 == 0, -1 when M % 4 == 2
        axis_phase = 1.0 if m % 4 == 0 else -1.0
        phase *= axis_phase if sign == -1 else 1.0 / axis_phase
    work = vals
    for ax, m in enumerate(u.sizes):
        shape = [1] * n
        shape[ax] = m
        work = work * _axis_signs(m).reshape(shape)
    if sign == -1:
        work = np.fft.fftn(work)
    else:
        work = np.fft.ifftn(work) * np.prod(u.sizes)
    for ax, m in enumerate(u.sizes):
        shape = [1] * n
        shape[ax] = m
        work = work * _axis_signs(m).reshape(shape)
    out_vals = scale * phase * work
    return GridFunction(dual_half_widths(u, h), out_vals)
