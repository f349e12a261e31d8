"""Truncated multivariate Taylor arithmetic.

A Jet holds the coefficients c_alpha = d^alpha f(center)/alpha! of a smooth
function at a point, for all |alpha| <= order, over real variables with
complex values.  Arithmetic is exact truncation: sums, products (Cauchy
convolution), quotients, integer and real powers, and composition with the
analytic primitives exp/sin/cos/sinh/cosh/log/sqrt.  Coefficient values may
be scalars or numpy arrays, so a single Jet can carry a whole lattice of
expansion points at once; all operations broadcast.

Functions are evaluated on jets by ordinary operator overloading: a map
written with +,-,*,/,** and numpy ufuncs works unchanged on seed jets.
"""

import math

import numpy as np

from ..errors import (
    DimensionMismatchError,
    JetOrderError,
    NonAnalyticError,
    ParameterError,
    SingularMatrixError,
)
from .multiindex import multi_indices, multi_indices_of_order

__all__ = ["Jet", "jet_of", "seed_jets", "derivative_map", "apply_quadratic_power"]

_ZERO_IM_TOL = 0.0  # exact: sign trick for |.| only when coefficients are real


def _fact(t):
    out = 1
    for e in t:
        out *= math.factorial(e)
    return out


class Jet:
    """Truncated Taylor expansion at a point.

    coeffs maps exponent tuples alpha (|alpha| <= order) to complex values
    (scalars or broadcastable arrays): f(center + t) = sum c_alpha t^alpha.
    """

    __slots__ = ("dim", "order", "coeffs", "center")

    def __init__(self, dim, order, coeffs, center=None):
        self.dim = dim
        self.order = order
        self.coeffs = coeffs
        self.center = center

    # ---------- constructors ----------

    @classmethod
    def constant(cls, dim, order, value):
        return cls(dim, order, {(0,) * dim: np.asarray(value, dtype=complex)})

    @classmethod
    def variable(cls, dim, order, index, value):
        """Seed jet of the coordinate function x_index at x_index = value."""
        if not (0 <= index < dim):
            raise DimensionMismatchError(f"variable index {index} out of range for dim {dim}")
        coeffs = {(0,) * dim: np.asarray(value, dtype=complex)}
        if order >= 1:
            e = tuple(1 if k == index else 0 for k in range(dim))
            coeffs[e] = np.complex128(1.0)
        return cls(dim, order, coeffs, center=value)

    # ---------- inspection ----------

    @property
    def value(self):
        """Constant term f(center)."""
        return self.coeffs.get((0,) * self.dim, np.complex128(0.0))

    def coeff(self, alpha):
        alpha = tuple(alpha)
        return self.coeffs.get(alpha, np.complex128(0.0))

    def derivative(self, alpha):
        """d^alpha f(center) = alpha! * c_alpha."""
        alpha = tuple(alpha)
        if sum(alpha) > self.order:
            raise JetOrderError(
                f"derivative {alpha} needs order {sum(alpha)}, jet has {self.order}"
            )
        return self.coeff(alpha) * _fact(alpha)

    def truncate(self, order):
        if order >= self.order:
            return self
        keep = {a: c for a, c in self.coeffs.items() if sum(a) <= order}
        return Jet(self.dim, order, keep, self.center)

    def partial(self, j):
        """Jet of the partial derivative along variable j (order drops by one)."""
        if self.order < 1:
            raise JetOrderError("cannot differentiate an order-0 jet")
        out = {}
        for a, c in self.coeffs.items():
            if a[j] >= 1:
                b = list(a)
                b[j] -= 1
                out[tuple(b)] = c * a[j]
        return Jet(self.dim, self.order - 1, out, self.center)

    def map_coeffs(self, fn):
        return Jet(self.dim, self.order, {a: fn(c) for a, c in self.coeffs.items()}, self.center)

    def conj(self):
        # variables are real, so conjugation acts coefficientwise
        return self.map_coeffs(np.conjugate)

    def where(self, mask, other):
        """Elementwise select: self where mask, `other` (Jet or scalar) elsewhere."""
        if not isinstance(other, Jet):
            other = Jet.constant(self.dim, self.order, other)
        order = min(self.order, other.order)
        keys = {a for a in self.coeffs if sum(a) <= order}
        keys |= {a for a in other.coeffs if sum(a) <= order}
        out = {}
        for a in keys:
            out[a] = np.where(mask, self.coeff(a), other.coeff(a))
        return Jet(self.dim, order, out, self.center)

    # ---------- ring operations ----------

    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.dim != self.dim:
                raise DimensionMismatchError(
                    f"jet dimensions differ: {self.dim} vs {other.dim}"
                )
            return other
        return Jet.constant(self.dim, self.order, other)

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        out = {}
        for a, c in self.coeffs.items():
            if sum(a) <= order:
                out[a] = c
        for a, c in other.coeffs.items():
            if sum(a) <= order:
                out[a] = out[a] + c if a in out else c
        return Jet(self.dim, order, out, self.center)

    __radd__ = __add__

    def __neg__(self):
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            val = np.asarray(other, dtype=complex)
            return self.map_coeffs(lambda c: c * val)
        other = self._coerce(other)
        order = min(self.order, other.order)
        out = {}
        for a, ca in self.coeffs.items():
            la = sum(a)
            if la > order:
                continue
            for b, cb in other.coeffs.items():
                if la + sum(b) > order:
                    continue
                key = tuple(x + y for x, y in zip(a, b))
                prod = ca * cb
                out[key] = out[key] + prod if key in out else prod
        return Jet(self.dim, order, out, self.center)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * (1.0 / np.asarray(other, dtype=complex))
        return self * other._reciprocal()

    def __rtruediv__(self, other):
        return self._reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, Jet):
            return (p * self.log()).exp()
        if isinstance(p, (int, np.integer)) or (isinstance(p, float) and p.is_integer()):
            p = int(p)
            if p < 0:
                return self._reciprocal() ** (-p)
            out = Jet.constant(self.dim, self.order, 1.0)
            base = self
            while p:
                if p & 1:
                    out = out * base
                base = base * base if p > 1 else base
                p >>= 1
            return out
        return self._analytic_power(float(p))

    def __rpow__(self, base):
        # base ** jet = exp(jet * log base)
        return (self * np.log(base)).exp()

    # ---------- composition with analytic primitives ----------

    def _nilpotent_split(self):
        c = self.value
        w = dict(self.coeffs)
        w.pop((0,) * self.dim, None)
        return c, Jet(self.dim, self.order, w, self.center)

    def _compose_series(self, series):
        """sum_k series[k] * (self - const)^k, truncated.  series[k] = g^(k)(c)/k!."""
        c, w = self._nilpotent_split()
        out = Jet.constant(self.dim, self.order, series[-1])
        for k in range(len(series) - 2, -1, -1):
            out = out * w + series[k]
        return out

    def _series_from_derivs(self, g_derivs):
        """Taylor coefficients g^(k)(c)/k! from a list of derivative arrays."""
        return [g / math.factorial(k) for k, g in enumerate(g_derivs)]

    def _reciprocal(self):
        c = self.value
        if np.any(np.abs(c) == 0.0):
            raise NonAnalyticError("reciprocal of a jet with vanishing constant term")
        series = [(-1.0) ** k / c ** (k + 1) for k in range(self.order + 1)]
        return self._compose_series(series)

    def _analytic_power(self, p):
        c = self.value
        if np.any(np.abs(c) == 0.0):
            raise NonAnalyticError(f"power {p} of a jet with vanishing constant term")
        series = []
        coef = np.ones_like(c)
        for k in range(self.order + 1):
            series.append(coef * c ** (p - k))
            coef = coef * (p - k) / (k + 1)
        return self._compose_series(series)

    def exp(self):
        e = np.exp(self.value)
        return self._compose_series([e / math.factorial(k) for k in range(self.order + 1)])

    def log(self):
        c = self.value
        if np.any(np.abs(c) == 0.0):
            raise NonAnalyticError("log of a jet with vanishing constant term")
        series = [np.log(c)]
        for k in range(1, self.order + 1):
            series.append((-1.0) ** (k - 1) / (k * c**k))
        return self._compose_series(series)

    def sqrt(self):
        return self._analytic_power(0.5)

    def sin(self):
        c = self.value
        series = [np.sin(c + k * np.pi / 2) / math.factorial(k) for k in range(self.order + 1)]
        return self._compose_series(series)

    def cos(self):
        c = self.value
        series = [np.cos(c + k * np.pi / 2) / math.factorial(k) for k in range(self.order + 1)]
        return self._compose_series(series)

    def sinh(self):
        c = self.value
        sh, ch = np.sinh(c), np.cosh(c)
        series = [
            (sh if k % 2 == 0 else ch) / math.factorial(k) for k in range(self.order + 1)
        ]
        return self._compose_series(series)

    def cosh(self):
        c = self.value
        sh, ch = np.sinh(c), np.cosh(c)
        series = [
            (ch if k % 2 == 0 else sh) / math.factorial(k) for k in range(self.order + 1)
        ]
        return self._compose_series(series)

    def tanh(self):
        return self.sinh() / self.cosh()

    def tan(self):
        return self.sin() / self.cos()

    def arctan(self):
        # d/dt arctan(u) = u'/(1+u^2); integrate the series of the derivative
        c = self.value
        series = [np.arctan(c)]
        if self.order >= 1:
            # Taylor coefficients of 1/(1+t^2) at c via the jet machinery itself
            t = Jet.variable(1, self.order - 1, 0, c)
            recip = (1.0 + t * t)._reciprocal()
            for k in range(1, self.order + 1):
                series.append(recip.coeff((k - 1,)) / k)
        return self._compose_series(series)

    def absolute(self):
        c = self.value
        if np.any(np.abs(np.imag(np.atleast_1d(c))) > _ZERO_IM_TOL) or any(
            np.any(np.abs(np.imag(np.atleast_1d(v))) > _ZERO_IM_TOL)
            for v in self.coeffs.values()
        ):
            raise NonAnalyticError("|.| of a complex-valued jet is not analytic")
        if np.any(np.abs(c) == 0.0):
            raise NonAnalyticError("|.| is not analytic where the value vanishes")
        return self * np.sign(np.real(c))

    __abs__ = absolute

    # ---------- numpy interoperability ----------

    _UFUNC_METHODS = None

    def __array_ufunc__(self, ufunc, method, *inputs, **kwargs):
        if method != "__call__" or kwargs.get("out") is not None:
            return NotImplemented
        if Jet._UFUNC_METHODS is None:
            Jet._UFUNC_METHODS = {
                np.exp: Jet.exp,
                np.log: Jet.log,
                np.sqrt: Jet.sqrt,
                np.sin: Jet.sin,
                np.cos: Jet.cos,
                np.sinh: Jet.sinh,
                np.cosh: Jet.cosh,
                np.tanh: Jet.tanh,
                np.tan: Jet.tan,
                np.arctan: Jet.arctan,
                np.absolute: Jet.absolute,
                np.conjugate: Jet.conj,
                np.negative: Jet.__neg__,
                np.positive: lambda j: j,
                np.square: lambda j: j * j,
                np.reciprocal: Jet._reciprocal,
            }
        if ufunc in Jet._UFUNC_METHODS and len(inputs) == 1:
            return Jet._UFUNC_METHODS[ufunc](inputs[0])
        binary = {
            np.add: lambda a, b: a + b,
            np.subtract: lambda a, b: a - b,
            np.multiply: lambda a, b: a * b,
            np.true_divide: lambda a, b: a / b,
            np.power: lambda a, b: a**b,
        }
        if ufunc in binary and len(inputs) == 2:
            a, b = inputs
            if isinstance(a, Jet):
                if ufunc is np.power and not isinstance(b, Jet):
                    return a ** (b if np.ndim(b) == 0 else float(b))
                return binary[ufunc](a, a._coerce(b))
            if isinstance(b, Jet):
                if ufunc is np.add:
                    return b + a
                if ufunc is np.multiply:
                    return b * a
                if ufunc is np.subtract:
                    return (-b) + a
                if ufunc is np.true_divide:
                    return b._reciprocal() * a
                if ufunc is np.power:
                    # a**jet = exp(jet*log(a))
                    return (b * np.log(np.asarray(a, dtype=complex))).exp()
            return NotImplemented
        return NotImplemented

    def __repr__(self):
        nz = sum(1 for c in self.coeffs.values() if np.any(c != 0))
        return f"Jet(dim={self.dim}, order={self.order}, nonzero={nz})"


def seed_jets(center, order):
    """Seed jets for each coordinate at `center` (sequence of scalars/arrays)."""
    comps = list(center)
    dim = len(comps)
    return [Jet.variable(dim, order, j, comps[j]) for j in range(dim)]


def jet_of(f, center, order):
    """Jet of the smooth map f at `center`.

    f receives a list of per-coordinate seed jets and must be built from
    arithmetic and the supported analytic primitives; coefficients are then
    exact for the composition tree.  center is a sequence (length = dim);
    entries may be arrays for a batched jet.
    """
    if order < 0:
        raise JetOrderError("jet order must be >= 0")
    center = [np.asarray(c, dtype=float) for c in np.atleast_1d(center)] if np.ndim(
        center
    ) == 0 else [np.asarray(c) for c in center]
    seeds = seed_jets(center, order)
    out = f(seeds)
    if not isinstance(out, Jet):
        out = Jet.constant(len(seeds), order, out)
    out.center = center
    return out


def derivative_map(f, alpha):
    """Evaluator of the partial derivative d^alpha f.

    The returned callable accepts the same per-coordinate component list as
    f.  On numeric components it returns d^alpha f at that point (batched
    over arrays).  On seed-jet components (as handed out by jet_of) it
    returns the jet of d^alpha f at the seeds' centers, so derivative maps
    can be multiplied, summed, and re-expanded like any other evaluator.
    Interior jets that are not seeds are rejected: the chain rule for a
    general jet argument is not reconstructible from point evaluations.
    """
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ParameterError(f"derivative multi-index must be >= 0, got {alpha}")
    total = sum(alpha)

    def df(comps):
        comps = list(comps)
        if len(comps) != len(alpha):
            raise DimensionMismatchError(
                f"expected {len(alpha)} components, got {len(comps)}",
                expected=len(alpha),
                got=len(comps),
            )
        jets = [c for c in comps if isinstance(c, Jet)]
        if not jets:
            jet = jet_of(f, [np.asarray(c, dtype=float) for c in comps], total)
            return jet.derivative(alpha)
        order = min(j.order for j in jets)
        centers = []
        for j, c in enumerate(comps):
            if isinstance(c, Jet):
                e = tuple(1 if k == j else 0 for k in range(len(comps)))
                seed = np.all(np.asarray(c.coeff(e)) == 1.0) and not any(
                    np.any(v != 0)
                    for g, v in c.coeffs.items()
                    if sum(g) >= 1 and g != e
                )
                if not seed:
                    raise ParameterError(
                        "derivative maps accept seed jets only; compose before expanding"
                    )
                centers.append(np.real(np.asarray(c.value)))
            else:
                centers.append(np.asarray(c, dtype=float))
        base = jet_of(f, centers, order + total)
        coeffs = {}
        for gamma in multi_indices(len(comps), order):
            shift = tuple(g + a for g, a in zip(gamma, alpha))
            coeffs[gamma] = base.coeff(shift) * (_fact(shift) // _fact(gamma))
        return Jet(len(comps), order, coeffs, center=centers)

    return df


def apply_quadratic_power(Q, j, f, center):
    """Value of (<Q^{-1} D, D>/(2i))^j f at `center`, D_k = (1/i) d_k.

    Expanded by the multinomial identity over the distinct second-order
    letters B_kk d_k^2 and 2 B_kl d_k d_l (k<l), B = Q^{-1}, evaluated on a
    single jet of order 2j; exact for jet-exact f.
    """
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise DimensionMismatchError(f"Q must be square, got shape {Q.shape}")
    if not np.allclose(Q, Q.T, rtol=1e-12, atol=1e-12):
        raise ParameterError("Q must be symmetric")
    n = Q.shape[0]
    if j < 0:
        raise JetOrderError("power j must be >= 0")
    det = np.linalg.det(Q)
    if abs(det) < 1e-300:
        raise SingularMatrixError("Q is singular")
    B = np.linalg.inv(Q)

    jet = jet_of(f, center, 2 * j)
    if j == 0:
        return complex(jet.value) if np.ndim(jet.value) == 0 else jet.value

    letters = []
    for k in range(n):
        if B[k, k] != 0.0:
            m = [0] * n
            m[k] = 2
            letters.append((tuple(m), B[k, k]))
    for k in range(n):
        for l in range(k + 1, n):
            if B[k, l] != 0.0:
                m = [0] * n
                m[k] += 1
                m[l] += 1
                letters.append((tuple(m), 2.0 * B[k, l]))

    total = 0.0 + 0.0j
    for gamma in multi_indices_of_order(max(len(letters), 1), j):
        if len(letters) == 0:
            break
        coef = math.factorial(j)
        beta = [0] * n
        q_prod = 1.0
        for g, (m, q) in zip(gamma, letters):
            if g:
                coef //= math.factorial(g)
                q_prod *= q**g
                for axis in range(n):
                    beta[axis] += g * m[axis]
        total = total + coef * q_prod * jet.derivative(tuple(beta))
    scale = (0.5j) ** j  # (-1)^j from D^2 -> -d^2 times (2i)^{-j}
    out = scale * total
    return complex(out) if np.ndim(out) == 0 else out
