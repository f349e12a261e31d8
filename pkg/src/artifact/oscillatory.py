"""Regularized oscillatory integrals, two flavors.

Type I pairs e^{i phi(x,xi)} sigma(x,xi) with a rapidly decaying factor u(x):

    I(phi, sigma, u) = lim_{eps->0} iint e^{i phi} sigma(x,xi) chi(eps xi) u(x) dx dxi.

Type II integrates e^{i phi(theta)} sigma(theta) over all of theta-space with a
joint cutoff chi(eps theta), assuming sigma in S^m_rho and phi homogeneous of
degree mu with rho + mu > 1.

Both are computed by quadrature at each eps of a decreasing schedule followed
by polynomial extrapolation at eps = 0; the reported residual combines the
extrapolation step size with a coarse-vs-fine quadrature comparison.  For
type II an integration-by-parts operator rewrites the integrand as L^T g with

    L g = chi0 g - sum_j D_j(c_j g),    c_j = (1 - chi0) d_j phi / |grad phi|^2,

which leaves every regularized integral unchanged (exact identity, applied
under the integral sign at each eps) while improving decay by (rho+mu-1) per
power, so the quadrature domain stays small.  Derivatives come from jets, so
the transformed integrand is exact up to rounding.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .core import CutoffFunction, Jet, seed_jets
from .errors import DivergenceError, ParameterError

__all__ = [
    "Phase",
    "QuadratureSpec",
    "OscResult",
    "eval_osc_type1",
    "eval_osc_type2",
    "ibp_transform",
    "neville_limit",
]

_POINT_BUDGET = 8_000_000  # max quadrature nodes per eps evaluation
_CHUNK = 1 << 15


@dataclass(frozen=True)
class Phase:
    """Real phase function, positively homogeneous in its theta block.

    fn maps a list of coordinate components (arrays or jets, x block first,
    then theta) to the phase value.  n_x = 0 means a pure theta phase.
    Homogeneity of the declared degree and nonvanishing of grad_theta away
    from theta = 0 are spot-checked on random samples at construction.
    """

    fn: object
    degree: float
    n_theta: int
    n_x: int = 0

    def __post_init__(self):
        if self.degree <= 0:
            raise ParameterError(f"homogeneity degree must be > 0, got {self.degree}")
        if self.n_theta < 1:
            raise ParameterError("need at least one theta variable")
        self._spot_check()

    @property
    def dim(self):
        return self.n_x + self.n_theta

    def value(self, comps):
        out = self.fn(list(comps))
        if isinstance(out, Jet):
            return out
        return np.asarray(out, dtype=float)

    def _spot_check(self, n_samples=64, tol=1e-9):
        rng = np.random.default_rng(12345)
        x = rng.uniform(-2.0, 2.0, size=(n_samples, self.n_x))
        th = rng.normal(size=(n_samples, self.n_theta))
        th /= np.linalg.norm(th, axis=1, keepdims=True)
        comps = [x[:, j] for j in range(self.n_x)] + [
            th[:, j] for j in range(self.n_theta)
        ]
        base = np.asarray(self.fn(list(comps)), dtype=float)
        for t in (0.5, 2.0, 3.7):
            scaled = [x[:, j] for j in range(self.n_x)] + [
                t * th[:, j] for j in range(self.n_theta)
            ]
            val = np.asarray(self.fn(list(scaled)), dtype=float)
            err = np.max(np.abs(val - t**self.degree * base))
            if err > tol * (1.0 + t**self.degree * np.max(np.abs(base))):
                raise ParameterError(
                    f"phase not homogeneous of degree {self.degree}: "
                    f"scaling error {err:.2e} at t={t}"
                )
        grads = self.theta_gradient(comps)
        gnorm = np.sqrt(sum(np.abs(g) ** 2 for g in grads))
        if np.min(gnorm) < 1e-9:
            raise ParameterError("phase gradient vanishes on the unit sphere")

    def theta_gradient(self, comps):
        """[d phi/d theta_j] at the given points (arrays in, arrays out)."""
        return self._block_gradient(comps, self.n_x, self.n_theta)

    def x_gradient(self, comps):
        """[d phi/d x_j] at the given points."""
        return self._block_gradient(comps, 0, self.n_x)

    def _block_gradient(self, comps, start, count):
        arrays = [np.asarray(c, dtype=float) for c in comps]
        jets = seed_jets(arrays, 1)
        ph = self.fn(jets)
        if not isinstance(ph, Jet):
            # phase independent of all variables -- gradient is zero
            return [np.zeros_like(arrays[0]) for _ in range(count)]
        return [
            np.real(np.atleast_1d(ph.coeff(_unit(self.dim, start + j))))
            for j in range(count)
        ]


def _unit(dim, j):
    e = [0] * dim
    e[j] = 1
    return tuple(e)


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls the eps schedule, extrapolation, cutoff, and accelerator."""

    eps_schedule: tuple = tuple(2.0**-k for k in range(3, 11))
    extrapolation_order: int = 3
    cutoff: CutoffFunction = field(default_factory=lambda: CutoffFunction("bump", 1.0, 2.0))
    ibp_power: int | None = None  # None = choose from declared orders; 0 = off
    oversample: float = 1.2
    max_radius: float = 64.0
    tol: float = 3e-6

    def __post_init__(self):
        eps = tuple(float(e) for e in self.eps_schedule)
        if len(eps) < 2 or any(e <= 0 for e in eps):
            raise ParameterError("eps schedule must be positive with length >= 2")
        if any(b >= a for a, b in zip(eps, eps[1:])):
            raise ParameterError("eps schedule must be strictly decreasing")
        if self.extrapolation_order >= len(eps):
            raise ParameterError("extrapolation order must be < schedule length")
        object.__setattr__(self, "eps_schedule", eps)


@dataclass
class OscResult:
    """Extrapolated value with residual and the per-eps convergence table."""

    value: complex
    residual: float
    table: list  # rows (eps, value, running extrapolation residual)
    quadrature_error: float

    def to_dict(self):
        return {
            "value_re": float(np.real(self.value)),
            "value_im": float(np.imag(self.value)),
            "residual": float(self.residual),
            "per_epsilon_table": [
                {
                    "eps": float(e),
                    "value_re": float(np.real(v)),
                    "value_im": float(np.imag(v)),
                    "residual": float(r),
                }
                for (e, v, r) in self.table
            ],
        }


def neville_limit(eps, vals, order):
    """Polynomial extrapolation of (eps_k, v_k) to eps = 0.

    For each prefix uses the last (order+1) points; returns the final limit
    and the list of per-prefix residuals |limit_k - limit_{k-1}|.
    """
    eps = np.asarray(eps, dtype=float)
    vals = np.asarray(vals, dtype=complex)
    limits = []
    for k in range(len(eps)):
        lo = max(0, k - order)
        e = eps[lo : k + 1]
        v = vals[lo : k + 1].copy()
        # Neville tableau evaluated at 0
        for j in range(1, len(e)):
            for i in range(len(e) - j):
                v[i] = (e[i + j] * v[i] - e[i] * v[i + 1]) / (e[i + j] - e[i])
        limits.append(v[0])
    residuals = [np.inf] + [abs(limits[k] - limits[k - 1]) for k in range(1, len(limits))]
    return limits[-1], residuals


def _declare_divergence(values, residuals, table, quad_noise=0.0):
    """Growing tail of extrapolation residuals means no limit: refuse a value.

    Residuals below the quadrature noise floor never count as growth; an
    integral whose true value is 0 extrapolates to pure grid noise.
    """
    if len(residuals) < 4:
        return
    r = residuals[-3:]
    noise = max(1e-13 * max(abs(v) for v in values), 0.5 * quad_noise, 1e-200)
    if r[2] > noise and r[1] > r[0] and r[2] > r[1]:
        raise DivergenceError(
            "regularized values do not converge: last three extrapolation "
            f"residuals increase ({r[0]:.3e}, {r[1]:.3e}, {r[2]:.3e})",
            table=table,
        )


# ---------------------------------------------------------------------------
# integration by parts accelerator (theta-only phases)


def ibp_transform(phase, integrand, power, inner_cutoff=None):
    """The integrand L^power(integrand), as a callable on point arrays.

    L is the transpose of the operator that reproduces e^{i phi} (see module
    docstring); each application costs one jet order, so the integrand is
    evaluated on jets of order `power`.  power = 0 returns plain evaluation.
    The returned callable maps an (N, n_theta) array to N complex values.
    """
    if phase.n_x != 0:
        raise ParameterError("integration by parts accelerator needs a theta-only phase")
    if power < 0:
        raise ParameterError("ibp power must be >= 0")
    # wide transition region: repeated L applications differentiate chi0 up
    # to `power` times, and a narrow step would put huge sharp spikes into
    # the integrand that quadrature would then have to resolve
    chi0 = inner_cutoff if inner_cutoff is not None else CutoffFunction("bump", 1.0, 6.0)
    n = phase.n_theta

    def apply(points):
        points = np.asarray(points, dtype=float).reshape(-1, n)
        out = np.empty(points.shape[0], dtype=complex)
        for lo in range(0, points.shape[0], _CHUNK):
            sl = slice(lo, min(lo + _CHUNK, points.shape[0]))
            out[sl] = _lt_chunk(phase, integrand, power, chi0, points[sl])
        return out

    return apply


def _lt_chunk(phase, integrand, power, chi0, pts):
    comps = [pts[:, j] for j in range(pts.shape[1])]
    if power == 0:
        vals = integrand(comps)
        if isinstance(vals, Jet):
            vals = vals.value
        return np.broadcast_to(np.asarray(vals, dtype=complex), pts.shape[0]).copy()
    seeds = seed_jets(comps, power)
    h = integrand(seeds)
    if not isinstance(h, Jet):
        h = Jet.constant(len(seeds), power, np.broadcast_to(np.asarray(h, dtype=complex), pts.shape[0]).copy())
    seeds_hi = seed_jets(comps, power + 1)
    ph = phase.fn(seeds_hi)
    grad = [ph.partial(j) for j in range(len(seeds))]
    norm2 = grad[0] * grad[0]
    for g in grad[1:]:
        norm2 = norm2 + g * g
    chi_jet = chi0(seeds_hi)
    # avoid dividing by |grad phi|^2 where it vanishes (inside the chi0 = 1
    # plateau the coefficient is multiplied by an exact zero anyway)
    small = np.abs(np.atleast_1d(norm2.value)) < 1e-12
    norm2 = norm2.where(~small, 1.0)
    coeffs = [((1.0 - chi_jet) * g) / norm2 for g in grad]
    for _ in range(power):
        terms = chi_jet * h
        for j, c in enumerate(coeffs):
            terms = terms - (c * h).partial(j) * (-1j)
        h = terms
    return np.broadcast_to(np.atleast_1d(h.value), pts.shape[0]).astype(complex)


# ---------------------------------------------------------------------------
# shared quadrature helpers


def _ray_directions(n, count=None):
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if count is None:
        count = 16 if n == 2 else 26
    if n == 2:
        ang = np.linspace(0, 2 * np.pi, count, endpoint=False)
        return np.stack([np.cos(ang), np.sin(ang)], axis=1)
    rng = np.random.default_rng(7)
    d = rng.normal(size=(count, n))
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def _fit_decay_radius(eval_abs, n_dim, tol_tail, r_max, r_min=2.0):
    """Smallest radius R >= r_min with estimated tail integral below tol_tail.

    eval_abs(points) -> |integrand|; fits |g| ~ A r^-p on probe shells and
    bounds the tail by A R^(n-p)/(p-n).  Returns (R, ok).
    """
    dirs = _ray_directions(n_dim)
    radii = r_min * 2.0 ** (0.5 * np.arange(0, 2 * max(1, int(np.log2(r_max / r_min))) + 1))
    radii = radii[radii <= r_max]
    if len(radii) < 3:
        radii = np.array([r_min, 0.5 * (r_min + r_max), r_max])
    shell_max = []
    for r in radii:
        vals = eval_abs(r * dirs)
        shell_max.append(max(np.max(np.abs(vals)), 1e-300))
    shell_max = np.array(shell_max)
    peak = float(np.max(shell_max))
    area = 2.0 if n_dim == 1 else (2 * np.pi if n_dim == 2 else 4 * np.pi)
    for k in range(1, len(radii)):
        r, m = radii[k], shell_max[k]
        # collapsed to numerical noise: no fit needed, the tail is gone
        if m < 1e-10 * peak and area * m * r**n_dim < 0.1 * tol_tail:
            return float(r), True
        # local log-log slope over a trailing window (a global fit would be
        # dominated by shells already at the noise floor)
        kk = max(0, k - 4)
        slope, _ = np.polyfit(np.log(radii[kk : k + 1]), np.log(shell_max[kk : k + 1]), 1)
        p = -slope
        if p > n_dim + 0.1 and area * m * r**n_dim / (p - n_dim) < tol_tail:
            return float(r), True
    return float(r_max), False


def _tensor_grid(radius, spacing, n):
    m = max(8, int(np.ceil(2 * radius / spacing)))
    m += m % 2  # even, so the stride-2 subgrid is itself a trapezoid grid
    ax = np.linspace(-radius, radius, m + 1)
    w = np.full(m + 1, ax[1] - ax[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    axes = [ax] * n
    weights = [w] * n
    mesh = np.meshgrid(*axes, indexing="ij")
    wmesh = np.meshgrid(*weights, indexing="ij")
    wtot = wmesh[0]
    for ww in wmesh[1:]:
        wtot = wtot * ww
    pts = np.stack([m_.ravel() for m_ in mesh], axis=1)
    return pts, wtot.ravel(), (m + 1,) * n


def _nested_sums(values_flat, weights_flat, shape):
    """Trapezoid sum on the full grid and on its stride-2 subgrid.

    The subgrid shares every other node, so the coarse value costs nothing
    beyond a strided re-weighting; their difference is a conservative
    quadrature error estimate.
    """
    v = values_flat.reshape(shape)
    w = weights_flat.reshape(shape)
    fine = complex(np.sum(v * w))
    sl = tuple(slice(None, None, 2) for _ in shape)
    vc = v[sl]
    wc = np.ones(vc.shape)
    for ax, m in enumerate(vc.shape):
        aw = np.full(m, 2.0)
        aw[0] = aw[-1] = 1.0
        shp = [1] * len(vc.shape)
        shp[ax] = m
        wc = wc * aw.reshape(shp)
    # base weight of the coarse grid = (2 dx)^n / 2^n corners
    base = w[(0,) * len(shape)] * 2 ** len(shape)  # corner fine weight = (dx/2)^n
    coarse = complex(np.sum(vc * wc * base))
    return fine, abs(fine - coarse)


def _max_gradient(phase, comps_builder, radius, n):
    dirs = _ray_directions(n)
    pts = radius * dirs
    comps = comps_builder(pts)
    grads = phase.theta_gradient(comps)
    return float(np.max(np.sqrt(sum(np.abs(g) ** 2 for g in grads))))


# ---------------------------------------------------------------------------
# type II:  integral of e^{i phi(theta)} sigma(theta) d theta


def eval_osc_type2(phase, sigma, spec=None, order=0.0, rho=1.0):
    """Regularized integral of e^{i phi} sigma over theta-space.

    sigma is a callable on component lists with declared symbol order and
    rho (derivative gain); well-posedness needs rho + mu > 1.  The cutoff is
    applied jointly in all theta variables and the integration-by-parts
    accelerator is applied to the product sigma * chi(eps theta), which keeps
    every per-eps value equal to the plain regularized integral.
    """
    spec = spec or QuadratureSpec()
    if phase.n_x != 0:
        raise ParameterError("type II phases depend on theta only")
    gain = rho + phase.degree - 1.0
    if gain <= 0:
        raise ParameterError(
            f"ill-posed: rho + mu = {rho + phase.degree} must exceed 1"
        )
    n = phase.n_theta
    chi0 = CutoffFunction("bump", 1.0, 6.0)
    width = chi0.outer - chi0.inner

    def probe_for(pw):
        if pw > 0:
            fn = ibp_transform(phase, sigma, pw, inner_cutoff=chi0)
            return fn, lambda pts: np.abs(fn(pts))

        def plain_abs(pts):
            comps = [pts[:, j] for j in range(n)]
            v = sigma(comps)
            if isinstance(v, Jet):
                v = v.value
            return np.abs(np.broadcast_to(np.asarray(v, dtype=complex), pts.shape[0]))

        return None, plain_abs

    if spec.ibp_power is not None:
        power = spec.ibp_power
        transformed, sat_abs = probe_for(power)
        r_decay, decay_ok = _fit_decay_radius(
            sat_abs, n, 10 * spec.tol, spec.max_radius, r_min=1.2 * chi0.outer
        )
    else:
        # choose the power that minimizes quadrature work: more parts-taking
        # shrinks the domain (polynomial symbols even truncate to compact
        # support) but raises the integrand's bandwidth like power^2/width
        t_min = max(1, math.ceil((order + n + 2.5) / gain))
        best = None
        for pw in range(t_min, t_min + 4):
            fn, sat_abs = probe_for(pw)
            r_pw, ok = _fit_decay_radius(
                sat_abs, n, 10 * spec.tol, spec.max_radius, r_min=1.2 * chi0.outer
            )
            if not ok:
                continue
            b_cut = 8.0 * pw**2 / width
            nodes = (2 * r_pw * max(r_pw, b_cut) * spec.oversample / np.pi) ** n
            if best is None or nodes < best[0]:
                best = (nodes, pw, fn, r_pw, ok)
        if best is None:
            power = t_min + 3
            transformed, sat_abs = probe_for(power)
            r_decay, decay_ok = _fit_decay_radius(
                sat_abs, n, 10 * spec.tol, spec.max_radius, r_min=1.2 * chi0.outer
            )
        else:
            _, power, transformed, r_decay, decay_ok = best

    values = []
    table = []
    cache = {}
    for eps in spec.eps_schedule:
        support = spec.cutoff.outer / eps
        plateau = spec.cutoff.inner / eps
        radius = min(support, r_decay) if decay_ok else min(support, spec.max_radius)
        radius = max(radius, 1.25 * chi0.outer)
        saturated = decay_ok and plateau >= radius
        key = ("sat", radius) if saturated else ("eps", eps, radius)
        if key in cache:
            val, quad_err = cache[key]
        else:
            val, quad_err = _type2_value(
                phase, sigma, spec, power, eps, radius, saturated, transformed, chi0
            )
            cache[key] = (val, quad_err)
        values.append(val)
        limit_k, residuals = neville_limit(
            spec.eps_schedule[: len(values)], values, spec.extrapolation_order
        )
        res_k = residuals[-1] if len(values) > 1 else np.inf
        table.append((eps, val, res_k))
        _declare_divergence(values, residuals, table, max(q for _, q in cache.values()))

    limit, residuals = neville_limit(spec.eps_schedule, values, spec.extrapolation_order)
    quad_err = max(cache[k][1] for k in cache)
    final_res = max(residuals[-1], quad_err)
    return OscResult(limit, final_res, table, quad_err)


def _type2_value(phase, sigma, spec, power, eps, radius, saturated, transformed, chi0):
    n = phase.n_theta
    omega = max(_max_gradient(phase, lambda p: [p[:, j] for j in range(n)], radius, n), 1.0)
    # resolve both the phase oscillation and the spectral content of the
    # repeatedly differentiated inner cutoff (Gevrey bump: bandwidth grows
    # like power^2 / transition width)
    b_cut = 8.0 * power**2 / (chi0.outer - chi0.inner) if power > 0 else 0.0
    spacing = np.pi / (max(omega, b_cut) * spec.oversample)
    count = (2 * radius / spacing + 1) ** n
    if count > _POINT_BUDGET:
        raise ParameterError(
            f"quadrature infeasible: ~{count:.2e} nodes needed at radius {radius:.1f}"
        )
    pts, w, shape = _tensor_grid(radius, spacing, n)
    comps = [pts[:, j] for j in range(n)]
    ph = np.asarray(phase.fn(comps), dtype=float)
    osc = np.exp(1j * ph)
    if power == 0:
        g = sigma(comps)
        if isinstance(g, Jet):
            g = g.value
        g = np.broadcast_to(np.asarray(g, dtype=complex), pts.shape[0])
        chi = spec.cutoff([eps * c for c in comps])
        vals = osc * g * chi
    elif saturated:
        vals = osc * transformed(pts)
    else:
        def with_cutoff(args):
            return sigma(args) * spec.cutoff([eps * a for a in args])

        vals = osc * ibp_transform(phase, with_cutoff, power, inner_cutoff=chi0)(pts)
    return _nested_sums(vals, w, shape)


# ---------------------------------------------------------------------------
# type I:  iint e^{i phi(x, xi)} sigma(x, xi) u(x) dx dxi


def eval_osc_type1(phase, sigma, u, spec=None, order=0.0):
    """Regularized pairing with a rapidly decaying factor u(x).

    No derivative accelerator here: after the x-integral the integrand is
    rapidly decaying in xi (u beats the polynomial growth of sigma), so the
    xi-domain is probed and capped, and small eps saturate.
    """
    spec = spec or QuadratureSpec()
    if phase.n_x < 1:
        raise ParameterError("type I phases carry at least one x variable")
    nx, nxi = phase.n_x, phase.n_theta

    x_radius = _decay_radius_of(u, nx)

    def xint_abs(xi_pts):
        # |integral over x| at probe xi values, on a modest x grid
        out = np.empty(xi_pts.shape[0])
        for i, xi in enumerate(xi_pts):
            sp = np.pi / (max(np.linalg.norm(xi), 1.0) * spec.oversample)
            pts, w, _ = _tensor_grid(x_radius, min(sp, x_radius / 24), nx)
            comps = [pts[:, j] for j in range(nx)] + [np.full(pts.shape[0], c) for c in xi]
            ph = np.asarray(phase.fn(comps), dtype=float)
            sg = sigma(comps)
            if isinstance(sg, Jet):
                sg = sg.value
            uu = u([pts[:, j] for j in range(nx)])
            val = np.sum(w * np.exp(1j * ph) * np.asarray(sg) * np.asarray(uu))
            if nx == 1:
                # slowly decaying u leaves an O(u(R)/|xi|) truncation floor
                # that would mask the xi-decay being measured
                val += _endpoint_tail(phase, sigma, u, x_radius, xi)
            out[i] = abs(val)
        return out

    xi_cap, decay_ok = _fit_decay_radius(xint_abs, nxi, spec.tol, spec.max_radius)

    # worst-case node count over the eps schedule; slowly decaying u (the
    # probe never reached its floor) is truncated further until the tensor
    # grid fits the budget -- the xi block is never shrunk, since truncating
    # oscillation in xi loses the cancellation that defines the limit
    xi_worst = xi_cap if decay_ok else min(
        spec.cutoff.outer / min(spec.eps_schedule), spec.max_radius
    )
    while x_radius > 8.0 and _type1_nodes(x_radius, xi_worst, nx, nxi, spec) > _POINT_BUDGET:
        x_radius *= 0.85

    values = []
    table = []
    cache = {}
    for eps in spec.eps_schedule:
        support = spec.cutoff.outer / eps
        plateau = spec.cutoff.inner / eps
        radius = min(support, xi_cap) if decay_ok else min(support, spec.max_radius)
        saturated = decay_ok and plateau >= radius
        key = ("sat", radius) if saturated else ("eps", eps, radius)
        if key in cache:
            val, qerr = cache[key]
        else:
            val, qerr = _type1_value(phase, sigma, u, spec, eps, radius, x_radius, saturated)
            cache[key] = (val, qerr)
        values.append(val)
        _, residuals = neville_limit(
            spec.eps_schedule[: len(values)], values, spec.extrapolation_order
        )
        table.append((eps, val, residuals[-1] if len(values) > 1 else np.inf))
        _declare_divergence(values, residuals, table, max(q for _, q in cache.values()))

    limit, residuals = neville_limit(spec.eps_schedule, values, spec.extrapolation_order)
    quad_err = max(cache[k][1] for k in cache)
    return OscResult(limit, max(residuals[-1], quad_err), table, quad_err)


def _endpoint_tail(phase, sigma, u, R, xi):
    """First-order parts estimate of the two x-tails cut off at +-R (1-d x).

    int_R^inf e^{i phi} g dx ~ -e^{i phi(R)} g(R) / (i d_x phi(R)) when the
    phase is non-stationary beyond R.  Near-stationary endpoints are skipped.
    """
    corr = 0.0 + 0.0j
    for s in (1.0, -1.0):
        comps = [np.array([s * R])] + [np.array([float(c)]) for c in np.atleast_1d(xi)]
        dphi = float(phase.x_gradient(comps)[0][0])
        if abs(dphi) < 1e-6:
            continue
        ph = float(np.asarray(phase.fn(comps)).ravel()[0])
        sg = sigma(comps)
        if isinstance(sg, Jet):
            sg = sg.value
        uu = np.asarray(u([np.array([s * R])]))
        g = complex(np.asarray(sg).ravel()[0]) * complex(uu.ravel()[0])
        corr += -s * np.exp(1j * ph) * g / (1j * dphi)
    return corr


def _decay_radius_of(u, nx, tol=1e-11):
    dirs = _ray_directions(nx)
    peak = float(np.max(np.abs(np.asarray(u([np.zeros(1)] * nx)))))
    peak = max(peak, 1e-300)
    for r in 2.0 ** np.arange(0, 9):
        pts = r * dirs
        vals = np.abs(np.asarray(u([pts[:, j] for j in range(nx)])))
        if np.max(vals) < tol * peak:
            return float(max(r, 2.0))
    return 256.0


def _type1_spacings(x_radius, xi_radius, spec):
    # x resolves the phase's xi-frequencies and vice versa (e.g. e^{ix.xi})
    dx = np.pi / (max(xi_radius, 1.0) * spec.oversample)
    dxi = np.pi / (max(x_radius, 1.0) * spec.oversample)
    return dx, dxi


def _type1_nodes(x_radius, xi_radius, nx, nxi, spec):
    dx, dxi = _type1_spacings(x_radius, xi_radius, spec)
    return (2 * x_radius / dx + 1) ** nx * (2 * xi_radius / dxi + 1) ** nxi


def _even_subgrid(shape):
    # points of a flattened tensor grid whose every axis index is even
    idx = np.unravel_index(np.arange(int(np.prod(shape))), shape)
    mask = np.ones(idx[0].shape, dtype=bool)
    for ax in idx:
        mask &= ax % 2 == 0
    return mask


def _type1_value(phase, sigma, u, spec, eps, xi_radius, x_radius, saturated):
    nx, nxi = phase.n_x, phase.n_theta
    dx, dxi = _type1_spacings(x_radius, xi_radius, spec)
    xpts, xw, xshape = _tensor_grid(x_radius, dx, nx)
    xipts, xiw, xishape = _tensor_grid(xi_radius, dxi, nxi)
    if xpts.shape[0] * xipts.shape[0] > _POINT_BUDGET:
        raise ParameterError("quadrature infeasible for type I at this resolution")
    xi_comps = [xipts[:, j][None, :] for j in range(nxi)]
    chi = 1.0 if saturated else np.asarray(
        spec.cutoff([eps * xipts[:, j] for j in range(nxi)]), dtype=float
    )[None, :]
    # stride-2 subgrids give the free coarse sum for the error estimate;
    # doubling the trapezoid weights is exact because endpoints stay put
    xmask, ximask = _even_subgrid(xshape), _even_subgrid(xishape)
    cxw, cxiw = 2.0**nx * xw[xmask], 2.0**nxi * xiw[ximask]
    fine = 0.0 + 0.0j
    coarse = 0.0 + 0.0j
    step = max(1, _CHUNK // max(xipts.shape[0], 1))
    for lo in range(0, xpts.shape[0], step):
        hi = min(lo + step, xpts.shape[0])
        comps = [xpts[lo:hi, j][:, None] for j in range(nx)] + xi_comps
        ph = np.asarray(phase.fn(comps), dtype=float)
        sg = sigma(comps)
        if isinstance(sg, Jet):
            sg = sg.value
        uu = np.asarray(u([xpts[lo:hi, j][:, None] for j in range(nx)]))
        block = np.exp(1j * ph) * np.asarray(sg) * uu * chi
        fine += xw[lo:hi] @ (block @ xiw)
        sub = xmask[lo:hi]
        if np.any(sub):
            coarse += cxw[xmask[:lo].sum():xmask[:hi].sum()] @ (block[sub][:, ximask] @ cxiw)
    return fine, abs(fine - coarse)
