"""Symbol classes on phase space and their numerical certification.

A Symbol wraps a phase-space evaluator together with its claimed order and
class data, in one of two families:

* "kohn-nirenberg": |d_x^alpha d_xi^beta sigma| <= C <xi>^(m - rho|beta| +
  delta|alpha|), with 0 <= delta < rho <= 1;
* "semiclassical": |d_z^gamma a| <= C h^(-delta|gamma|) m(z) against an
  order-function weight m, with 0 <= delta <= 1/2 and no decay gain in xi.

Membership is certified empirically: derivative suprema are measured on a
dyadic phase-space lattice and accepted only when they are finite and stable
under lattice refinement (estimate_seminorms).  On top of that sit the
constructive pieces of the calculus: Borel-style summation of a falling
sequence of symbols into a single representative (asymptotic_sum), global
ellipticity constants (check_elliptic), order-function growth fitting
(check_order_function), and a directional smoothing/characteristic split of
the cosphere (estimate_smo_char) expressed through ConicRegion patches.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import CutoffFunction, jet_of, japanese_bracket, multi_indices
from .core.jets import derivative_map
from .errors import DimensionMismatchError, ParameterError, SummationError

__all__ = [
    "KOHN_NIRENBERG",
    "SEMICLASSICAL",
    "Symbol",
    "OrderFunction",
    "ConicRegion",
    "SeminormReport",
    "EllipticityReport",
    "OrderFunctionReport",
    "SmoCharReport",
    "estimate_seminorms",
    "asymptotic_sum",
    "check_elliptic",
    "check_order_function",
    "estimate_smo_char",
    "symbol_product",
    "symbol_derivative",
    "unit_order_function",
    "bracket_order_function",
    "named_symbol",
    "template_names",
    "regions_contain",
]

KOHN_NIRENBERG = "kohn-nirenberg"
SEMICLASSICAL = "semiclassical"

# lattice geometry: dyadic frequency shells, unit directions, base-point box
_SHELL_EXPONENTS = tuple(range(13))  # |xi| = 2^k, k = 0..12
_X_HALF_WIDTH = 4.0
_RATIO_CAP = 1.1  # refined sup may exceed coarse sup by at most this factor
_SUP_FLOOR = 1e-250  # below this a supremum counts as exactly zero


def _components(v, n, label):
    """Split a point/batch into n per-coordinate scalars or arrays."""
    if isinstance(v, (list, tuple)):
        if len(v) != n:
            raise DimensionMismatchError(
                f"{label} needs {n} components, got {len(v)}", expected=n, got=len(v)
            )
        return list(v)
    arr = np.asarray(v)
    if n == 1:
        return [arr if arr.ndim else arr[()]]
    if arr.ndim == 0 or arr.shape[-1] != n:
        raise DimensionMismatchError(
            f"{label} needs {n} components on the last axis, got shape {arr.shape}",
            expected=n,
            got=arr.shape,
        )
    return [arr[..., k] for k in range(n)]


def bracket_of_components(comps):
    """sqrt(1 + sum c_k^2) for scalar, array, or jet components."""
    s = 0.0
    for c in comps:
        s = s + c * c
    return np.sqrt(1.0 + s)


@dataclass(eq=False)
class OrderFunction:
    """Positive weight m on R^dim with polynomially bounded translates.

    The defining estimate m(z1 - z2) <= C <z1>^N m(z2) is not assumed; fit
    the smallest workable N (and the constant) with check_order_function,
    which fills growth_power / growth_constant in place.
    """

    evaluator: object
    dim: int
    growth_power: float = None
    growth_constant: float = None
    name: str = ""

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        if z.ndim == 0:
            if self.dim != 1:
                raise DimensionMismatchError(
                    f"order function on R^{self.dim} got a scalar",
                    expected=self.dim,
                    got=1,
                )
            z = z[np.newaxis]
        if z.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"order function on R^{self.dim} got shape {z.shape}",
                expected=self.dim,
                got=z.shape,
            )
        return np.asarray(self.evaluator(z), dtype=float)


def unit_order_function(dim):
    return OrderFunction(lambda z: np.ones(z.shape[:-1]), dim, 0.0, 1.0, name="1")


def bracket_order_function(dim, power=1.0):
    return OrderFunction(
        lambda z: japanese_bracket(z) ** power, dim, name=f"<z>^{power:g}"
    )


@dataclass(frozen=True, eq=False)
class Symbol:
    """Phase-space function with class bookkeeping.

    fn receives one list of 2*dim components [x_1..x_n, xi_1..xi_n] (scalars,
    arrays, or seed jets) and, when h_dependent, the parameter h as a second
    argument.  order is the claimed growth exponent m; for the semiclassical
    family growth is measured against `weight` instead of <xi>^m and h enters
    through h^(-delta|gamma|).
    """

    fn: object
    order: float
    dim: int
    rho: float = 1.0
    delta: float = 0.0
    family: str = KOHN_NIRENBERG
    weight: OrderFunction = None
    h_dependent: bool = False
    classical: bool = False
    name: str = ""
    meta: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.dim < 1:
            raise ParameterError(f"dimension must be >= 1, got {self.dim}")
        if self.family == KOHN_NIRENBERG:
            if not (0.0 <= self.delta < self.rho <= 1.0):
                raise ParameterError(
                    f"need 0 <= delta < rho <= 1, got rho={self.rho}, delta={self.delta}"
                )
            if self.weight is not None:
                raise ParameterError("weights belong to semiclassical symbols")
            if self.h_dependent:
                raise ParameterError("h-dependence belongs to semiclassical symbols")
        elif self.family == SEMICLASSICAL:
            if not (0.0 <= self.delta <= 0.5):
                raise ParameterError(
                    f"semiclassical class needs 0 <= delta <= 1/2, got {self.delta}"
                )
            if self.weight is None:
                object.__setattr__(self, "weight", unit_order_function(2 * self.dim))
            elif self.weight.dim != 2 * self.dim:
                raise DimensionMismatchError(
                    f"weight lives on R^{2 * self.dim}, got R^{self.weight.dim}",
                    expected=2 * self.dim,
                    got=self.weight.dim,
                )
        else:
            raise ParameterError(f"unknown symbol family {self.family!r}")

    def _eval(self, comps, h=None):
        if self.h_dependent:
            if h is None:
                raise ParameterError(f"symbol {self.name!r} needs a value of h")
            return self.fn(comps, h)
        return self.fn(comps)

    def __call__(self, x, xi, h=None):
        comps = _components(x, self.dim, "x") + _components(xi, self.dim, "xi")
        return self._eval(comps, h)

    def jet(self, x, xi, order, h=None):
        """Taylor jet of the symbol at (x, xi), batched over array inputs."""
        comps = _components(x, self.dim, "x") + _components(xi, self.dim, "xi")
        centers = [np.asarray(c, dtype=float) for c in comps]
        return jet_of(lambda c: self._eval(c, h), centers, order)


def symbol_product(a, b, name=""):
    """Pointwise product; orders add, class parameters take the worst case."""
    if a.dim != b.dim:
        raise DimensionMismatchError(
            f"cannot multiply symbols on dimensions {a.dim} and {b.dim}",
            expected=a.dim,
            got=b.dim,
        )
    if a.family != b.family:
        raise ParameterError(f"cannot mix families {a.family!r} and {b.family!r}")
    weight = None
    if a.family == SEMICLASSICAL:
        wa, wb = a.weight, b.weight
        power = None
        if wa.growth_power is not None and wb.growth_power is not None:
            power = wa.growth_power + wb.growth_power
        weight = OrderFunction(
            lambda z: wa(z) * wb(z),
            wa.dim,
            growth_power=power,
            name=f"({wa.name})*({wb.name})",
        )
    h_dep = a.h_dependent or b.h_dependent

    def fn(comps, h=None):
        va = a.fn(comps, h) if a.h_dependent else a.fn(comps)
        vb = b.fn(comps, h) if b.h_dependent else b.fn(comps)
        return va * vb

    return Symbol(
        fn=fn if h_dep else (lambda comps: fn(comps)),
        order=a.order + b.order,
        dim=a.dim,
        rho=min(a.rho, b.rho),
        delta=max(a.delta, b.delta),
        family=a.family,
        weight=weight,
        h_dependent=h_dep,
        classical=a.classical and b.classical,
        name=name or f"({a.name})*({b.name})",
    )


def symbol_derivative(a, alpha=None, beta=None, name=""):
    """d_x^alpha d_xi^beta a as a Symbol with the matching class order."""
    n = a.dim
    alpha = tuple(alpha) if alpha is not None else (0,) * n
    beta = tuple(beta) if beta is not None else (0,) * n
    if len(alpha) != n or len(beta) != n:
        raise DimensionMismatchError(
            f"multi-indices must have length {n}", expected=n, got=(alpha, beta)
        )
    gamma = alpha + beta
    if a.family == KOHN_NIRENBERG:
        order = a.order - a.rho * sum(beta) + a.delta * sum(alpha)
    else:
        order = a.order  # weight absorbs nothing; h powers handled by delta

    if a.h_dependent:
        fn = lambda comps, h: derivative_map(lambda c: a.fn(c, h), gamma)(comps)
    else:
        fn = derivative_map(a.fn, gamma)
    return Symbol(
        fn=fn,
        order=order,
        dim=n,
        rho=a.rho,
        delta=a.delta,
        family=a.family,
        weight=a.weight,
        h_dependent=a.h_dependent,
        classical=a.classical,
        name=name or f"d^{gamma}({a.name})",
    )


# ---------- lattices ----------


def _unit_directions(dim, count):
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        th = 2.0 * np.pi * np.arange(count) / count
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    # dim >= 3: signed axes, then cube corners/edges for dim 3, then a
    # deterministic pseudorandom fill up to `count`
    dirs = []
    for k in range(dim):
        e = np.zeros(dim)
        e[k] = 1.0
        dirs.extend([e.copy(), -e])
    if dim == 3:
        for i in (-1, 0, 1):
            for j in (-1, 0, 1):
                for k in (-1, 0, 1):
                    v = np.array([i, j, k], dtype=float)
                    nv = np.linalg.norm(v)
                    if nv > 0 and np.count_nonzero(v) >= 2:
                        dirs.append(v / nv)
    rng = np.random.default_rng(20240 + dim)
    while len(dirs) < count:
        v = rng.standard_normal(dim)
        nv = np.linalg.norm(v)
        if nv > 0.1:
            dirs.append(v / nv)
    return np.array(dirs[:count]) if len(dirs) > count else np.array(dirs)


def _direction_count(dim, level):
    base = {1: 2, 2: 16, 3: 26}.get(dim, 8 * dim)
    return base * (2 if level else 1) if dim > 1 else 2


def _x_grid(dim, level, half_width=_X_HALF_WIDTH):
    per_axis = {1: (9, 17), 2: (3, 5), 3: (3, 4)}.get(dim, (3, 4))[1 if level else 0]
    axes = [np.linspace(-half_width, half_width, per_axis)] * dim
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _kn_lattice(dim, level):
    """(X, XI) point batch: base box times dyadic shells times directions."""
    exps = _SHELL_EXPONENTS + ((13,) if level else ())
    radii = 2.0 ** np.asarray(exps, dtype=float)
    dirs = _unit_directions(dim, _direction_count(dim, level))
    xs = _x_grid(dim, level)
    XI = (radii[:, None, None] * dirs[None, :, :]).reshape(-1, dim)
    X = np.repeat(xs[None, :, :], XI.shape[0], axis=0).reshape(-1, dim)
    XI = np.repeat(XI[:, None, :], xs.shape[0], axis=1).reshape(-1, dim)
    return X, XI


def _z_lattice(dim, level):
    """Phase-space shells for semiclassical weights: z = (x, xi) jointly."""
    d = 2 * dim
    exps = _SHELL_EXPONENTS + ((13,) if level else ())
    radii = 2.0 ** np.asarray(exps, dtype=float)
    count = {2: 16, 4: 48}.get(d, 12 * d) * (2 if level else 1)
    dirs = _unit_directions(d, count)
    Z = (radii[:, None, None] * dirs[None, :, :]).reshape(-1, d)
    return np.concatenate([np.zeros((1, d)), Z], axis=0)


@dataclass(eq=False)
class SeminormReport:
    """Measured derivative suprema per (alpha, beta), with stability ratios."""

    family: str
    order: float
    depth: int
    constants: dict
    ratios: dict
    passed: bool
    failures: tuple

    def constant(self, alpha, beta):
        return self.constants[(tuple(alpha), tuple(beta))]


def _kn_suprema(sigma, depth, level):
    X, XI = _kn_lattice(sigma.dim, level)
    n = sigma.dim
    comps = [X[:, k] for k in range(n)] + [XI[:, k] for k in range(n)]
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        jet = jet_of(lambda c: sigma._eval(c), comps, depth)
        br = np.sqrt(1.0 + (XI**2).sum(axis=1))
        sups = {}
        for gamma in multi_indices(2 * n, depth):
            al, be = gamma[:n], gamma[n:]
            w = br ** (sigma.order - sigma.rho * sum(be) + sigma.delta * sum(al))
            vals = np.abs(np.asarray(jet.derivative(gamma))) / w
            vals = np.where(np.isnan(vals), np.inf, vals)
            sups[(al, be)] = float(np.max(vals)) if vals.size else 0.0
    return sups


def _sc_suprema(sigma, depth, level, h_grid):
    Z = _z_lattice(sigma.dim, level)
    d = 2 * sigma.dim
    comps = [Z[:, k] for k in range(d)]
    wz = sigma.weight(Z)
    if np.any(wz <= 0):
        raise ParameterError("order-function weight must be strictly positive")
    if sigma.h_dependent:
        # refinement also probes a smaller h: a claimed delta that is too
        # small shows up as sup growth down the h ladder, not across z
        hs = tuple(h_grid) + ((min(h_grid) / 2.0,) if level else ())
    else:
        hs = (1.0,)
    sups = {}
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for h in hs:
            jet = jet_of(lambda c: sigma._eval(c, h), comps, depth)
            for gamma in multi_indices(d, depth):
                scale = h ** (-sigma.delta * sum(gamma))
                vals = np.abs(np.asarray(jet.derivative(gamma))) / (scale * wz)
                vals = np.where(np.isnan(vals), np.inf, vals)
                cur = float(np.max(vals)) if vals.size else 0.0
                key = (gamma[: sigma.dim], gamma[sigma.dim :])
                sups[key] = max(sups.get(key, 0.0), cur)
    return sups


def estimate_seminorms(sigma, depth=2, h_grid=(1.0, 0.5, 0.25, 0.125)):
    """Measure sup |d^(alpha,beta) sigma| / weight over the phase lattice.

    Each seminorm is computed on a coarse lattice and again on a refined one
    (an extra shell, doubled directions, denser base points); it is accepted
    when both are finite and the refined value exceeds the coarse one by at
    most 10%.  The report carries the refined constants.
    """
    if depth < 0:
        raise ParameterError("seminorm depth must be >= 0")
    if sigma.family == KOHN_NIRENBERG:
        coarse = _kn_suprema(sigma, depth, level=0)
        fine = _kn_suprema(sigma, depth, level=1)
    else:
        coarse = _sc_suprema(sigma, depth, 0, h_grid)
        fine = _sc_suprema(sigma, depth, 1, h_grid)
    ratios, failures = {}, []
    for key, c in coarse.items():
        r = fine[key]
        if r <= _SUP_FLOOR:
            ratios[key] = 1.0
            continue
        ratios[key] = r / c if c > _SUP_FLOOR else np.inf
        if not (np.isfinite(r) and ratios[key] <= _RATIO_CAP):
            failures.append(key)
    return SeminormReport(
        family=sigma.family,
        order=sigma.order,
        depth=depth,
        constants=fine,
        ratios=ratios,
        passed=not failures,
        failures=tuple(sorted(failures)),
    )


# ---------- asymptotic summation ----------


def _summed_evaluator(terms, epsilons, cutoff):
    n = terms[0].dim

    def fn(comps):
        xi = comps[n:]
        out = 0.0
        for term, eps in zip(terms, epsilons):
            out = out + cutoff([c * eps for c in xi]) * term.fn(comps)
        return out

    return fn


def asymptotic_sum(
    terms,
    start_scale=1.0,
    max_halvings=6,
    check_depth=1,
    cutoff=None,
):
    """Sum a falling sequence of symbols into one symbol of the top order.

    The candidate is sum_j chi(eps_j * xi) a_j with an annular profile chi
    (identically 0 inside radius 1, identically 1 outside radius 2) and
    eps_j = 2^(-j) * s.  The scale s is halved until, for every truncation
    N, the defect a - sum_{j<=N} a_j certifies as a symbol of the next
    order m_{N+1} (one below the last listed order once the list ends).
    Raises SummationError with the offending truncation otherwise.
    """
    terms = list(terms)
    if not terms:
        raise ParameterError("asymptotic sum needs at least one term")
    n = terms[0].dim
    orders = [t.order for t in terms]
    for t in terms:
        if t.family != KOHN_NIRENBERG:
            raise ParameterError("asymptotic sums are for kohn-nirenberg symbols")
        if t.dim != n:
            raise DimensionMismatchError(
                "asymptotic sum terms must share a dimension", expected=n, got=t.dim
            )
        if t.h_dependent:
            raise ParameterError("asymptotic sum terms must be h-free")
    if any(b >= a for a, b in zip(orders, orders[1:])):
        raise ParameterError(f"term orders must strictly decrease, got {orders}")
    if cutoff is None:
        cutoff = CutoffFunction("annulus", 1.0, 2.0)
    rho = min(t.rho for t in terms)
    delta = max(t.delta for t in terms)

    next_orders = orders[1:] + [orders[-1] - 1.0]
    last_failure = None
    for halving in range(max_halvings + 1):
        s = start_scale * 0.5**halving
        epsilons = [s * 2.0 ** (-j) for j in range(len(terms))]
        fn = _summed_evaluator(terms, epsilons, cutoff)
        ok = True
        for N in range(len(terms)):
            # stable form of fn - sum_{j<=N} a_j: the (chi - 1) factors vanish
            # identically on the outer plateau instead of by cancellation
            def defect(comps, _N=N, _eps=epsilons):
                xi = comps[n:]
                val = 0.0
                for j, (term, eps) in enumerate(zip(terms, _eps)):
                    chi = cutoff([c * eps for c in xi])
                    w = chi - 1.0 if j <= _N else chi
                    val = val + w * term.fn(comps)
                return val

            probe = Symbol(
                fn=defect,
                order=next_orders[N],
                dim=n,
                rho=rho,
                delta=delta,
                name=f"defect[{N}]",
            )
            report = estimate_seminorms(probe, depth=check_depth)
            if not report.passed:
                ok = False
                last_failure = (N, s, report)
                break
        if ok:
            return Symbol(
                fn=fn,
                order=orders[0],
                dim=n,
                rho=rho,
                delta=delta,
                name="asymptotic-sum",
                meta={"epsilons": tuple(epsilons), "scale": s},
            )
    N, s, report = last_failure
    raise SummationError(
        f"defect after truncation N={N} failed at order {next_orders[N]:g} "
        f"(final scale s={s:g}; failing indices {report.failures})",
        failed_at=N,
    )


# ---------- ellipticity ----------


@dataclass(eq=False)
class EllipticityReport:
    passed: bool
    constant: float
    companion: float
    radius: float
    stability: float
    worst_point: tuple

    def __bool__(self):
        return self.passed


def _elliptic_scan(sigma, radius, level):
    n = sigma.dim
    exps = _SHELL_EXPONENTS + ((13,) if level else ())
    radii = sorted({float(radius)} | {2.0**k for k in exps if 2.0**k >= radius})
    if not radii:
        raise ParameterError(f"no lattice shells at or beyond radius {radius}")
    dirs = _unit_directions(n, _direction_count(n, level))
    xs = _x_grid(n, level)
    best = (np.inf, None)
    worst = 0.0
    for r in radii:
        XI = r * dirs
        w = float(np.sqrt(1.0 + r * r)) ** sigma.order
        for d in range(XI.shape[0]):
            xi_comps = [np.full(xs.shape[0], XI[d, k]) for k in range(n)]
            x_comps = [xs[:, k] for k in range(n)]
            vals = np.abs(np.asarray(sigma._eval(x_comps + xi_comps))) / w
            m = float(np.min(vals))
            worst = max(worst, float(np.max(vals)))
            if m < best[0]:
                j = int(np.argmin(vals))
                best = (m, (tuple(xs[j]), tuple(XI[d])))
    return best[0], best[1], worst


def check_elliptic(sigma, radius=2.0):
    """Fit the ellipticity constant C = min |sigma| / <xi>^m over |xi| >= radius.

    Passes when the refined-lattice minimum stays a definite fraction of the
    coarse one and is not a numerical zero relative to the symbol's size.
    The companion constant C*<radius> bounds the inverse's growth on the
    complementary ball.
    """
    if sigma.family != KOHN_NIRENBERG:
        raise ParameterError("ellipticity is defined for kohn-nirenberg symbols")
    if radius <= 0:
        raise ParameterError("ellipticity radius must be positive")
    c_coarse, _, _ = _elliptic_scan(sigma, radius, level=0)
    c_fine, point, scale = _elliptic_scan(sigma, radius, level=1)
    stability = c_fine / c_coarse if c_coarse > 0 else (1.0 if c_fine == 0 else np.inf)
    passed = bool(
        np.isfinite(c_fine)
        and c_fine > 1e-8 * max(scale, _SUP_FLOOR)
        and c_fine >= 0.8 * c_coarse
    )
    return EllipticityReport(
        passed=passed,
        constant=c_fine,
        companion=c_fine * math.sqrt(1.0 + radius * radius),
        radius=float(radius),
        stability=stability,
        worst_point=point,
    )


# ---------- order functions ----------


@dataclass(eq=False)
class OrderFunctionReport:
    passed: bool
    power: float
    constant: float
    table: tuple  # rows (N, C_base, C_wide)

    def __bool__(self):
        return self.passed


def check_order_function(
    m, pairs=10_000, radius=8.0, seed=101, max_power=8, growth_cap=1.2
):
    """Fit the smallest N with m(z1 - z2) <= C <z1>^N m(z2) on random pairs.

    Candidate constants are measured on samples of width `radius` and again
    at four times the width; N is accepted when the wide-sample constant
    grows by at most `growth_cap`.  The wide factor matters: an exponential
    weight only pulls ahead of <z>^N once |z| is several times N, so a
    narrow comparison window would certify exp|z| as polynomial.  On success
    the fitted (N, C) are written back onto the order function; otherwise
    the report fails.
    """
    rng = np.random.default_rng(seed)
    rows = []
    samples = {}
    for scale in (1.0, 4.0):
        z1 = rng.uniform(-scale * radius, scale * radius, size=(pairs, m.dim))
        z2 = rng.uniform(-scale * radius, scale * radius, size=(pairs, m.dim))
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            num = m(z1 - z2) / m(z2)
        samples[scale] = (japanese_bracket(z1), num)
    for N in range(max_power + 1):
        cs = {}
        for scale, (br1, num) in samples.items():
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                ratio = num / br1**N
            cs[scale] = float(np.max(np.where(np.isnan(ratio), np.inf, ratio)))
        rows.append((N, cs[1.0], cs[4.0]))
        if np.isfinite(cs[4.0]) and cs[4.0] <= growth_cap * cs[1.0]:
            constant = max(cs[1.0], cs[4.0])
            m.growth_power = float(N)
            m.growth_constant = constant
            return OrderFunctionReport(
                passed=True, power=float(N), constant=constant, table=tuple(rows)
            )
    return OrderFunctionReport(
        passed=False, power=np.nan, constant=np.nan, table=tuple(rows)
    )


# ---------- conic regions and the smoothing/characteristic split ----------


@dataclass(frozen=True, eq=False)
class ConicRegion:
    """Base box times an angular patch of directions; scale-invariant in xi.

    Membership uses only the direction of xi (so the region is closed under
    positive scaling by construction); inner_radius records the shell from
    which the defining decay/ellipticity estimates were measured.
    """

    base_box: tuple
    directions: tuple
    angular_radius: float
    inner_radius: float = 1.0
    label: str = ""

    def contains(self, x, xi, tol=1e-9):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        if len(self.base_box) != x.shape[-1] or xi.shape[-1] != x.shape[-1]:
            raise DimensionMismatchError(
                f"region lives on R^{len(self.base_box)}",
                expected=len(self.base_box),
                got=(x.shape, xi.shape),
            )
        norm = np.linalg.norm(xi)
        if norm == 0:
            raise ParameterError("conic membership needs a nonzero codirection")
        for (lo, hi), c in zip(self.base_box, x):
            if not (lo - tol <= c <= hi + tol):
                return False
        hat = xi / norm
        cos_cap = math.cos(self.angular_radius)
        return any(
            float(np.dot(hat, np.asarray(d))) >= cos_cap - tol for d in self.directions
        )


def regions_contain(regions, x, xi):
    return any(r.contains(x, xi) for r in regions)


@dataclass(eq=False)
class SmoCharReport:
    smoothing: tuple
    characteristic: tuple
    elliptic: tuple
    table: tuple
    decay_threshold: float

    def labels(self):
        return {
            (row["cell"], row["direction"]): row["label"] for row in self.table
        }


def _half_spacing(dirs):
    if dirs.shape[0] <= 2 or dirs.shape[1] == 1:
        return 0.0
    gram = np.clip(dirs @ dirs.T, -1.0, 1.0)
    angles = np.arccos(gram)
    np.fill_diagonal(angles, np.inf)
    return 0.5 * float(np.min(angles))


def _patch_edge_rays(d, half_angle):
    """Unit rays on the boundary of the angular patch of radius half_angle at d."""
    n = d.shape[0]
    if n == 1 or half_angle == 0.0:
        return []
    tangents = []
    seed = np.zeros(n)
    seed[int(np.argmin(np.abs(d)))] = 1.0
    t1 = seed - np.dot(seed, d) * d
    t1 /= np.linalg.norm(t1)
    tangents.extend([t1, -t1])
    if n >= 3:
        seed2 = np.zeros(n)
        order = np.argsort(np.abs(d))
        seed2[int(order[1])] = 1.0
        t2 = seed2 - np.dot(seed2, d) * d - np.dot(seed2, t1) * t1
        nt = np.linalg.norm(t2)
        if nt > 1e-12:
            t2 /= nt
            tangents.extend([t2, -t2])
    c, s = math.cos(half_angle), math.sin(half_angle)
    return [c * d + s * t for t in tangents]


def estimate_smo_char(
    sigma,
    x_cells=1,
    decay_threshold=6.0,
    fit_shells=4,
    half_width=_X_HALF_WIDTH,
):
    """Classify each (base cell, direction) as smoothing, characteristic, or elliptic.

    Along each lattice ray the symbol's top dyadic shells are fitted with a
    log-log slope.  A direction is marked smoothing when the ray and the
    boundary rays of its angular patch all decay faster than
    <xi>^(-decay_threshold), so the emitted cone never overclaims beyond
    the lattice's angular resolution; failing that, a collapse of
    min |sigma| / <xi>^m on the top shells marks the direction
    characteristic; anything else is elliptic there.
    """
    n = sigma.dim
    if x_cells < 1:
        raise ParameterError("x_cells must be >= 1")
    dirs = _unit_directions(n, _direction_count(n, 0))
    half_angle = _half_spacing(dirs)
    radii = 2.0 ** np.asarray(_SHELL_EXPONENTS, dtype=float)
    top = slice(len(radii) - fit_shells, len(radii))

    edges = np.linspace(-half_width, half_width, x_cells + 1)
    cells = []
    for idx in np.ndindex(*(x_cells,) * n):
        box = tuple((edges[i], edges[i + 1]) for i in idx)
        pts = np.meshgrid(
            *[np.linspace(lo, hi, 3) for lo, hi in box], indexing="ij"
        )
        cells.append((idx, box, np.stack([p.ravel() for p in pts], axis=1)))

    vals = np.empty((len(cells), dirs.shape[0], len(radii)))
    ell = np.empty_like(vals)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for ci, (_, _, pts) in enumerate(cells):
            x_comps = [pts[:, k] for k in range(n)]
            for di in range(dirs.shape[0]):
                for ki, r in enumerate(radii):
                    xi_comps = [np.full(pts.shape[0], r * dirs[di, k]) for k in range(n)]
                    v = np.abs(np.asarray(sigma._eval(x_comps + xi_comps)))
                    vals[ci, di, ki] = float(np.max(v))
                    ell[ci, di, ki] = float(np.min(v)) / math.sqrt(1.0 + r * r) ** sigma.order

    global_scale = float(np.max(vals)) or 1.0
    log_r = np.log(radii[top])

    def ray_slope(pts, direction, x_comps):
        v = np.empty(len(radii))
        for ki, r in enumerate(radii):
            xi_comps = [np.full(pts.shape[0], r * direction[k]) for k in range(n)]
            v[ki] = float(np.max(np.abs(np.asarray(sigma._eval(x_comps + xi_comps)))))
        vt = v[top]
        if np.max(vt) <= 1e-13 * global_scale:
            return -np.inf
        return float(np.polyfit(log_r, np.log(vt + 1e-300), 1)[0])

    slopes = np.full(vals.shape[:2], -np.inf)
    for ci in range(vals.shape[0]):
        for di in range(vals.shape[1]):
            v = vals[ci, di, top]
            if np.max(v) > 1e-13 * global_scale:
                slopes[ci, di] = float(np.polyfit(log_r, np.log(v + 1e-300), 1)[0])

    ell_top = ell[:, :, top].min(axis=2)
    # characteristic collapse is judged against the same base cell, so a
    # symbol that is merely small near some x keeps its elliptic directions
    ell_scale = np.array([float(np.max(row)) or 1.0 for row in ell_top])

    ray_decays = slopes <= -decay_threshold
    smoothing, characteristic, elliptic, table = [], [], [], []
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        edge_ok = np.zeros(ray_decays.shape, dtype=bool)
        for ci, (_, _, pts) in enumerate(cells):
            x_comps = [pts[:, k] for k in range(n)]
            for di in range(dirs.shape[0]):
                if not ray_decays[ci, di]:
                    continue
                edge_ok[ci, di] = all(
                    ray_slope(pts, e, x_comps) <= -decay_threshold
                    for e in _patch_edge_rays(dirs[di], half_angle)
                )
    for ci, (idx, box, _) in enumerate(cells):
        for di in range(dirs.shape[0]):
            if ray_decays[ci, di] and edge_ok[ci, di]:
                label = "smoothing"
            elif ell_top[ci, di] < 1e-8 * ell_scale[ci]:
                label = "characteristic"
            else:
                label = "elliptic"
            region = ConicRegion(
                base_box=box,
                directions=(tuple(dirs[di]),),
                angular_radius=half_angle,
                inner_radius=float(radii[top][0]),
                label=label,
            )
            {"smoothing": smoothing, "characteristic": characteristic,
             "elliptic": elliptic}[label].append(region)
            table.append(
                {
                    "cell": idx,
                    "direction": tuple(dirs[di]),
                    "slope": float(slopes[ci, di]),
                    "elliptic_ratio": float(ell_top[ci, di]),
                    "label": label,
                }
            )
    return SmoCharReport(
        smoothing=tuple(smoothing),
        characteristic=tuple(characteristic),
        elliptic=tuple(elliptic),
        table=tuple(table),
        decay_threshold=decay_threshold,
    )


# ---------- named templates ----------


def _tpl_bracket(dim, power=2.0):
    return Symbol(
        fn=lambda c: bracket_of_components(c[dim:]) ** power,
        order=float(power),
        dim=dim,
        name=f"<xi>^{power:g}",
    )


def _tpl_elliptic_oscillating(dim, power=2.0, amplitude=0.1):
    def fn(c):
        br = bracket_of_components(c[dim:])
        return br**power + amplitude * np.sin(c[0]) * br ** (power - 1.0)

    return Symbol(
        fn=fn,
        order=float(power),
        dim=dim,
        name=f"<xi>^{power:g}+{amplitude:g}sin(x1)<xi>^{power - 1:g}",
    )


def _tpl_schwartz_x(dim, width=1.0):
    def fn(c):
        s = 0.0
        for comp in c[:dim]:
            s = s + comp * comp
        return np.exp(-s / width**2)

    return Symbol(fn=fn, order=0.0, dim=dim, name="exp(-|x|^2)")


def _tpl_gaussian_xi(dim, order=0.0):
    def fn(c):
        s = 0.0
        for comp in c[dim:]:
            s = s + comp * comp
        return np.exp(-s)

    return Symbol(fn=fn, order=float(order), dim=dim, name="exp(-|xi|^2)")


def _tpl_ray(dim, axis=0):
    if not 0 <= axis < dim:
        raise ParameterError(f"axis must be in [0, {dim}), got {axis}")
    return Symbol(
        fn=lambda c: 1.0 * c[dim + axis],
        order=1.0,
        dim=dim,
        classical=True,
        name=f"xi_{axis + 1}",
    )


def _tpl_exp_growth(dim):
    def fn(c):
        s = 0.0
        for comp in c[dim:]:
            s = s + comp * comp
        return np.exp(np.sqrt(s))

    return Symbol(fn=fn, order=0.0, dim=dim, name="exp|xi|")


def _tpl_cone_cut(dim, axis=0, inner_angle=0.8, outer_angle=1.4, power=1.0):
    """<xi>^power suppressed on the open cone of half-angle inner_angle about +e_axis."""
    if dim < 2:
        raise ParameterError("cone cutoffs need dim >= 2")
    if not 0 < inner_angle < outer_angle < math.pi:
        raise ParameterError("need 0 < inner_angle < outer_angle < pi")
    t_in = 1.0 - math.cos(inner_angle)
    t_out = 1.0 - math.cos(outer_angle)
    profile = CutoffFunction("annulus", t_in, t_out)

    def fn(c):
        xi = c[dim:]
        br = bracket_of_components(xi)
        t = 1.0 - xi[axis] / br  # cosine distance from the cone axis
        return profile.of_radius(t) * br**power

    return Symbol(fn=fn, order=float(power), dim=dim, name="cone-suppressed bracket")


def _tpl_band_sin(dim, band=8.0, axis=0):
    window = CutoffFunction("bump", 0.75 * band, band)

    def fn(c):
        return np.sin(c[axis]) * window(list(c[dim:]))

    return Symbol(fn=fn, order=0.0, dim=dim, name="sin(x1) band-limited")


def _tpl_unimodular(dim):
    def fn(c):
        xi = c[dim:]
        return np.exp(1j * xi[0] / bracket_of_components(xi))

    return Symbol(fn=fn, order=0.0, dim=dim, name="unimodular phase")


_TEMPLATES = {
    "bracket": _tpl_bracket,
    "elliptic-oscillating": _tpl_elliptic_oscillating,
    "schwartz-x": _tpl_schwartz_x,
    "gaussian-xi": _tpl_gaussian_xi,
    "ray": _tpl_ray,
    "exp-growth": _tpl_exp_growth,
    "cone-cut": _tpl_cone_cut,
    "band-sin": _tpl_band_sin,
    "unimodular": _tpl_unimodular,
}


def template_names():
    return tuple(sorted(_TEMPLATES))


def named_symbol(name, dim=1, **params):
    """Build one of the stock symbols by template name."""
    try:
        builder = _TEMPLATES[name]
    except KeyError:
        raise ParameterError(
            f"unknown symbol template {name!r}; known: {', '.join(template_names())}"
        ) from None
    try:
        return builder(dim, **params)
    except TypeError as exc:
        raise ParameterError(f"bad parameters for template {name!r}: {exc}") from None
