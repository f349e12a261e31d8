"""Regularized oscillatory integrals: canonical identities and invariants."""

import numpy as np
import pytest

from artifact.core import CutoffFunction
from artifact.errors import DivergenceError, ParameterError
from artifact.oscillatory import (
    Phase,
    QuadratureSpec,
    eval_osc_type1,
    eval_osc_type2,
    ibp_transform,
    neville_limit,
)

TWO_PI = 2.0 * np.pi


@pytest.fixture(scope="module")
def xy_phase():
    return Phase(fn=lambda c: c[0] * c[1], degree=2, n_theta=2)


@pytest.fixture(scope="module")
def fresnel_phase():
    return Phase(fn=lambda c: c[0] ** 2, degree=2, n_theta=1)


@pytest.fixture(scope="module")
def pair_phase():
    return Phase(fn=lambda c: c[0] * c[1], degree=1, n_theta=1, n_x=1)


@pytest.fixture(scope="module")
def plain_result(xy_phase):
    return eval_osc_type2(xy_phase, lambda c: 1.0 + 0.0 * c[0], order=0.0)


@pytest.fixture(scope="module")
def monomial_result(xy_phase):
    return eval_osc_type2(xy_phase, lambda c: c[0] * c[1], order=2.0)


# ---------------------------------------------------------------------------
# phase and spec validation


def test_phase_rejects_inhomogeneous():
    with pytest.raises(ParameterError, match="homogeneous"):
        Phase(fn=lambda c: c[0] + c[0] ** 2, degree=1, n_theta=1)


def test_phase_rejects_vanishing_gradient():
    with pytest.raises(ParameterError, match="gradient"):
        Phase(fn=lambda c: 0.0 * c[0], degree=1, n_theta=2)


def test_phase_rejects_bad_parameters():
    with pytest.raises(ParameterError):
        Phase(fn=lambda c: c[0], degree=0.0, n_theta=1)
    with pytest.raises(ParameterError):
        Phase(fn=lambda c: c[0], degree=1.0, n_theta=0)


def test_phase_gradients(pair_phase):
    x = np.array([1.5, -2.0])
    xi = np.array([3.0, 0.5])
    (gth,) = pair_phase.theta_gradient([x, xi])
    (gx,) = pair_phase.x_gradient([x, xi])
    assert np.allclose(gth, x)
    assert np.allclose(gx, xi)


def test_spec_validation():
    with pytest.raises(ParameterError):
        QuadratureSpec(eps_schedule=(0.1, 0.2))
    with pytest.raises(ParameterError):
        QuadratureSpec(eps_schedule=(0.2, -0.1))
    with pytest.raises(ParameterError):
        QuadratureSpec(eps_schedule=(0.2, 0.1), extrapolation_order=2)


def test_neville_exact_on_polynomial():
    eps = np.array([0.5, 0.25, 0.125, 0.0625])
    vals = 3.0 + 2.0 * eps + 5.0 * eps**2
    limit, residuals = neville_limit(eps, vals, order=3)
    assert abs(limit - 3.0) < 1e-12
    assert residuals[0] == np.inf and len(residuals) == 4


# ---------------------------------------------------------------------------
# type II canonical values


def test_type2_plain_identity(plain_result):
    # iint e^{i x xi} dx dxi = 2 pi
    assert abs(plain_result.value - TWO_PI) <= 1e-3 * TWO_PI
    assert abs(plain_result.value.imag) < 1e-8


def test_type2_monomial_identity(monomial_result):
    # iint e^{i x xi} x xi dx dxi = i * 2 pi * 1!
    assert abs(monomial_result.value - 2j * np.pi) <= 1e-3 * TWO_PI


def test_type2_monomial_minus_sign():
    phase = Phase(fn=lambda c: -c[0] * c[1], degree=2, n_theta=2)
    r = eval_osc_type2(phase, lambda c: c[0] * c[1], order=2.0)
    assert abs(r.value - (-2j * np.pi)) <= 1e-3 * TWO_PI


def test_type2_mismatched_monomial_below_residual(xy_phase):
    r = eval_osc_type2(xy_phase, lambda c: c[0], order=1.0)
    assert abs(r.value) <= r.residual


def test_type2_fresnel(fresnel_phase):
    r = eval_osc_type2(fresnel_phase, lambda c: 1.0 + 0.0 * c[0], order=0.0)
    exact = np.sqrt(np.pi) * np.exp(1j * np.pi / 4)
    assert abs(r.value - exact) <= 1e-4


def test_type2_rejects_ill_posed():
    phase = Phase(fn=lambda c: c[0], degree=1, n_theta=1)
    with pytest.raises(ParameterError, match="rho"):
        eval_osc_type2(phase, lambda c: 1.0 + 0.0 * c[0], order=0.0, rho=0.0)


def test_type2_rejects_mixed_phase(pair_phase):
    with pytest.raises(ParameterError):
        eval_osc_type2(pair_phase, lambda c: 1.0 + 0.0 * c[0], order=0.0)


def test_type2_divergence_reported():
    # cosh is no symbol: the regularized values explode as eps shrinks and
    # the evaluator must refuse to extrapolate them to a limit
    phase = Phase(fn=lambda c: c[0], degree=1, n_theta=1)
    spec = QuadratureSpec(
        eps_schedule=tuple(2.0**-k for k in range(3, 7)),
        ibp_power=0,
        oversample=8.0,
    )
    with pytest.raises(DivergenceError) as exc:
        eval_osc_type2(phase, lambda c: np.cosh(c[0] / 2.0), spec=spec, order=0.0)
    assert len(exc.value.table) == 4


def test_result_table_and_dict(plain_result):
    d = plain_result.to_dict()
    assert set(d) == {"value_re", "value_im", "residual", "per_epsilon_table"}
    assert len(d["per_epsilon_table"]) == len(QuadratureSpec().eps_schedule)
    assert d["per_epsilon_table"][0]["eps"] == 0.125
    assert abs(d["value_re"] - plain_result.value.real) == 0.0


# ---------------------------------------------------------------------------
# invariants: cutoff independence and refinement


def test_chi_independence_saturated(fresnel_phase):
    sig = lambda c: 1.0 + 0.0 * c[0]
    ra = eval_osc_type2(fresnel_phase, sig, order=0.0)
    rb = eval_osc_type2(
        fresnel_phase,
        sig,
        spec=QuadratureSpec(cutoff=CutoffFunction("bump", 0.5, 3.0)),
        order=0.0,
    )
    assert abs(ra.value - rb.value) <= 2.0 * (ra.residual + rb.residual)


def test_chi_independence_unsaturated(fresnel_phase):
    # a short schedule keeps the cutoff transition inside the quadrature
    # domain, so the per-eps values genuinely depend on the template
    sig = lambda c: 1.0 + 0.0 * c[0]
    short = tuple(2.0**-k for k in range(3, 7))
    ra = eval_osc_type2(
        fresnel_phase, sig, spec=QuadratureSpec(eps_schedule=short), order=0.0
    )
    rb = eval_osc_type2(
        fresnel_phase,
        sig,
        spec=QuadratureSpec(eps_schedule=short, cutoff=CutoffFunction("bump", 0.5, 3.0)),
        order=0.0,
    )
    assert abs(ra.value - rb.value) <= 2.0 * (ra.residual + rb.residual)


def test_refinement_never_worsens_residual(fresnel_phase):
    sig = lambda c: 1.0 + 0.0 * c[0]
    base = eval_osc_type2(fresnel_phase, sig, order=0.0)
    fine = eval_osc_type2(
        fresnel_phase,
        sig,
        spec=QuadratureSpec(
            oversample=2.4, eps_schedule=tuple(2.0**-k for k in range(3, 13))
        ),
        order=0.0,
    )
    assert fine.residual <= 1.1 * base.residual


# ---------------------------------------------------------------------------
# type I


def test_type1_inversion_gaussian(pair_phase):
    r = eval_osc_type1(
        pair_phase, lambda c: 1.0 + 0.0 * c[0], lambda x: np.exp(-x[0] ** 2)
    )
    assert abs(r.value - TWO_PI) <= 1e-3 * TWO_PI


def test_type1_inversion_slow_decay(pair_phase):
    # u = 1/(1+x^2) decays only quadratically; the answer is still 2 pi u(0)
    r = eval_osc_type1(
        pair_phase, lambda c: 1.0 + 0.0 * c[0], lambda x: 1.0 / (1.0 + x[0] ** 2)
    )
    assert abs(r.value - TWO_PI) <= 1e-3 * TWO_PI


def test_type1_symbol_xi_gives_derivative(pair_phase):
    # sigma = xi picks out 2 pi (Du)(0), which vanishes for even u
    r = eval_osc_type1(pair_phase, lambda c: c[1], lambda x: np.exp(-x[0] ** 2), order=1.0)
    assert abs(r.value) <= max(r.residual, 1e-6)


def test_type1_flat_extrapolation_when_absolutely_convergent(pair_phase):
    r = eval_osc_type1(
        pair_phase, lambda c: np.exp(-c[0] ** 2), lambda x: np.exp(-x[0] ** 2)
    )
    vals = [row[1] for row in r.table]
    assert max(abs(v - vals[-1]) for v in vals) <= 1e-4


def test_type1_rejects_theta_only_phase(fresnel_phase):
    with pytest.raises(ParameterError):
        eval_osc_type1(fresnel_phase, lambda c: 1.0, lambda x: np.exp(-x[0] ** 2))


# ---------------------------------------------------------------------------
# integration-by-parts accelerator


def test_ibp_power_zero_is_identity(xy_phase):
    f = ibp_transform(xy_phase, lambda c: c[0] + 2.0 * c[1], 0)
    pts = np.array([[1.0, 2.0], [3.0, -1.0], [0.5, 0.0]])
    assert np.allclose(f(pts), pts[:, 0] + 2.0 * pts[:, 1])


def test_ibp_ray_decay(xy_phase):
    # two applications on sigma = 1 must decay at least like |theta|^-1.8;
    # for this phase each application actually gains two orders
    f = ibp_transform(xy_phase, lambda c: 1.0 + 0.0 * c[0], 2)
    radii = 2.0 ** np.arange(3, 7)
    ang = np.linspace(0, 2 * np.pi, 8, endpoint=False)
    dirs = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    mx = [float(np.max(np.abs(f(r * dirs)))) for r in radii]
    slope = np.polyfit(np.log(radii), np.log(mx), 1)[0]
    assert slope <= -1.8


def test_ibp_preserves_integral():
    # compactly supported g away from 0: direct quadrature is the oracle
    inner = CutoffFunction("annulus", 1.0, 2.0)
    outer = CutoffFunction("bump", 4.0, 8.0)
    g = lambda c: inner(c) * outer(c)
    phase = Phase(fn=lambda c: c[0], degree=1, n_theta=1)
    xs = np.linspace(-10.0, 10.0, 40001)
    dx = xs[1] - xs[0]
    direct = np.sum(np.exp(1j * xs) * g([xs])) * dx
    transformed = ibp_transform(phase, g, 1)
    moved = np.sum(np.exp(1j * xs) * transformed(xs[:, None])) * dx
    assert abs(direct - moved) <= 1e-6


def test_ibp_rejects_bad_arguments(pair_phase, xy_phase):
    with pytest.raises(ParameterError):
        ibp_transform(pair_phase, lambda c: 1.0, 1)  # mixed phase
    with pytest.raises(ParameterError):
        ibp_transform(xy_phase, lambda c: 1.0, -1)
