"""Stationary-phase expansions: frozen quadrature oracles and exact cases."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from artifact.core import CutoffFunction, GridFunction, fourier
from artifact.errors import (
    AmbiguousCriticalPointsError,
    ParameterError,
    SingularMatrixError,
)
from artifact.stationary import (
    AsymptoticExpansion,
    QuadraticPhase,
    gaussian_fourier,
    stationary_1d,
    stationary_general,
    stationary_quadratic,
)

ROOT_PREF = lambda lam: np.sqrt(2 * np.pi / lam) * np.exp(1j * np.pi / 4)


def trapz_osc(f, lo, hi, m):
    x = np.linspace(lo, hi, m + 1)
    w = np.full(m + 1, x[1] - x[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return np.sum(f(x) * w)


# ---------------------------------------------------------------------------
# QuadraticPhase record


def test_quadratic_phase_spectral_data():
    Q = np.array([[2.0, 0.5], [0.5, 1.0]])
    qp = QuadraticPhase(Q)
    assert qp.signature == 2
    assert qp.root_abs_det == pytest.approx(np.sqrt(np.linalg.det(Q)), rel=1e-14)
    d = np.array([0.3, -0.7])
    assert qp(d) == pytest.approx(0.5 * d @ Q @ d, rel=1e-14)
    qp2 = QuadraticPhase(np.diag([1.0, -1.0]))
    assert qp2.signature == 0 and qp2.root_abs_det == pytest.approx(1.0)


def test_quadratic_phase_center_shift():
    qp = QuadraticPhase(np.array([[3.0]]), center=[2.0])
    assert qp([2.0]) == 0.0
    assert qp([3.0]) == pytest.approx(1.5)


def test_quadratic_phase_rejections():
    with pytest.raises(ParameterError, match="symmetric"):
        QuadraticPhase(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(SingularMatrixError):
        QuadraticPhase(np.diag([1.0, 0.0]))
    with pytest.raises(SingularMatrixError):
        # relative eigenvalue floor: 1e-15 against norm 1 counts as zero
        QuadraticPhase(np.diag([1.0, 1e-15]))
    with pytest.raises(ParameterError, match="square"):
        QuadraticPhase(np.ones((2, 3)))
    with pytest.raises(ParameterError, match="center"):
        QuadraticPhase(np.eye(2), center=[1.0])


# ---------------------------------------------------------------------------
# 1-d expansion


def test_1d_constant_amplitude_exact():
    exp = stationary_1d(lambda c: 1.0 + 0.0 * c[0], 0)
    assert exp.coefficients == ((1 + 0j),)
    for lam in (50.0, 400.0):
        assert exp.evaluate(lam) == pytest.approx(ROOT_PREF(lam), abs=1e-15)


def test_1d_gaussian_coefficients():
    exp = stationary_1d(lambda c: np.exp(-c[0] ** 2), 2)
    ref = (1.0, -1.0j, -1.5)
    assert exp.remainder_exponent == -3.5
    for got, want in zip(exp.coefficients, ref):
        assert got == pytest.approx(want, abs=1e-13)


def test_1d_odd_amplitude_vanishes():
    exp = stationary_1d(lambda c: c[0] * np.exp(-c[0] ** 2), 3)
    assert all(abs(c) < 1e-14 for c in exp.coefficients)


def test_1d_remainder_order_fit():
    # compactly supported amplitude so the trapezoid oracle is spectrally
    # accurate; the cutoff is flat near 0, so the jets are the Gaussian's
    chi = CutoffFunction("bump", 1.0, 2.0)
    amp = lambda x: np.exp(-(x ** 2)) * chi(np.abs(x))
    lams = np.array([50.0, 100.0, 200.0, 400.0])
    oracle = {
        lam: trapz_osc(lambda x, L=lam: np.exp(1j * L * x ** 2 / 2) * amp(x), -2.0, 2.0, 2 ** 15)
        for lam in lams
    }
    assert oracle[400.0] == pytest.approx(
        0.0888434149814809 + 0.0884003084241586j, abs=1e-12
    )
    for order in (0, 1, 2):
        exp = stationary_1d(lambda c: np.exp(-c[0] ** 2), order)
        errs = np.array([abs(oracle[lam] - exp.evaluate(lam)) for lam in lams])
        slope = np.polyfit(np.log(lams), np.log(errs), 1)[0]
        assert slope <= -(0.5 + order + 1) + 0.25, (order, slope, errs)


def test_1d_trig_amplitude_closed_form():
    # a = cos(kx): the series sums to e^{-ik^2/(2 lam)} exactly
    k = 3.0
    exp = stationary_1d(lambda c: np.cos(k * c[0]), 8)
    for lam in (50.0, 200.0):
        ref = ROOT_PREF(lam) * np.exp(-1j * k ** 2 / (2 * lam))
        assert exp.evaluate(lam) == pytest.approx(ref, rel=1e-10)


def test_1d_coefficients_match_fourier_moments():
    # independent route: c_j = (-i/2)^j/j! (2pi)^{-1/2} int xi^{2j} ahat dxi
    exp = stationary_1d(lambda c: np.exp(-c[0] ** 2), 2)
    g = GridFunction.from_function(lambda m: np.exp(-m[0] ** 2), 16.0, 1024)
    ah = fourier(g, h=1.0, sign=-1)
    xi = ah.axes()[0]
    dxi = ah.spacing[0]
    for j in range(3):
        moment = np.sum(xi ** (2 * j) * ah.values) * dxi
        cj = (-0.5j) ** j / math.factorial(j) * moment / np.sqrt(2 * np.pi)
        assert abs(cj - exp.coefficients[j]) < 1e-8, j


def test_1d_rejects_bad_order():
    with pytest.raises(ParameterError, match="order"):
        stationary_1d(lambda c: 1.0 + 0.0 * c[0], -1)


def test_expansion_evaluate_rejects_nonpositive():
    exp = stationary_1d(lambda c: 1.0 + 0.0 * c[0], 0)
    for lam in (0.0, -3.0):
        with pytest.raises(ParameterError):
            exp.evaluate(lam)


# ---------------------------------------------------------------------------
# quadratic expansion in n dimensions


def test_quadratic_polynomial_amplitude_terminates():
    # a = x^2: single surviving coefficient i at j=1; a = x^4: -3 at j=2
    e2 = stationary_quadratic(np.array([[1.0]]), lambda c: c[0] ** 2, 3)
    assert e2.coefficients == pytest.approx((0.0, 1.0j, 0.0, 0.0), abs=1e-14)
    e4 = stationary_quadratic(np.array([[1.0]]), lambda c: c[0] ** 4, 3)
    assert e4.coefficients == pytest.approx((0.0, 0.0, -3.0, 0.0), abs=1e-14)


def test_quadratic_antidiagonal_mixed_derivative_sign():
    a = lambda c: c[0] * c[1]
    plus = stationary_quadratic(np.array([[0.0, 1.0], [1.0, 0.0]]), a, 1)
    minus = stationary_quadratic(np.array([[0.0, -1.0], [-1.0, 0.0]]), a, 1)
    assert plus.coefficients[1] == pytest.approx(1.0j, abs=1e-14)
    assert minus.coefficients[1] == pytest.approx(-1.0j, abs=1e-14)
    assert plus.phase_factor == pytest.approx(1.0) and plus.amplitude == pytest.approx(1.0)


def test_quadratic_hyperbolic_leading_term():
    # Q = diag(1,-1): signature 0 kills the phase factor, prefactor 2pi/lam;
    # oracle factorizes into conjugate 1-d quadratures
    chi = CutoffFunction("bump", 1.0, 2.0)
    amp = lambda x: np.exp(-(x ** 2)) * chi(np.abs(x))
    lam = 400.0
    fac = trapz_osc(lambda x: np.exp(1j * lam * x ** 2 / 2) * amp(x), -2.0, 2.0, 2 ** 16)
    oracle = fac * np.conj(fac)
    exp = stationary_quadratic(
        np.diag([1.0, -1.0]), lambda c: np.exp(-c[0] ** 2 - c[1] ** 2), 0
    )
    lead = exp.evaluate(lam)
    assert lead == pytest.approx(2 * np.pi / lam, abs=1e-15)
    assert abs(oracle - lead) / abs(lead) < 0.01


def test_quadratic_center_shift_moves_jets():
    qp = QuadraticPhase(np.array([[1.0]]), center=[1.0])
    exp = stationary_quadratic(qp, lambda c: np.exp(-c[0] ** 2), 0)
    assert exp.coefficients[0] == pytest.approx(np.exp(-1.0), rel=1e-13)


def test_quadratic_orthogonal_conjugation_invariance():
    # radial amplitude: P Q P^T must leave signature, amplitude and every
    # coefficient unchanged
    rng = np.random.default_rng(42)
    Q = np.array([[2.0, 0.5], [0.5, 1.0]])
    a = lambda c: np.exp(-(c[0] ** 2 + c[1] ** 2))
    base = stationary_quadratic(Q, a, 2)
    for _ in range(5):
        P, _ = np.linalg.qr(rng.standard_normal((2, 2)))
        Q2 = P @ Q @ P.T
        other = stationary_quadratic(0.5 * (Q2 + Q2.T), a, 2)
        assert other.phase_factor == pytest.approx(base.phase_factor, abs=1e-10)
        assert other.amplitude == pytest.approx(base.amplitude, abs=1e-10)
        for x, y in zip(base.coefficients, other.coefficients):
            assert abs(x - y) < 1e-10


@settings(max_examples=40, deadline=None)
@given(
    q=hst.floats(min_value=0.2, max_value=5.0),
    coeffs=hst.lists(
        hst.floats(min_value=-2.0, max_value=2.0), min_size=1, max_size=5
    ),
)
def test_quadratic_1x1_matches_rescaled_1d(q, coeffs):
    # integral e^{i lam q x^2/2} a dx == the x^2/2 expansion read at q*lam
    a = lambda c: sum(ck * c[0] ** k for k, ck in enumerate(coeffs))
    quad = stationary_quadratic(np.array([[q]]), a, 3)
    line = stationary_1d(a, 3)
    for lam in (7.0, 133.0):
        lhs = quad.evaluate(lam)
        rhs = line.evaluate(q * lam)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_quadratic_rejects_bad_order():
    with pytest.raises(ParameterError, match="order"):
        stationary_quadratic(np.eye(2), lambda c: 1.0 + 0.0 * c[0], -2)


# ---------------------------------------------------------------------------
# general phase


def test_general_shifted_parabola():
    rep = stationary_general(
        lambda c: 0.5 * (c[0] - 1.0) ** 2,
        lambda c: np.exp(-c[0] ** 2),
        [(-3.0, 3.0)],
    )
    assert rep.critical_point == pytest.approx([1.0], abs=1e-9)
    assert np.allclose(rep.hessian, [[1.0]], atol=1e-10)
    assert rep.expansion.stationary_value == pytest.approx(0.0, abs=1e-12)
    lam = 100.0
    ref = ROOT_PREF(lam) * np.exp(-1.0)
    assert rep.expansion.evaluate(lam) == pytest.approx(ref, rel=1e-10)


def test_general_cosine_phase_oracle():
    # phi = cos(x) - 1 has its only critical point in the box at 0 with
    # Hessian -1; leading term lands within half a percent of quadrature
    chi = CutoffFunction("bump", 0.7, 1.4)
    rep = stationary_general(
        lambda c: np.cos(c[0]) - 1.0, lambda c: chi(c[0]), [(-1.5, 1.5)]
    )
    assert rep.critical_point == pytest.approx([0.0], abs=1e-9)
    assert rep.expansion.phase_factor == pytest.approx(np.exp(-1j * np.pi / 4))
    lam = 200.0
    oracle = trapz_osc(
        lambda x: np.exp(1j * lam * (np.cos(x) - 1.0)) * chi(np.abs(x)),
        -1.4,
        1.4,
        2 ** 15,
    )
    got = rep.expansion.evaluate(lam)
    assert abs(oracle - got) / abs(oracle) < 5e-3


def test_general_hyperbolic_2d():
    rep = stationary_general(
        lambda c: 0.5 * (c[0] ** 2 - c[1] ** 2),
        lambda c: np.exp(-c[0] ** 2 - c[1] ** 2),
        [(-1.0, 1.0), (-1.0, 1.0)],
    )
    assert rep.critical_point == pytest.approx([0.0, 0.0], abs=1e-9)
    lam = 400.0
    fac = trapz_osc(
        lambda x: np.exp(1j * lam * x ** 2 / 2) * np.exp(-(x ** 2)), -7.0, 7.0, 2 ** 16
    )
    oracle = fac * np.conj(fac)
    got = rep.expansion.evaluate(lam)
    assert got == pytest.approx(2 * np.pi / lam, abs=1e-15)
    assert abs(oracle - got) / abs(got) < 0.01


def test_general_nonstationary_flag_and_decay():
    p = 0.08
    rep = stationary_general(
        lambda c: p * c[0], lambda c: np.exp(-c[0] ** 2), [(-8.0, 8.0)]
    )
    assert rep.nonstationary
    assert rep.critical_point is None
    vals = {
        lam: abs(
            trapz_osc(
                lambda x, L=lam: np.exp(1j * L * p * x) * np.exp(-(x ** 2)),
                -8.0,
                8.0,
                2 ** 14,
            )
        )
        for lam in (50.0, 100.0)
    }
    # the true transform is sqrt(pi) e^{-(lam p)^2/4}
    assert vals[50.0] == pytest.approx(np.sqrt(np.pi) * np.exp(-4.0), rel=1e-10)
    assert vals[100.0] <= vals[50.0] / 8.0


def test_general_multiple_critical_points_raise():
    with pytest.raises(AmbiguousCriticalPointsError) as err:
        stationary_general(
            lambda c: np.cos(c[0]), lambda c: 1.0 + 0.0 * c[0], [(-4.0, 4.0)]
        )
    assert len(err.value.points) == 3


def test_general_rejects_bad_box():
    with pytest.raises(ParameterError, match="box"):
        stationary_general(lambda c: c[0] ** 2, lambda c: 1.0 + 0.0 * c[0], [])
    with pytest.raises(ParameterError, match="box"):
        stationary_general(
            lambda c: c[0] ** 2, lambda c: 1.0 + 0.0 * c[0], [(2.0, 1.0)]
        )


# ---------------------------------------------------------------------------
# imaginary-Gaussian Fourier transform


def test_gaussian_fourier_scalar_values():
    assert gaussian_fourier(np.array([[1.0]]), +1, [0.0]) == pytest.approx(
        np.exp(1j * np.pi / 4)
    )
    assert gaussian_fourier(np.array([[1.0]]), -1, [0.0]) == pytest.approx(
        np.exp(-1j * np.pi / 4)
    )


def test_gaussian_fourier_hyperbolic():
    Q = np.diag([1.0, -1.0])
    xi = np.array([0.7, 0.3])
    got = gaussian_fourier(Q, +1, xi)
    ref = np.exp(-0.5j * (xi[0] ** 2 - xi[1] ** 2))
    assert got == pytest.approx(ref, rel=1e-14)


def test_gaussian_fourier_conjugation_and_inversion():
    rng = np.random.default_rng(7)
    for _ in range(10):
        A = rng.standard_normal((3, 3))
        Q = A + A.T + 0.1 * np.eye(3)
        if abs(np.linalg.det(Q)) < 1e-2:
            continue
        xi = rng.standard_normal(3)
        f = gaussian_fourier(Q, +1, xi)
        assert gaussian_fourier(Q, -1, xi) == pytest.approx(np.conj(f), rel=1e-12)
        # transforming twice returns the original Gaussian: constants cancel
        c1 = gaussian_fourier(Q, +1, np.zeros(3))
        c2 = gaussian_fourier(np.linalg.inv(Q), -1, np.zeros(3))
        assert c1 * c2 == pytest.approx(1.0, rel=1e-12)


def test_gaussian_fourier_matches_quadratic_expansion():
    # integral e^{i<Qx,x>/2} dx = (2 pi)^{n/2} * transform value at xi = 0
    Q = np.array([[2.0, 0.5], [0.5, 1.0]])
    exp = stationary_quadratic(Q, lambda c: 1.0 + 0.0 * c[0], 0)
    assert exp.evaluate(1.0) / (2 * np.pi) == pytest.approx(
        gaussian_fourier(Q, +1, np.zeros(2)), rel=1e-13
    )


def test_gaussian_fourier_rejections():
    with pytest.raises(ParameterError, match="sign"):
        gaussian_fourier(np.eye(2), 2, np.zeros(2))
    with pytest.raises(ParameterError, match="dimension"):
        gaussian_fourier(np.eye(2), +1, np.zeros(3))
    with pytest.raises(SingularMatrixError):
        gaussian_fourier(np.diag([1.0, 0.0]), +1, np.zeros(2))
