import random
from fractions import Fraction as F

import pytest

from cubicvpt import bender_wu, vpt
from cubicvpt.exact_algebra import QuinticSurd, TruncatedSeries, half_binomial
from cubicvpt.verification import B0_REFERENCE, grid_pms_oracle

TABLE_B0 = [0.742751023, 0.764570478, 0.758783545, 0.762843684, 0.762849959]


# ---------------------------------------------------------------------------
# tricked energy series
# ---------------------------------------------------------------------------


def test_trick_series_first_order_closed_form():
    trick = vpt.trick_reexpand_energy(1)
    rng = random.Random(3)
    for _ in range(20):
        alpha = F(rng.randint(1, 9), rng.randint(1, 9))
        omega = F(rng.randint(1, 9), rng.randint(1, 9))
        Omega = F(rng.randint(1, 9), rng.randint(1, 9))
        expected = Omega / 4 + omega**2 / (4 * Omega) + alpha * F(11, 8) / Omega**4
        assert trick.value_exact(alpha, omega, Omega) == expected


def test_trick_series_identity_at_equal_frequencies():
    rng = random.Random(17)
    for order in range(1, 7):
        trick = vpt.trick_reexpand_energy(order)
        for _ in range(10):
            alpha = F(rng.randint(1, 12), rng.randint(1, 12))
            omega = F(rng.randint(1, 12), rng.randint(1, 12))
            assert trick.value_exact(alpha, omega, omega) == trick.untricked_exact(
                alpha, omega
            )


def _reexpansion_oracle(order, alpha, omega, Omega):
    """Independent symbolic re-expansion via truncated-series arithmetic.

    Substitutes omega -> Omega*sqrt(1 + alpha*r) into each series term,
    expands the square root as a formal series in alpha (through Newton's
    iteration, not the binomial shortcut), truncates at alpha^order and
    evaluates exactly.
    """
    r = (omega**2 - Omega**2) / (alpha * Omega**2)
    _, energy = bender_wu.ground_state_series(2 * order) if order else (None, None)
    eps = [F(1, 2)] + [energy.real(2 * k) for k in range(1, order + 1)]
    sqrt_series = TruncatedSeries.rational([1, r], order).sqrt()
    total = TruncatedSeries.rational([0], order)
    for k in range(order + 1):
        factor = sqrt_series.pow_int(1 - 5 * k).scaled(eps[k] * Omega ** (1 - 5 * k))
        shifted = [F(0)] * k + factor.coefficients[: order + 1 - k]
        total = total + TruncatedSeries.rational(shifted, order)
    return sum(c * alpha**j for j, c in enumerate(total.coefficients))


def test_trick_series_against_series_substitution_oracle():
    rng = random.Random(8)
    for order in (1, 2, 3):
        trick = vpt.trick_reexpand_energy(order)
        for _ in range(8):
            alpha = F(rng.randint(1, 7), rng.randint(1, 7))
            omega = F(rng.randint(1, 7), rng.randint(1, 7))
            Omega = F(rng.randint(1, 7), rng.randint(1, 7))
            assert trick.value_exact(alpha, omega, Omega) == _reexpansion_oracle(
                order, alpha, omega, Omega
            )


def test_trick_series_float_evaluation_consistent_with_exact():
    trick = vpt.trick_reexpand_energy(2)
    exact = trick.value_exact(F(1, 3), F(1), F(3, 2))
    value = trick.value(1 / 3, 1.0, 1.5)
    assert value == pytest.approx(float(exact), rel=1e-13)


# ---------------------------------------------------------------------------
# strong-coupling profile and its optimization
# ---------------------------------------------------------------------------


def test_profile_first_order_closed_form():
    profile = vpt.strong_coupling_profile(1)
    assert profile.d == (F(1, 4), F(11, 8))
    for omega_hat in (0.7, 1.3, 2.9):
        expected = omega_hat / 4 + 11 / (8 * omega_hat**4)
        assert profile.value(omega_hat) == pytest.approx(expected, rel=1e-14)


def test_profile_derivatives_match_finite_differences():
    rng = random.Random(23)
    for order in (1, 2, 3, 5):
        profile = vpt.strong_coupling_profile(order)
        for _ in range(8):
            x = rng.uniform(1.2, 3.0)
            h = 1e-6 * x
            fd1 = (profile.value(x + h) - profile.value(x - h)) / (2 * h)
            fd2 = (profile.derivative(x + h) - profile.derivative(x - h)) / (2 * h)
            assert profile.derivative(x) == pytest.approx(fd1, rel=1e-6, abs=1e-9)
            assert profile.second_derivative(x) == pytest.approx(fd2, rel=1e-6, abs=1e-9)


def test_naive_first_order_optimum():
    solution = vpt.naive_b0(1)
    assert solution.criticality == "extremum"
    assert solution.omega_var == pytest.approx(22 ** 0.2, rel=1e-12)
    assert solution.b0_estimate == pytest.approx(5 * 22 ** 0.2 / 16, rel=1e-12)
    assert len(solution.candidates) == 1
    assert solution.residuals[0] < 1e-13
    deviation = abs(solution.b0_estimate - B0_REFERENCE) / B0_REFERENCE
    assert round(deviation, 2) == 0.24


def test_naive_second_order_against_grid_oracle():
    solution = vpt.naive_b0(2)
    profile = vpt.strong_coupling_profile(2)
    points = grid_pms_oracle(profile.value, (0.1, 10.0), 4000)
    assert any(abs(p - solution.omega_var) < 1e-6 for p in points)
    assert solution.b0_estimate == pytest.approx(
        profile.value(solution.omega_var), rel=1e-12
    )


def test_naive_deviations_shrink_in_trend():
    devs = []
    for order in range(1, 13):
        solution = vpt.naive_b0(order)
        devs.append(abs(solution.b0_estimate - B0_REFERENCE) / B0_REFERENCE)
    # trend check: the geometric mean of consecutive triples decreases
    import math

    means = [
        math.exp(sum(map(math.log, devs[i : i + 3])) / 3) for i in range(len(devs) - 2)
    ]
    assert all(b < a for a, b in zip(means, means[1:]))
    assert devs[-1] < 2e-3


def test_naive_no_pms_point_error():
    with pytest.raises(vpt.NoPmsPointError):
        vpt.naive_b0(1, bracket=(8.0, 16.0))


def test_naive_order_validation():
    with pytest.raises(ValueError):
        vpt.naive_b0(0)


# ---------------------------------------------------------------------------
# order-1 closed forms
# ---------------------------------------------------------------------------


def test_naive_subleading_omega_series():
    data = vpt.subleading_order1()
    rho = QuinticSurd.root(22)
    assert data.omega0 == rho
    assert data.omega1 == rho.pow_int(-1).scaled(F(1, 5))
    assert data.omega2 == rho.pow_int(-3).scaled(F(1, 25))
    assert float(data.omega0) == pytest.approx(22 ** 0.2, rel=1e-14)
    assert float(data.omega1) == pytest.approx(1 / (5 * 22 ** 0.2), rel=1e-14)
    assert float(data.omega2) == pytest.approx(1 / (25 * 10648 ** 0.2), rel=1e-14)


def test_naive_subleading_b_coefficients_exact():
    data = vpt.subleading_order1()
    rho = QuinticSurd.root(22)
    assert data.b0 == rho.scaled(F(5, 16))
    assert data.b1 == rho.pow_int(-1).scaled(F(1, 4))
    assert data.b2 == rho.pow_int(-3).scaled(F(-1, 40))


def test_naive_subleading_b1_against_numeric_optimization():
    # optimize the first-order tricked energy at a large coupling and peel off
    # the subleading coefficient numerically
    alpha = 1e10
    from cubicvpt.rootfind import newton_polish

    omega_star = newton_polish(
        lambda om: om**5 - om**3 - 22 * alpha,
        lambda om: 5 * om**4 - 3 * om**2,
        (22 * alpha) ** 0.2,
        iterations=60,
    )
    energy = omega_star / 4 + 1 / (4 * omega_star) + alpha * 11 / (8 * omega_star**4)
    data = vpt.subleading_order1()
    b1_estimate = (energy / alpha**0.2 - float(data.b0)) / alpha**-0.4
    assert b1_estimate == pytest.approx(float(data.b1), abs=1e-3)


def test_naive_subleading_omega_series_satisfies_quintic():
    # envelope consistency: the expansion coefficients solve
    # u^5 - eps*u^3 - 22 = 0 through second order in eps
    data = vpt.subleading_order1()
    base = F(22)
    zero, one = QuinticSurd.of(base, 0), QuinticSurd.of(base, 1)
    u = TruncatedSeries([data.omega0, data.omega1, data.omega2], 2, zero, one)
    eps = TruncatedSeries([zero, one, zero], 2, zero, one)
    residual = u.pow_int(5) - eps * u.pow_int(3) - TruncatedSeries(
        [QuinticSurd.of(base, 22), zero, zero], 2, zero, one
    )
    assert all(c == zero for c in residual.coefficients)


def test_veff_background_expansion_coefficients():
    data = vpt.veff_strong_coupling_X1()
    x = QuinticSurd.root(F(1, 24))
    assert data.x0 == x
    assert data.x1 == QuinticSurd.of(F(1, 24), F(-2, 15))
    assert data.x2 == x.pow_int(-1).scaled(F(1, 75))
    assert float(data.x0) == pytest.approx(24 ** -0.2, rel=1e-14)
    assert float(data.x2) == pytest.approx(24 ** 0.2 / 75, rel=1e-14)


def test_veff_order1_b_coefficients():
    data = vpt.veff_strong_coupling_X1()
    x = QuinticSurd.root(F(1, 24))
    assert data.b0 == x.pow_int(3).scaled(5)
    assert data.b1 == x.pow_int(2).scaled(F(-1, 2))
    assert data.b2 == x.scaled(F(1, 15))
    assert float(data.b0) == pytest.approx(0.742751023, abs=1e-9)
    assert float(data.b1) == pytest.approx(-1 / (4 * 18 ** 0.2), rel=1e-13)
    assert float(data.b2) == pytest.approx(1 / (15 * 24 ** 0.2), rel=1e-13)


def test_veff_background_expansion_against_numeric_root():
    # the first-order background stationarity at strong coupling: solve the
    # condition numerically at ghat = 1e4 and compare with the expansion
    from cubicvpt.rootfind import bisect

    g = 1e4
    condition = lambda y: -y - 3 * g * y * y + 0.25 * (6 * g) ** 0.5 * y**-0.5
    y_star = bisect(condition, 1e-5, 1.0, iterations=200)
    data = vpt.veff_strong_coupling_X1()
    eps = g ** -0.8
    expansion = g ** -0.2 * (
        float(data.x0) + float(data.x1) * eps + float(data.x2) * eps * eps
    )
    assert y_star == pytest.approx(expansion, rel=1e-6)


# ---------------------------------------------------------------------------
# tricked effective potential
# ---------------------------------------------------------------------------


def test_veff_trick_first_order_closed_form():
    trick = vpt.veff_trick(1)
    rng = random.Random(31)
    for _ in range(20):
        y = rng.uniform(0.05, 2.0)
        Omega = rng.uniform(0.0, 2.0)
        omega, g, hbar = rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0), rng.uniform(0.5, 2.0)
        expected = (
            -0.5 * omega**2 * y * y
            - g * y**3
            + 0.5 * hbar * (Omega**2 + 6 * g * y) ** 0.5
        )
        assert trick.value(y, Omega, hbar, omega, g) == pytest.approx(expected, rel=1e-14)


def test_veff_trick_identity_at_equal_frequencies():
    rng = random.Random(5)
    for order in range(1, 6):
        trick = vpt.veff_trick(order)
        for _ in range(10):
            y = F(rng.randint(1, 9), rng.randint(1, 9))
            omega2 = F(rng.randint(1, 9), rng.randint(1, 9))
            tricked = trick.value_exact(y, omega2, omega2=omega2)
            plain = trick.untricked_exact(y, omega2=omega2)
            assert tricked == plain


def _veff_reexpansion_oracle(order, y, w, omega2, hbar=F(1), g=F(1)):
    """Series substitution in hbar: expand each loop term of the potential
    with omega^2 -> w + hbar*r*w ... around S = w + 6gy and truncate."""
    from cubicvpt import effective_potential

    r = effective_potential.loop_coefficients(order).r
    S = w + 6 * g * y
    ratio = (omega2 - w) / S
    a = -omega2 * y * y / 2 - g * y**3
    b = F(0)
    sqrt_series = TruncatedSeries.rational([1, ratio], order).sqrt()
    for l in range(1, order + 1):
        p = 1 - 5 * (l - 1)
        inner = sqrt_series.pow_int(p)
        keep = sum(inner.coefficients[j] for j in range(order - l + 1))
        coeff = r[l - 1] * hbar**l * g ** (2 * (l - 1)) * keep
        if p % 2 == 0:
            a += coeff * S ** (p // 2)
        else:
            b += coeff * S ** ((p - 1) // 2)
    return a, b


def test_veff_trick_against_series_substitution_oracle():
    rng = random.Random(77)
    trick = vpt.veff_trick(3)
    for _ in range(20):
        y = F(rng.randint(1, 9), rng.randint(1, 9))
        w = F(rng.randint(0, 9), rng.randint(1, 9))
        omega2 = F(rng.randint(1, 9), rng.randint(1, 9))
        got = trick.value_exact(y, w, omega2=omega2)
        want = _veff_reexpansion_oracle(3, y, w, omega2)
        assert got == want


def test_veff_trick_exact_matches_float():
    trick = vpt.veff_trick(3)
    y, w, omega2 = F(1, 2), F(3, 4), F(0)
    a, b = trick.value_exact(y, w, omega2=omega2)
    S = float(w + 6 * y)
    assert trick.value(0.5, 0.75 ** 0.5) == pytest.approx(
        float(a) + float(b) * S ** 0.5, rel=1e-13
    )


def test_veff_trick_gradients_match_finite_differences():
    rng = random.Random(13)
    for order in (1, 2, 3, 4):
        trick = vpt.veff_trick(order)
        for _ in range(6):
            y = rng.uniform(0.2, 1.5)
            Omega = rng.uniform(0.3, 2.0)
            omega, g = rng.uniform(0.0, 1.5), rng.uniform(0.3, 1.5)
            hy = 1e-6 * y
            hO = 1e-6 * Omega
            gy, gO = trick.gradient(y, Omega, 1.0, omega, g)
            fd_y = (
                trick.value(y + hy, Omega, 1.0, omega, g)
                - trick.value(y - hy, Omega, 1.0, omega, g)
            ) / (2 * hy)
            fd_O = (
                trick.value(y, Omega + hO, 1.0, omega, g)
                - trick.value(y, Omega - hO, 1.0, omega, g)
            ) / (2 * hO)
            assert gy == pytest.approx(fd_y, rel=1e-6, abs=1e-8)
            assert gO == pytest.approx(fd_O, rel=1e-6, abs=1e-8)


def test_veff_trick_domain_error():
    trick = vpt.veff_trick(2)
    with pytest.raises(ValueError):
        trick.value(-0.5, 0.1)


# ---------------------------------------------------------------------------
# two-parameter optimization
# ---------------------------------------------------------------------------


def test_veff_first_order_solution():
    solution = vpt.veff_b0(1)
    assert solution.omega_var == 0.0
    assert solution.background == pytest.approx(24 ** -0.2, abs=1e-10)
    assert solution.b0_estimate == pytest.approx(5 / (2 * 432 ** 0.2), rel=1e-12)
    assert solution.b0_estimate == pytest.approx(0.742751023, abs=1e-9)
    assert solution.criticality == "extremum"
    assert max(solution.residuals) < 1e-10


def test_veff_higher_orders_track_reference():
    for order, expected in ((3, TABLE_B0[2]), (4, TABLE_B0[3]), (5, TABLE_B0[4])):
        solution = vpt.veff_b0(order)
        assert solution.b0_estimate == pytest.approx(expected, abs=1e-8), order
        assert max(solution.residuals) < 1e-10


def test_veff_candidate_lists_are_reported():
    solution = vpt.veff_b0(5)
    assert len(solution.candidates) >= 2
    assert any(c.omega_var > 0 for c in solution.candidates)
    chosen = [
        c
        for c in solution.candidates
        if abs(c.value - solution.b0_estimate) < 1e-12
    ]
    assert chosen and chosen[0].criticality == solution.criticality


def test_veff_first_order_at_finite_couplings():
    solution = vpt.veff_b0(1, hbar=1.0, g=1.0, omega=1.0)
    assert solution.omega_var == 0.0
    trick = vpt.veff_trick(1)
    gy, gO = trick.gradient(solution.background, solution.omega_var, 1.0, 1.0, 1.0)
    assert abs(gy) < 1e-12
    assert abs(gO) < 1e-12


def test_veff_solution_json_shape():
    solution = vpt.veff_b0(1)
    payload = solution.to_json_dict()
    assert set(payload) == {
        "variant",
        "N",
        "omega_var",
        "y",
        "b0",
        "criticality",
        "residuals",
        "candidates",
    }
    assert payload["variant"] == "veff"
    assert payload["N"] == 1
    assert payload["candidates"][0]["criticality"] == "extremum"


def test_veff_order_validation():
    with pytest.raises(ValueError):
        vpt.veff_b0(0)
