from fractions import Fraction as F

import pytest

from cubicvpt import bender_wu, effective_potential
from cubicvpt.exact_algebra import (
    BackgroundPoly,
    GR_ZERO,
    GaussRational,
    half_binomial,
    i_power,
)


def test_first_order_closed_forms():
    table, series = effective_potential.veff_series(1)
    c1 = BackgroundPoly.of(
        [GaussRational.of(0, F(1, 2)), GR_ZERO, GaussRational.of(0, 2)]
    )
    c2 = BackgroundPoly.of([GR_ZERO, GaussRational.of(0, F(-1, 2))])
    c3 = BackgroundPoly.of([GaussRational.of(0, F(-1, 3))])
    assert table.coefficient(1, 1) == c1
    assert table.coefficient(1, 2) == c2
    assert table.coefficient(1, 3) == c3
    v1 = BackgroundPoly.of(
        [GR_ZERO, GaussRational.of(0, F(3, 2)), GR_ZERO, GaussRational.of(0, 1)]
    )
    assert series.term(1) == v1


def test_second_order_potential_coefficients():
    _, series = effective_potential.veff_series(2)
    v2 = series.term(2)
    assert v2.coefficient(0) == GaussRational.of(F(1, 4))
    assert v2.coefficient(2) == GaussRational.of(F(9, 4))
    assert v2.coefficient(1) == GR_ZERO
    assert v2.degree == 2


def test_third_order_matches_printed_coupling_expansion():
    _, series = effective_potential.veff_series(3)
    v3 = series.term(3)
    # dimensionful g^3 term is -3i g^3 hbar^2 X/omega^6 - (27/4) i g^3 hbar X^3/omega^5
    assert v3.coefficient(1) == GaussRational.of(0, -3)
    assert v3.coefficient(3) == GaussRational.of(0, F(-27, 4))


PRINTED_G4_EXPANSION = {
    # (g_pow, x_pow) -> (coefficient, hbar_pow, omega_pow)
    (0, 0): (GaussRational.of(F(1, 2)), 1, 1),
    (0, 2): (GaussRational.of(F(1, 2)), 0, 2),
    (1, 1): (GaussRational.of(0, F(3, 2)), 1, -1),
    (1, 3): (GaussRational.of(0, 1), 0, 0),
    (2, 0): (GaussRational.of(F(1, 4)), 2, -4),
    (2, 2): (GaussRational.of(F(9, 4)), 1, -3),
    (3, 1): (GaussRational.of(0, -3), 2, -6),
    (3, 3): (GaussRational.of(0, F(-27, 4)), 1, -5),
    (4, 0): (GaussRational.of(F(-51, 32)), 3, -9),
    (4, 4): (GaussRational.of(F(-405, 16)), 1, -7),
}


def test_g_expansion_matches_printed_form_through_fourth_order():
    terms = {(t.g_pow, t.x_pow): t for t in effective_potential.g_expansion(4)}
    for key, (coeff, hbar_pow, omega_pow) in PRINTED_G4_EXPANSION.items():
        term = terms.pop(key)
        assert term.coeff == coeff, key
        assert term.hbar_pow == hbar_pow, key
        assert term.omega_pow == omega_pow, key
    # the remaining cell is the g^4 X^2 one, whose printed form drops a power
    # of omega; dimensional analysis and the recursion both give omega^-8
    flagged = terms.pop((4, 2))
    assert flagged.coeff == GaussRational.of(-27)
    assert flagged.hbar_pow == 2
    assert flagged.omega_pow == -8
    assert not terms


def test_background_table_reduces_to_plain_recursion_at_zero():
    order = 10
    table, _ = effective_potential.veff_series(order)
    plain, _ = bender_wu.ground_state_series(order)
    zero = GR_ZERO
    for k in range(1, order + 1):
        for m in range(2, k + 3):
            assert table.coefficient(k, m)(zero) == plain.coefficient(k, m), (k, m)


def test_i_grading_of_polynomials():
    order = 10
    table, series = effective_potential.veff_series(order)
    for k in range(1, order + 1):
        polys = [series.term(k)] + [table.coefficient(k, m) for m in range(1, k + 3)]
        for poly in polys:
            for j in range(0, poly.degree + 1):
                c = poly.coefficient(j)
                if k % 2 == 0:
                    assert c.im == 0, (k, j, c)
                else:
                    assert c.re == 0, (k, j, c)


def test_cells_with_odd_parity_vanish():
    order = 10
    _, series = effective_potential.veff_series(order)
    for k in range(1, order + 1):
        poly = series.term(k)
        for j in range(0, poly.degree + 1):
            if (k - j) % 2 == 1:
                assert poly.coefficient(j) == GR_ZERO, (k, j)


def test_loop_coefficients_table():
    expansion = effective_potential.loop_coefficients(5)
    assert expansion.r == (
        F(1, 2),
        F(1, 4),
        F(-51, 32),
        F(3331, 128),
        F(-1371477, 2048),
    )


def test_loop_signs_alternate():
    expansion = effective_potential.loop_coefficients(6)
    for l in range(2, 7):
        value = expansion.coefficient(l)
        assert (value > 0) == (l % 2 == 0), (l, value)


def test_loop_template_string():
    assert effective_potential.LoopExpansion.term_template(5) == "r_5 * g^8 * wtilde^-19"
    assert effective_potential.LoopExpansion.term_template(1) == "r_1 * g^0 * wtilde^1"


def test_loop_consistency_trace_log_row():
    # one loop: Taylor coefficients of wtilde/2 reproduce the coordinate
    # dependence of V_1, V_2, ... at first order in hbar
    report = effective_potential.loop_consistency_check(1, 6)
    assert report.all_pass
    cells = {(c.loop, c.x_pow): c for c in report.cells}
    assert cells[(1, 0)].expected == GaussRational.of(F(1, 2))
    assert cells[(1, 1)].expected == GaussRational.of(0, F(3, 2))


def test_loop_consistency_derivative_cell():
    # three loops, first coordinate power: the Taylor derivative of the
    # closed form -51 g^4/(32 wtilde^9)
    report = effective_potential.loop_consistency_check(3, 5)
    cells = {(c.loop, c.x_pow): c for c in report.cells}
    cell = cells[(3, 1)]
    expected = i_power(1).scaled(F(-51, 32) * half_binomial(F(-9, 2), 1) * 6)
    assert cell.expected == expected
    assert cell.passed


def test_loop_consistency_broad():
    report = effective_potential.loop_consistency_check(4, 8)
    assert report.all_pass
    assert not report.failures()


def test_loop_validation():
    with pytest.raises(ValueError):
        effective_potential.loop_coefficients(0)
    with pytest.raises(ValueError):
        effective_potential.loop_consistency_check(3, 2)


def test_perturbative_extremum_background_coefficients():
    extremum = effective_potential.perturbative_extremum(3)
    values = {c.order: c for c in extremum.background}
    assert values[0].value == 0
    assert values[1].value == F(-3, 2)
    assert (values[1].g_pow, values[1].omega_pow) == (1, -3)
    assert values[2].value == F(33, 2)
    assert (values[2].g_pow, values[2].omega_pow) == (3, -8)


def test_perturbative_extremum_reproduces_energy_series():
    extremum = effective_potential.perturbative_extremum(3)
    _, energy = bender_wu.ground_state_series(6)
    values = {t.order: t.value for t in extremum.energy}
    assert values[1] == F(1, 2)
    assert values[2] == energy.real(2)
    assert values[3] == energy.real(4)
    assert values[4] == energy.real(6)


def test_perturbative_extremum_harmonic_limit():
    extremum = effective_potential.perturbative_extremum(2)
    assert extremum.background_value(1.0, 1.0, 0.0) == 0
    assert extremum.energy_value(1.0, 1.0, 0.0) == pytest.approx(0.5, rel=1e-15)
    assert extremum.energy_value(1.0, 2.0, 0.0) == pytest.approx(1.0, rel=1e-15)


def test_perturbative_extremum_dimensionful_evaluation():
    extremum = effective_potential.perturbative_extremum(2)
    hbar, omega, g = 1.0, 1.3, 0.2
    expected_x = 1j * (-1.5 * g / omega**3 + 16.5 * g**3 / omega**8)
    assert extremum.background_value(hbar, omega, g) == pytest.approx(expected_x)
    x = hbar * g * g / omega**5
    expected_e = hbar * omega * (0.5 + 11 / 8 * x - 465 / 32 * x * x)
    assert extremum.energy_value(hbar, omega, g) == pytest.approx(expected_e, rel=1e-12)


def test_veff_series_validation():
    with pytest.raises(ValueError):
        effective_potential.veff_series(0)
