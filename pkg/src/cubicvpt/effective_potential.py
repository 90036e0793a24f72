"""Effective potential of the cubic oscillator from a background recursion.

The wave function ansatz exp(Xhat*xhat - xhat^2/2 + phi) turns the
Schroedinger equation with a constant external current into a recursion for
coordinate-polynomial coefficients c_m^(k)(Xhat) and potential terms
V_k(Xhat), both exact polynomials over Gaussian rationals.  Per coupling
order k the schedule is forced by the data dependencies: fill m = k+2 down
to 2, then assemble V_k, then obtain the m = 1 coefficient from V_k'.

Power counting in hbar maps the double series onto the loop expansion
V^(l)(X) = r_l * g^(2(l-1)) * wtilde^(1-5(l-1)) with
wtilde = sqrt(omega^2 + 6igX): the term ghat^k Xhat^j carries
hbar^(1+(k-j)/2), so loop l collects the cells with k - j = 2(l-1) and the
pure number r_l is the constant coefficient of V_(2(l-1)).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from . import bender_wu
from .exact_algebra import (
    BP_X,
    BackgroundPoly,
    GR_ZERO,
    GaussRational,
    TruncatedSeries,
    half_binomial,
    i_power,
)

_F = Fraction


@dataclass(frozen=True)
class BackgroundWaveTable:
    """Polynomial coefficients c[k][m](Xhat), k = 1..order, m = 1..k+2."""

    order: int
    _table: tuple[tuple[BackgroundPoly, ...], ...]

    def coefficient(self, k: int, m: int) -> BackgroundPoly:
        if not 1 <= k <= self.order:
            raise IndexError(f"order {k} outside table (1..{self.order})")
        if m < 1 or m > k + 2:
            return BackgroundPoly()
        return self._table[k - 1][m - 1]

    def truncated(self, order: int) -> "BackgroundWaveTable":
        if order > self.order:
            raise ValueError("cannot extend a table by truncation")
        return BackgroundWaveTable(order, self._table[:order])


@dataclass(frozen=True)
class EffectivePotentialSeries:
    """Exact polynomials V_k(Xhat), k = 1..order.

    The full dimensionless potential is 1/2 + Xhat^2/2 + sum_k ghat^k V_k.
    """

    order: int
    terms: tuple[BackgroundPoly, ...]

    def term(self, k: int) -> BackgroundPoly:
        if not 1 <= k <= self.order:
            raise IndexError(f"order {k} outside series (1..{self.order})")
        return self.terms[k - 1]

    def truncated(self, order: int) -> "EffectivePotentialSeries":
        if order > self.order:
            raise ValueError("cannot extend a series by truncation")
        return EffectivePotentialSeries(order, self.terms[:order])


_lock = threading.Lock()
_c_rows: list[tuple[BackgroundPoly, ...]] = []
_v_terms: list[BackgroundPoly] = []


def _extend(order: int) -> None:
    if not _c_rows:
        c1 = BackgroundPoly.of(
            [GaussRational.of(0, _F(1, 2)), GR_ZERO, GaussRational.of(0, 2)]
        )
        c2 = BackgroundPoly.of([GR_ZERO, GaussRational.of(0, _F(-1, 2))])
        c3 = BackgroundPoly.of([GaussRational.of(0, _F(-1, 3))])
        _c_rows.append((c1, c2, c3))
        _v_terms.append(
            BackgroundPoly.of(
                [GR_ZERO, GaussRational.of(0, _F(3, 2)), GR_ZERO, GaussRational.of(0, 1)]
            )
        )
    for k in range(len(_c_rows) + 1, order + 1):
        row: dict[int, BackgroundPoly] = {}

        def c(kk: int, mm: int) -> BackgroundPoly:
            if mm < 1 or mm > kk + 2:
                return BackgroundPoly()
            if kk == k:
                return row.get(mm, BackgroundPoly())
            return _c_rows[kk - 1][mm - 1]

        for m in range(k + 2, 1, -1):
            acc = c(k, m + 2).scaled(_F((m + 2) * (m + 1), 2 * m))
            acc = acc + (BP_X * c(k, m + 1)).scaled(_F(m + 1, m))
            conv = BackgroundPoly()
            for l in range(1, k):
                for n in range(1, m + 2):
                    a = c(l, n)
                    if a.is_zero():
                        continue
                    b = c(k - l, m + 2 - n)
                    if b.is_zero():
                        continue
                    conv = conv + (a * b).scaled(n * (m + 2 - n))
            row[m] = acc + conv.scaled(_F(1, 2 * m))

        cross = BackgroundPoly()
        pair_sum = BackgroundPoly()
        for l in range(1, k):
            cross = cross + c(k - l, 2) * c(l, 1) + c(k - l, 1) * c(l, 2)
            pair_sum = pair_sum + c(l, 1) * c(k - l, 1)
        vk = (
            -row[2]
            - (BP_X * row[3]).scaled(3)
            - (BP_X * BP_X * row[2]).scaled(2)
            - (BP_X * cross)
            - pair_sum.scaled(_F(1, 2))
        )
        row[1] = row[3].scaled(3) + (BP_X * row[2]).scaled(2) + vk.derivative() + cross
        _c_rows.append(tuple(row[m] for m in range(1, k + 3)))
        _v_terms.append(vk)


def veff_series(order: int) -> tuple[BackgroundWaveTable, EffectivePotentialSeries]:
    """Wave-coefficient polynomials and potential terms through ghat^order."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    with _lock:
        if len(_c_rows) < order:
            _extend(order)
        table = BackgroundWaveTable(order, tuple(_c_rows[:order]))
        series = EffectivePotentialSeries(order, tuple(_v_terms[:order]))
    return table, series


def preload(table: BackgroundWaveTable, series: EffectivePotentialSeries) -> None:
    """Seed the module cache from a deserialized table (used by the CLI cache)."""
    if table.order != series.order:
        raise ValueError("table and potential series disagree on the order")
    with _lock:
        if table.order > len(_c_rows):
            _c_rows[:] = list(table._table)
            _v_terms[:] = list(series.terms)


def computed_order() -> int:
    """Largest order currently held in the module cache."""
    with _lock:
        return len(_c_rows)


@dataclass(frozen=True)
class GExpansionTerm:
    """One monomial coeff * g^g_pow * X^x_pow * hbar^hbar_pow * omega^omega_pow."""

    g_pow: int
    x_pow: int
    coeff: GaussRational
    hbar_pow: int
    omega_pow: int

    def evaluate(self, hbar: float, omega: float, g: float, x: float) -> complex:
        return (
            complex(self.coeff)
            * g**self.g_pow
            * x**self.x_pow
            * hbar**self.hbar_pow
            * omega**self.omega_pow
        )


def g_expansion(order: int) -> list[GExpansionTerm]:
    """Dimensionful expansion of the effective potential in powers of g.

    Unit restoration of the dimensionless series: Xhat = X*sqrt(omega/hbar)
    and ghat = g*sqrt(hbar/omega^5) with overall prefactor hbar*omega, so the
    cell ghat^k Xhat^j becomes g^k X^j hbar^(1+(k-j)/2) omega^(1-(5k-j)/2).
    Only cells with even k - j survive, so all exponents are integers.  The
    coupling-free terms (harmonic energy and classical parabola) are included
    as g_pow = 0.
    """
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    terms = [
        GExpansionTerm(0, 0, GaussRational.of(_F(1, 2)), 1, 1),
        GExpansionTerm(0, 2, GaussRational.of(_F(1, 2)), 0, 2),
    ]
    if order >= 1:
        _, series = veff_series(order)
        for k in range(1, order + 1):
            vk = series.term(k)
            for j in range(0, vk.degree + 1):
                coeff = vk.coefficient(j)
                if coeff.is_zero():
                    continue
                terms.append(
                    GExpansionTerm(
                        g_pow=k,
                        x_pow=j,
                        coeff=coeff,
                        hbar_pow=1 + (k - j) // 2,
                        omega_pow=1 - (5 * k - j) // 2,
                    )
                )
    return terms


@dataclass(frozen=True)
class LoopExpansion:
    """Pure numbers r_l of the loop expansion, l = 1..order.

    Term l is r_l * g^(2(l-1)) * wtilde^(1-5(l-1)); the classical l = 0 term
    omega^2 X^2/2 + i g X^3 is implicit.
    """

    order: int
    r: tuple[Fraction, ...]

    def coefficient(self, l: int) -> Fraction:
        if not 1 <= l <= self.order:
            raise IndexError(f"loop {l} outside expansion (1..{self.order})")
        return self.r[l - 1]

    @staticmethod
    def term_template(l: int) -> str:
        return f"r_{l} * g^{2 * (l - 1)} * wtilde^{1 - 5 * (l - 1)}"


def loop_coefficients(loops: int) -> LoopExpansion:
    """r_1..r_loops; r_1 = 1/2 and r_l is the constant coefficient of V_(2(l-1))."""
    if loops < 1:
        raise ValueError(f"loops must be >= 1, got {loops}")
    values = [_F(1, 2)]
    if loops >= 2:
        _, series = veff_series(2 * (loops - 1))
        for l in range(2, loops + 1):
            const = series.term(2 * (l - 1)).coefficient(0)
            if const.im != 0:
                raise ArithmeticError(f"r_{l} acquired an imaginary part: {const}")
            values.append(const.re)
    return LoopExpansion(loops, tuple(values))


@dataclass(frozen=True)
class LoopCell:
    loop: int
    x_pow: int
    expected: GaussRational
    actual: GaussRational

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass(frozen=True)
class LoopConsistencyReport:
    cells: tuple[LoopCell, ...]

    @property
    def all_pass(self) -> bool:
        return all(cell.passed for cell in self.cells)

    def failures(self) -> list[LoopCell]:
        return [cell for cell in self.cells if not cell.passed]


def loop_consistency_check(loops: int, order: int) -> LoopConsistencyReport:
    """Exact cross-check of the recursion against the loop closed form.

    For each loop l and coordinate power j with 2(l-1)+j <= order, the
    coefficient of Xhat^j in V_(2(l-1)+j) must equal the j-th Taylor
    coefficient of r_l * wtilde^(1-5(l-1)) in powers of 6igX/omega^2, which
    is r_l * C((1-5(l-1))/2, j) * (6i)^j after unit restoration.
    """
    if order < 2 * (loops - 1):
        raise ValueError("order too small for the requested number of loops")
    expansion = loop_coefficients(loops)
    _, series = veff_series(order) if order >= 1 else (None, None)
    cells = []
    for l in range(1, loops + 1):
        p = _F(1 - 5 * (l - 1), 2)
        for j in range(0, order - 2 * (l - 1) + 1):
            k = 2 * (l - 1) + j
            if k < 1:
                continue
            actual = series.term(k).coefficient(j)
            magnitude = expansion.coefficient(l) * half_binomial(p, j) * _F(6) ** j
            expected = i_power(j).scaled(magnitude)
            cells.append(LoopCell(l, j, expected, actual))
    return LoopConsistencyReport(tuple(cells))


@dataclass(frozen=True)
class BackgroundCoefficient:
    """Coefficient of hbar^order in X_e/i: value * g^g_pow * omega^omega_pow."""

    order: int
    value: Fraction
    g_pow: int
    omega_pow: int

    def evaluate(self, omega: float, g: float) -> float:
        return float(self.value) * g**self.g_pow * omega**self.omega_pow


@dataclass(frozen=True)
class EnergyTerm:
    """Coefficient of hbar^order in the extremal energy: value * g^g_pow * omega^omega_pow."""

    order: int
    value: Fraction
    g_pow: int
    omega_pow: int

    def evaluate(self, omega: float, g: float) -> float:
        return float(self.value) * g**self.g_pow * omega**self.omega_pow


@dataclass(frozen=True)
class PerturbativeExtremum:
    """Order-by-order extremum of the effective potential in powers of hbar."""

    background: tuple[BackgroundCoefficient, ...]
    energy: tuple[EnergyTerm, ...]

    def background_value(self, hbar: float, omega: float, g: float) -> complex:
        return 1j * sum(
            c.evaluate(omega, g) * hbar**c.order for c in self.background
        )

    def energy_value(self, hbar: float, omega: float, g: float) -> float:
        return sum(t.evaluate(omega, g) * hbar**t.order for t in self.energy)


def _loop_power_series(y: TruncatedSeries, exponent: Fraction, order: int) -> TruncatedSeries:
    """(1 - 6*y)^exponent as a truncated series, y having zero constant term."""
    out = TruncatedSeries.rational([1], order)
    term = TruncatedSeries.rational([1], order)
    minus6y = y.scaled(_F(-6))
    for j in range(1, order + 1):
        term = term * minus6y
        out = out + term.scaled(half_binomial(exponent, j))
    return out


def perturbative_extremum(order: int) -> PerturbativeExtremum:
    """Extremize the effective potential order by order in hbar.

    Works in dimensionless variables (hbar = omega = g = 1; powers restored
    from dimensional analysis afterwards).  On the slice X = i*Y the
    stationarity condition is real:

        Y - 3*Y^2 + 3 * sum_l hbar^l p_l r_l (1 - 6Y)^((p_l-2)/2) = 0,

    with p_l = 1 - 5(l-1).  Y = sum_j X_j hbar^j starts at X_0 = 0 (the
    perturbative root of the classical equation), and the coefficient of
    hbar^n is linear in the new unknown X_n with unit pivot, so each order
    is a single exact rational solve.  Substituting back and re-expanding
    the potential in hbar reproduces the plain energy series.
    """
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    loops = loop_coefficients(order + 1)
    y = TruncatedSeries.rational([0], order)

    for n in range(1, order + 1):
        residual = y - y * y.scaled(3)
        for l in range(1, order + 1):
            p = 1 - 5 * (l - 1)
            power = _loop_power_series(y, _F(p - 2, 2), order)
            shift = [0] * l + [
                3 * p * loops.coefficient(l) * c for c in power.coefficients
            ]
            residual = residual + TruncatedSeries.rational(shift, order)
        # pivot of X_n in the order-n coefficient is exactly 1
        coeffs = list(y.coefficients)
        coeffs[n] = -residual.coefficients[n]
        y = TruncatedSeries.rational(coeffs, order)

    energy_order = order + 1
    ye = TruncatedSeries.rational(list(y.coefficients), energy_order)
    ysq = ye * ye
    energy = ysq * ye - ysq.scaled(_F(1, 2))
    for l in range(1, energy_order + 1):
        p = 1 - 5 * (l - 1)
        power = _loop_power_series(ye, _F(p, 2), energy_order)
        shift = [0] * l + [loops.coefficient(l) * c for c in power.coefficients]
        energy = energy + TruncatedSeries.rational(shift, energy_order)

    background = tuple(
        BackgroundCoefficient(j, y.coefficients[j], 2 * j - 1 if j else 0, 2 - 5 * j if j else 0)
        for j in range(order + 1)
    )
    energy_terms = tuple(
        EnergyTerm(n, energy.coefficients[n], 2 * (n - 1), 6 - 5 * n)
        for n in range(1, energy_order + 1)
    )
    return PerturbativeExtremum(background, energy_terms)
