"""Weak-coupling series for the ground state of V(x) = w^2 x^2/2 + i g x^3.

The wave function is written as a Gaussian times exp(phi), phi expanded in
powers of the dimensionless coupling ghat = g*sqrt(hbar/omega^5), and each
order expanded in powers of the rescaled coordinate.  The coefficients obey
a closed two-index recursion that is iterated here in exact Gaussian-rational
arithmetic; the energy coefficients eps_k come out as exact rationals with
all odd orders vanishing.

The recursion for the coefficient of the m-th coordinate power at coupling
order k couples it to the (m+2)-nd coefficient of the same order and to a
convolution of lower orders, so each order is filled in descending m.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .exact_algebra import GR_ZERO, Fraction as _F, GaussRational


@dataclass(frozen=True)
class WaveCorrectionTable:
    """Coefficients c[k][m] of the exponent correction, k = 1..order, m = 1..k+2.

    Entries outside the stored range are identically zero, which encodes the
    structural cutoff m <= k + 2.
    """

    order: int
    _table: tuple[tuple[GaussRational, ...], ...]

    def coefficient(self, k: int, m: int) -> GaussRational:
        if not 1 <= k <= self.order:
            raise IndexError(f"order {k} outside table (1..{self.order})")
        if m < 1 or m > k + 2:
            return GR_ZERO
        return self._table[k - 1][m - 1]

    def truncated(self, order: int) -> "WaveCorrectionTable":
        if order > self.order:
            raise ValueError("cannot extend a table by truncation")
        return WaveCorrectionTable(order, self._table[:order])


@dataclass(frozen=True)
class EnergyCoefficients:
    """Dimensionless energy coefficients eps_1..eps_order (prefactor hbar*omega)."""

    order: int
    eps: tuple[GaussRational, ...]

    def term(self, k: int) -> GaussRational:
        if not 1 <= k <= self.order:
            raise IndexError(f"order {k} outside series (1..{self.order})")
        return self.eps[k - 1]

    def real(self, k: int) -> Fraction:
        """eps_k as a plain rational; the imaginary part is identically zero."""
        value = self.term(k)
        if value.im != 0:
            raise ArithmeticError(f"eps_{k} acquired an imaginary part: {value}")
        return value.re

    def truncated(self, order: int) -> "EnergyCoefficients":
        if order > self.order:
            raise ValueError("cannot extend a series by truncation")
        return EnergyCoefficients(order, self.eps[:order])


_lock = threading.Lock()
_rows: list[tuple[GaussRational, ...]] = []
_eps: list[GaussRational] = []


def _extend(order: int) -> None:
    if not _rows:
        _rows.append(
            (
                GaussRational.of(0, -1),
                GR_ZERO,
                GaussRational.of(0, _F(-1, 3)),
            )
        )
        _eps.append(GR_ZERO)
    for k in range(len(_rows) + 1, order + 1):
        row: dict[int, GaussRational] = {}

        def c(kk: int, mm: int) -> GaussRational:
            if mm < 1 or mm > kk + 2:
                return GR_ZERO
            if kk == k:
                return row.get(mm, GR_ZERO)
            return _rows[kk - 1][mm - 1]

        for m in range(k + 2, 0, -1):
            acc = c(k, m + 2).scaled(_F((m + 2) * (m + 1), 2 * m))
            conv = GR_ZERO
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
        _rows.append(tuple(row[m] for m in range(1, k + 3)))

        pair_sum = GR_ZERO
        for l in range(1, k):
            pair_sum = pair_sum + _rows[l - 1][0] * _rows[k - l - 1][0]
        _eps.append(-row[2] - pair_sum.scaled(_F(1, 2)))


def ground_state_series(order: int) -> tuple[WaveCorrectionTable, EnergyCoefficients]:
    """Exact wave-function corrections and energy coefficients through `order`.

    First order is fixed by direct substitution: c_1 = -i, c_2 = 0,
    c_3 = -i/3 and eps_1 = 0.  Higher orders follow from the recursion,
    evaluated for m descending from k+2 so that the same-order coupling to
    m+2 is already available; the energy coefficient then uses the m = 2
    entry plus a convolution of the m = 1 entries of lower orders.

    Results are cached module-wide and extended incrementally, so repeated
    calls are cheap.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    with _lock:
        if len(_rows) < order:
            _extend(order)
        table = WaveCorrectionTable(order, tuple(_rows[:order]))
        energy = EnergyCoefficients(order, tuple(_eps[:order]))
    return table, energy


def preload(table: WaveCorrectionTable, energy: EnergyCoefficients) -> None:
    """Seed the module cache from a deserialized table (used by the CLI cache)."""
    if table.order != energy.order:
        raise ValueError("table and energy series disagree on the order")
    with _lock:
        if table.order > len(_rows):
            _rows[:] = list(table._table)
            _eps[:] = list(energy.eps)


def computed_order() -> int:
    """Largest order currently held in the module cache."""
    with _lock:
        return len(_rows)


def energy_fraction(k: int) -> Fraction:
    """Convenience access to eps_k as an exact rational."""
    _, energy = ground_state_series(k)
    return energy.real(k)


def dimensionful_energy(order: int, hbar: float, omega: float, g: float) -> float:
    """Truncated ground-state energy hbar*omega*[1/2 + sum (hbar g^2/omega^5)^k eps_2k].

    `order` counts powers of the coupling g; only even orders contribute.
    """
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    total = 0.5
    if order >= 2:
        _, energy = ground_state_series(order)
        x = hbar * g * g / omega**5
        for k in range(1, order // 2 + 1):
            total += float(energy.real(2 * k)) * x**k
    return hbar * omega * total
