"""Independent floating-point oracles.

Nothing here shares code with the exact recursions: the energy series is
recomputed by matrix Rayleigh-Schrodinger perturbation theory in a truncated
harmonic-oscillator basis, and optimizer results are cross-checked by a dense
grid scan over the variational parameter.  Double precision is deliberate;
agreement with the exact path is asserted at tolerances that double-precision
linear algebra supports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .rootfind import bisect, sign_change_brackets

#: Reference value for the ground-state energy of p^2/2 + i x^3 (the leading
#: strong-coupling coefficient), taken from the published high-precision
#: numerics and treated as ground truth here.
B0_REFERENCE = 0.762851773


@dataclass(frozen=True)
class OscillatorBasisOperator:
    """Dense matrix of x^3 in the dimensionless harmonic-oscillator basis."""

    n_max: int
    matrix: np.ndarray

    @staticmethod
    def build(n_max: int) -> "OscillatorBasisOperator":
        """Cube of the tridiagonal position matrix x[n, n+1] = sqrt((n+1)/2).

        Entries vanish unless |n - n'| is 1 or 3; rows within three of the
        cutoff are affected by truncation, which is why callers must keep
        n_max comfortably above the perturbation order they target.
        """
        if n_max < 4:
            raise ValueError(f"n_max too small: {n_max}")
        x = np.zeros((n_max, n_max))
        for i in range(n_max - 1):
            x[i, i + 1] = x[i + 1, i] = np.sqrt((i + 1) / 2.0)
        return OscillatorBasisOperator(n_max, x @ x @ x)


def rs_energy_series(order: int, n_max: int) -> list[float]:
    """Energy corrections for H0 = diag(n + 1/2) perturbed by i*x^3.

    Standard Rayleigh-Schrodinger recursion with intermediate normalization,
    carried out in complex double precision; returns the real parts of the
    corrections, which match the exact dimensionless coefficients eps_k
    (imaginary parts vanish to rounding).  The basis cutoff must satisfy
    n_max >= 3*order so that truncation cannot reach the ground state at the
    requested order.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if n_max < 3 * order:
        raise ValueError(f"n_max = {n_max} too small for order {order}; need >= {3 * order}")
    w = 1j * OscillatorBasisOperator.build(n_max).matrix
    ground = np.zeros(n_max, dtype=complex)
    ground[0] = 1.0
    gaps = np.arange(n_max, dtype=float)  # E_n^(0) - E_0^(0) = n
    gaps[0] = 1.0  # unused; avoids 0/0, component 0 is zeroed below
    states = [ground]
    corrections: list[complex] = []
    for k in range(1, order + 1):
        w_prev = w @ states[k - 1]
        e_k = complex(np.vdot(ground, w_prev))
        corrections.append(e_k)
        rhs = -w_prev
        for m in range(1, k):
            rhs = rhs + corrections[m - 1] * states[k - m]
        state = rhs / gaps
        state[0] = 0.0
        states.append(state)
    for k, e_k in enumerate(corrections, start=1):
        if abs(e_k.imag) > 1e-8 * max(1.0, abs(e_k.real)):
            raise ArithmeticError(f"order-{k} correction has a large imaginary part: {e_k}")
    return [e_k.real for e_k in corrections]


def grid_pms_oracle(
    profile: Callable[[float], float],
    bracket: tuple[float, float],
    resolution: int,
) -> list[float]:
    """All stationary points of `profile` in `bracket`, found independently.

    Dense scan of a central-difference derivative followed by sign-change
    bisection; no analytic derivatives enter, so this cross-checks the
    closed-form optimizer paths.
    """
    lo, hi = bracket
    if not lo < hi:
        raise ValueError(f"invalid bracket {bracket}")
    if resolution < 100:
        raise ValueError(f"resolution must be >= 100, got {resolution}")

    def derivative(x: float) -> float:
        h = 1e-6 * max(abs(x), 1e-3)
        return (profile(x + h) - profile(x - h)) / (2.0 * h)

    grid = [lo + (hi - lo) * i / resolution for i in range(resolution + 1)]
    return [bisect(derivative, a, b) for a, b in sign_change_brackets(derivative, grid)]
