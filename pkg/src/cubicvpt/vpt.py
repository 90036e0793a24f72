"""Variational resummation of the cubic-oscillator series.

Two variants are implemented.  The plain one applies the square-root trick
omega -> Omega*sqrt(1 + alpha*r), r = (omega^2 - Omega^2)/(alpha*Omega^2),
to the weak-coupling energy series in alpha = g^2 and re-expands to the
truncation order; its strong-coupling limit collapses onto a one-parameter
profile in the reduced variable Omega_hat.  The refined variant applies the
analogous trick with hbar as the expansion parameter to the loop expansion
of the effective potential and optimizes in the two variables (background,
Omega) on the slice X = -i*y where everything is real.

Both optimizations follow the principle of minimal sensitivity: accept
stationary points of the truncated approximation; where none exist, fall
back to turning points.  Root searches run on fixed grids with bisection
(exact rational sign evaluation for the one-parameter profile, whose
high-order coefficients cancel too violently for floating point) plus a
Newton polish, so results are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Sequence

from . import bender_wu, effective_potential
from .exact_algebra import QuinticSurd, TruncatedSeries, half_binomial
from .rootfind import bisect, log_grid, newton_polish

_F = Fraction


class NoPmsPointError(RuntimeError):
    """No extremum and no turning point inside the search bracket."""


class VeffSolverError(RuntimeError):
    """The two-parameter stationarity solve failed; details in args."""


# ---------------------------------------------------------------------------
# plain variant: tricked energy series and its strong-coupling profile
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrickSeries:
    """Tricked truncated energy E^(N)(alpha, omega, Omega).

    Closed form: sum over k <= N of
    eps_2k * hbar^(k+1) * alpha^k * Omega^(1-5k) *
        sum over j <= N-k of C((1-5k)/2, j) * ((omega^2-Omega^2)/Omega^2)^j,
    with eps_0 = 1/2.  At Omega = omega only j = 0 survives and the
    original truncated series is recovered identically.
    """

    order: int
    eps_even: tuple[Fraction, ...]  # eps_0, eps_2, ..., eps_2N

    def value_exact(self, alpha: Fraction, omega: Fraction, Omega: Fraction) -> Fraction:
        """Exact rational evaluation (hbar = 1)."""
        lam = (omega * omega - Omega * Omega) / (Omega * Omega)
        total = _F(0)
        for k in range(self.order + 1):
            inner = sum(
                half_binomial(_F(1 - 5 * k, 2), j) * lam**j
                for j in range(self.order - k + 1)
            )
            total += self.eps_even[k] * alpha**k * Omega ** (1 - 5 * k) * inner
        return total

    def value(self, alpha: float, omega: float, Omega: float, hbar: float = 1.0) -> float:
        lam = (omega * omega - Omega * Omega) / (Omega * Omega)
        total = 0.0
        for k in range(self.order + 1):
            inner = sum(
                float(half_binomial(_F(1 - 5 * k, 2), j)) * lam**j
                for j in range(self.order - k + 1)
            )
            total += (
                float(self.eps_even[k])
                * hbar ** (k + 1)
                * alpha**k
                * Omega ** (1 - 5 * k)
                * inner
            )
        return total

    def untricked_exact(self, alpha: Fraction, omega: Fraction) -> Fraction:
        return sum(
            self.eps_even[k] * alpha**k * omega ** (1 - 5 * k)
            for k in range(self.order + 1)
        )


def _eps_even(order: int) -> tuple[Fraction, ...]:
    values = [_F(1, 2)]
    if order >= 1:
        _, energy = bender_wu.ground_state_series(2 * order)
        values += [energy.real(2 * k) for k in range(1, order + 1)]
    return tuple(values)


def trick_reexpand_energy(order: int) -> TrickSeries:
    """Square-root trick applied to the energy series, re-expanded to alpha^order."""
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    return TrickSeries(order, _eps_even(order))


@dataclass(frozen=True)
class StrongCouplingFunction:
    """Reduced strong-coupling profile of the tricked series.

    In Omega_hat = Omega/(hbar*alpha)^(1/5) the leading coefficient becomes
    B_N(Omega_hat) = sum_k d_k Omega_hat^(1-5k) with exact rational
    d_k = eps_2k * sum_{j<=N-k} C((1-5k)/2, j) (-1)^j.  In u = Omega_hat^-5
    the profile is Omega_hat * P(u) with P an exact polynomial, which allows
    sign evaluations without floating-point cancellation.
    """

    order: int
    d: tuple[Fraction, ...]

    def _poly(self) -> list[Fraction]:
        return list(self.d)

    def _dpoly(self) -> list[Fraction]:
        return [dk * (1 - 5 * k) for k, dk in enumerate(self.d)]

    def _d2poly(self) -> list[Fraction]:
        return [dk * (1 - 5 * k) * (-5 * k) for k, dk in enumerate(self.d)]

    @staticmethod
    def _horner(coeffs: Sequence[Fraction], u: Fraction) -> Fraction:
        acc = _F(0)
        for c in reversed(coeffs):
            acc = acc * u + c
        return acc

    def value(self, omega_hat: float) -> float:
        u = _F(omega_hat) ** -5
        return omega_hat * float(self._horner(self._poly(), u))

    def derivative(self, omega_hat: float) -> float:
        u = _F(omega_hat) ** -5
        return float(self._horner(self._dpoly(), u))

    def second_derivative(self, omega_hat: float) -> float:
        u = _F(omega_hat) ** -5
        return float(self._horner(self._d2poly(), u)) / omega_hat


def strong_coupling_profile(order: int) -> StrongCouplingFunction:
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    eps = _eps_even(order)
    d = []
    for k in range(order + 1):
        sigma = sum(
            half_binomial(_F(1 - 5 * k, 2), j) * (-1) ** j
            for j in range(order - k + 1)
        )
        d.append(eps[k] * sigma)
    return StrongCouplingFunction(order, tuple(d))


# ---------------------------------------------------------------------------
# PMS solutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VptCandidate:
    omega_var: float
    background: float | None
    value: float
    criticality: str  # "extremum" or "turning_point"
    omega_second_derivative: float

    def to_json_dict(self) -> dict:
        return {
            "omega_var": self.omega_var,
            "y": self.background,
            "b0": self.value,
            "criticality": self.criticality,
            "omega_second_derivative": self.omega_second_derivative,
        }


@dataclass(frozen=True)
class VptSolution:
    variant: str
    order: int
    omega_var: float
    background: float | None
    b0_estimate: float
    criticality: str
    residuals: tuple[float, ...]
    candidates: tuple[VptCandidate, ...] = field(default_factory=tuple)

    def to_json_dict(self) -> dict:
        return {
            "variant": self.variant,
            "N": self.order,
            "omega_var": self.omega_var,
            "y": self.background,
            "b0": self.b0_estimate,
            "criticality": self.criticality,
            "residuals": list(self.residuals),
            "candidates": [c.to_json_dict() for c in self.candidates],
        }


# exact-sign root isolation for polynomials with rational coefficients


def _dyadic_log_grid(lo: float, hi: float, n: int) -> list[Fraction]:
    scale = 1 << 54
    grid = []
    last = None
    for x in log_grid(lo, hi, n):
        q = _F(int(x * scale), scale)
        if q != last:
            grid.append(q)
            last = q
    return grid


def _exact_poly_roots(
    coeffs: Sequence[Fraction], grid: Sequence[Fraction], iterations: int = 70
) -> list[Fraction]:
    def ev(u: Fraction) -> Fraction:
        acc = _F(0)
        for c in reversed(coeffs):
            acc = acc * u + c
        return acc

    roots = []
    values = [ev(u) for u in grid]
    for i in range(len(grid) - 1):
        a, b = values[i], values[i + 1]
        if a == 0:
            roots.append(grid[i])
            continue
        if (a < 0) == (b < 0):
            continue
        lo, hi, flo = grid[i], grid[i + 1], a
        for _ in range(iterations):
            mid = (lo + hi) / 2
            fm = ev(mid)
            if fm == 0:
                lo = hi = mid
                break
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
        roots.append((lo + hi) / 2)
    if values and values[-1] == 0:
        roots.append(grid[-1])
    return roots


def naive_b0(
    order: int,
    bracket: tuple[float, float] = (0.45, 16.0),
    grid_points: int = 3000,
) -> VptSolution:
    """Optimize the strong-coupling profile over Omega_hat by minimal sensitivity.

    All stationary points (profile extrema) and turning points (zeros of the
    second derivative) inside the bracket are collected; the adopted point is
    the leftmost one, i.e. the candidate with the smallest Omega_hat.  The
    stationary-point family closest to the origin is the one whose values
    track the convergent approximation sequence; preferring globally flat
    extrema instead latches onto a spurious large-Omega_hat branch whose
    values stall near the first-order result.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    profile = strong_coupling_profile(order)
    lo, hi = bracket
    if not 0 < lo < hi:
        raise ValueError(f"invalid bracket {bracket}")
    # u = Omega_hat^-5 reverses and rescales the bracket
    grid = _dyadic_log_grid(hi**-5, lo**-5, grid_points)

    candidates = []
    for u in _exact_poly_roots(profile._dpoly(), grid):
        omega_hat = float(u) ** -0.2
        value = omega_hat * float(profile._horner(profile._poly(), u))
        second = float(profile._horner(profile._d2poly(), u)) / omega_hat
        candidates.append(VptCandidate(omega_hat, None, value, "extremum", second))
    for u in _exact_poly_roots(profile._d2poly(), grid):
        omega_hat = float(u) ** -0.2
        value = omega_hat * float(profile._horner(profile._poly(), u))
        candidates.append(VptCandidate(omega_hat, None, value, "turning_point", 0.0))
    if not candidates:
        raise NoPmsPointError(
            f"no PMS point for order {order} in Omega_hat bracket {bracket}"
        )
    candidates.sort(key=lambda c: c.omega_var)
    chosen = candidates[0]
    if chosen.criticality == "extremum":
        residuals = (abs(profile.derivative(chosen.omega_var)),)
    else:
        residuals = (abs(profile.second_derivative(chosen.omega_var)),)
    return VptSolution(
        variant="naive",
        order=order,
        omega_var=chosen.omega_var,
        background=None,
        b0_estimate=chosen.value,
        criticality=chosen.criticality,
        residuals=residuals,
        candidates=tuple(candidates),
    )


# ---------------------------------------------------------------------------
# order-1 closed forms in Q[22^(1/5)]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NaiveOrder1:
    """Strong-coupling data of the first-order plain optimization, exact in Q[22^(1/5)]."""

    omega0: QuinticSurd
    omega1: QuinticSurd
    omega2: QuinticSurd
    b0: QuinticSurd
    b1: QuinticSurd
    b2: QuinticSurd


def subleading_order1() -> NaiveOrder1:
    """Expand the first-order optimum for large coupling and read off b0, b1, b2.

    The stationarity condition of the first-order tricked energy is the
    quintic Omega^5 - omega^2 Omega^3 - 22 hbar alpha = 0.  In the reduced
    variable u = Omega/(omega*alphahat^(1/5)) with eps = alphahat^(-2/5) it
    reads u^5 - eps*u^3 - 22 = 0 and is solved order by order in eps inside
    Q[rho], rho = 22^(1/5); substituting into the tricked energy
    E/(hbar*omega*alphahat^(1/5)) = u/4 + eps/(4u) + (11/8) u^-4
    and collecting powers of eps yields the strong-coupling coefficients.
    """
    base = _F(22)
    rho = QuinticSurd.root(base)
    zero = QuinticSurd.of(base, 0)
    one = QuinticSurd.of(base, 1)

    def series(coeffs: list[QuinticSurd]) -> TruncatedSeries:
        return TruncatedSeries(coeffs, 2, zero, one)

    u = [rho, zero, zero]
    pivot_inv = (rho.pow_int(4).scaled(5)).inverse()
    for n in (1, 2):
        s = series(u)
        residual = s.pow_int(5) - series([zero, one, zero]) * s.pow_int(3)
        residual = residual - series([QuinticSurd.of(base, 22), zero, zero])
        u[n] = u[n] - residual.coefficients[n] * pivot_inv

    s = series(u)
    energy = s.scaled(_F(1, 4))
    inv = s.inverse()
    energy = energy + series([zero] + inv.coefficients[:2]).scaled(_F(1, 4))
    energy = energy + s.pow_int(-4).scaled(_F(11, 8))
    return NaiveOrder1(
        omega0=u[0],
        omega1=u[1],
        omega2=u[2],
        b0=energy.coefficients[0],
        b1=energy.coefficients[1],
        b2=energy.coefficients[2],
    )


@dataclass(frozen=True)
class VeffOrder1:
    """Strong-coupling data of the first-order background optimization, exact in Q[24^(-1/5)]."""

    x0: QuinticSurd
    x1: QuinticSurd
    x2: QuinticSurd
    b0: QuinticSurd
    b1: QuinticSurd
    b2: QuinticSurd


def veff_strong_coupling_X1() -> VeffOrder1:
    """Large-coupling expansion of the first-order background stationarity.

    With Omega = 0 the stationarity condition in y (where X = -i*y) can be
    cleared of radicals; in the scaling variable v with y = g^(-1/5) v and
    eps = ghat^(-4/5) it becomes the polynomial identity
    v^3 (3v + eps)^2 = 3/8, solved order by order in Q[x], x = (1/24)^(1/5).
    The energy on the solution then expands as
    E/g^(2/5) = -v^3 + 6 x^3 sqrt(v/x) - (eps/2) v^2.
    """
    base = _F(1, 24)
    x = QuinticSurd.root(base)
    zero = QuinticSurd.of(base, 0)
    one = QuinticSurd.of(base, 1)

    def series(coeffs: list[QuinticSurd]) -> TruncatedSeries:
        return TruncatedSeries(coeffs, 2, zero, one)

    eps = series([zero, one, zero])
    v = [x, zero, zero]
    # derivative of v^3 (3v+eps)^2 at leading order: 45 x^4
    pivot_inv = (x.pow_int(4).scaled(45)).inverse()
    for n in (1, 2):
        s = series(v)
        residual = s.pow_int(3) * (s.scaled(3) + eps).pow_int(2)
        residual = residual - series([QuinticSurd.of(base, _F(3, 8)), zero, zero])
        v[n] = v[n] - residual.coefficients[n] * pivot_inv

    s = series(v)
    x_inv = x.inverse()
    ratio = TruncatedSeries([c * x_inv for c in s.coefficients], 2, zero, one)
    root = ratio.sqrt()
    energy = root.scaled(x.pow_int(3).scaled(6)) - s.pow_int(3)
    vsq = s * s
    energy = energy - TruncatedSeries([zero] + vsq.coefficients[:2], 2, zero, one).scaled(
        QuinticSurd.of(base, _F(1, 2))
    )
    return VeffOrder1(
        x0=v[0],
        x1=v[1],
        x2=v[2],
        b0=energy.coefficients[0],
        b1=energy.coefficients[1],
        b2=energy.coefficients[2],
    )


# ---------------------------------------------------------------------------
# refined variant: tricked effective potential in (y, Omega)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrickedVeff:
    """Loop expansion after the hbar square-root trick, on the slice X = -i*y.

    V(y, Omega) = -omega^2 y^2/2 - g y^3
      + sum_{l<=N} hbar^l r_l g^(2(l-1))
          sum_{j<=N-l} C(p_l/2, j) (omega^2-Omega^2)^j S^(p_l/2-j),
    with p_l = 1-5(l-1) and S = Omega^2 + 6 g y real and positive on the
    slice.  At Omega = omega only j = 0 survives and the plain truncated
    loop sum returns.
    """

    order: int
    r: tuple[Fraction, ...]

    def _terms(self) -> list[tuple[Fraction, int, int, Fraction]]:
        out = []
        for l in range(1, self.order + 1):
            p = _F(1 - 5 * (l - 1), 2)
            for j in range(self.order - l + 1):
                out.append((self.r[l - 1] * half_binomial(p, j), j, l, p - j))
        return out

    def _derivs(
        self, y: float, w: float, hbar: float, omega: float, g: float
    ) -> tuple[float, float, float, float, float, float]:
        """V, Vy, Vw, Vyy, Vyw, Vww at w = Omega^2."""
        S = w + 6.0 * g * y
        if S <= 0.0:
            raise ValueError(f"outside domain: Omega^2 + 6gy = {S} <= 0")
        om2 = omega * omega
        V = -0.5 * om2 * y * y - g * y**3
        Vy = -om2 * y - 3.0 * g * y * y
        Vyy = -om2 - 6.0 * g * y
        Vw = Vyw = Vww = 0.0
        d = om2 - w
        for coef, j, l, e in self._terms():
            c = float(coef) * hbar**l * g ** (2 * (l - 1))
            ef = float(e)
            dj = d**j if j else 1.0
            dj1 = -j * d ** (j - 1) if j >= 1 else 0.0  # d/dw of (om2-w)^j
            dj2 = j * (j - 1) * d ** (j - 2) if j >= 2 else 0.0
            Se = S**ef
            Se1 = ef * S ** (ef - 1.0)
            Se2 = ef * (ef - 1.0) * S ** (ef - 2.0)
            V += c * dj * Se
            Vy += c * dj * Se1 * 6.0 * g
            Vyy += c * dj * Se2 * 36.0 * g * g
            Vw += c * (dj1 * Se + dj * Se1)
            Vyw += c * (dj1 * Se1 + dj * Se2) * 6.0 * g
            Vww += c * (dj2 * Se + 2.0 * dj1 * Se1 + dj * Se2)
        return V, Vy, Vw, Vyy, Vyw, Vww

    def _vy_grid(self, ys, w: float, hbar: float, omega: float, g: float):
        """dV/dy on a whole y-grid at once (numpy array in, array out)."""
        import numpy as np

        S = w + 6.0 * g * np.asarray(ys, dtype=float)
        om2 = omega * omega
        Vy = -om2 * ys - 3.0 * g * ys * ys
        d = om2 - w
        for coef, j, l, e in self._terms():
            c = float(coef) * hbar**l * g ** (2 * (l - 1))
            ef = float(e)
            dj = d**j if j else 1.0
            Vy = Vy + (6.0 * g * c * ef * dj) * S ** (ef - 1.0)
        return Vy

    def value(
        self, y: float, Omega: float, hbar: float = 1.0, omega: float = 0.0, g: float = 1.0
    ) -> float:
        return self._derivs(y, Omega * Omega, hbar, omega, g)[0]

    def gradient(
        self, y: float, Omega: float, hbar: float = 1.0, omega: float = 0.0, g: float = 1.0
    ) -> tuple[float, float]:
        _, Vy, Vw, *_ = self._derivs(y, Omega * Omega, hbar, omega, g)
        return Vy, 2.0 * Omega * Vw

    def omega_second_derivative(
        self, y: float, Omega: float, hbar: float = 1.0, omega: float = 0.0, g: float = 1.0
    ) -> float:
        _, _, Vw, _, _, Vww = self._derivs(y, Omega * Omega, hbar, omega, g)
        return 2.0 * Vw + 4.0 * Omega * Omega * Vww

    def value_exact(
        self,
        y: Fraction,
        w: Fraction,
        hbar: Fraction = _F(1),
        omega2: Fraction = _F(0),
        g: Fraction = _F(1),
    ) -> tuple[Fraction, Fraction]:
        """Exact evaluation as (a, b) meaning a + b*sqrt(S), S = w + 6gy rational."""
        S = w + 6 * g * y
        if S <= 0:
            raise ValueError("outside domain: S <= 0")
        a = -omega2 * y * y / 2 - g * y**3
        b = _F(0)
        for coef, j, l, e in self._terms():
            c = coef * hbar**l * g ** (2 * (l - 1)) * (omega2 - w) ** j
            if e.denominator == 1:
                a += c * S ** int(e)
            else:
                b += c * S ** int(e - _F(1, 2))
        return a, b

    def untricked_exact(
        self,
        y: Fraction,
        hbar: Fraction = _F(1),
        omega2: Fraction = _F(0),
        g: Fraction = _F(1),
    ) -> tuple[Fraction, Fraction]:
        """Plain truncated loop sum on the slice, same (a, b) representation."""
        S = omega2 + 6 * g * y
        if S <= 0:
            raise ValueError("outside domain: S <= 0")
        a = -omega2 * y * y / 2 - g * y**3
        b = _F(0)
        for l in range(1, self.order + 1):
            p = _F(1 - 5 * (l - 1), 2)
            c = self.r[l - 1] * hbar**l * g ** (2 * (l - 1))
            if p.denominator == 1:
                a += c * S ** int(p)
            else:
                b += c * S ** int(p - _F(1, 2))
        return a, b


def veff_trick(order: int) -> TrickedVeff:
    """Square-root trick in hbar applied to the loop expansion, truncated at hbar^order."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    return TrickedVeff(order, effective_potential.loop_coefficients(order).r)


def _y_roots(
    trick: TrickedVeff,
    w: float,
    hbar: float,
    omega: float,
    g: float,
    y_grid,
) -> list[float]:
    import numpy as np

    def fy(y: float) -> float:
        return trick._derivs(y, w, hbar, omega, g)[1]

    values = trick._vy_grid(np.asarray(y_grid), w, hbar, omega, g)
    sign = np.sign(values)
    roots = []
    for i in np.flatnonzero(sign[:-1] * sign[1:] < 0):
        y0 = bisect(fy, y_grid[i], y_grid[i + 1], iterations=50)
        y0 = newton_polish(
            fy,
            lambda y: trick._derivs(y, w, hbar, omega, g)[3],
            y0,
            max_step=abs(y0) * 0.5 + 1e-6,
        )
        roots.append(y0)
    for i in np.flatnonzero(values == 0.0):
        roots.append(float(y_grid[i]))
    return sorted(roots)


def _y_root_near(
    trick: TrickedVeff,
    w: float,
    guess: float,
    hbar: float,
    omega: float,
    g: float,
) -> float | None:
    """Refine the y-stationarity root nearest to `guess` at fixed w."""

    def fy(y: float) -> float:
        return trick._derivs(y, w, hbar, omega, g)[1]

    step = max(abs(guess), 1e-4) * 0.05
    lo, hi = max(guess - step, 1e-12), guess + step
    for _ in range(40):
        try:
            bracketed = (fy(lo) < 0.0) != (fy(hi) < 0.0)
        except ValueError:
            return None
        if bracketed:
            break
        lo = max(guess - (guess - lo) * 1.6, 1e-12)
        hi = guess + (hi - guess) * 1.6
    else:
        return None
    y0 = bisect(fy, lo, hi, iterations=50)
    return newton_polish(
        fy,
        lambda y: trick._derivs(y, w, hbar, omega, g)[3],
        y0,
        max_step=abs(y0) * 0.5 + 1e-6,
    )


def veff_b0(
    order: int,
    hbar: float = 1.0,
    g: float = 1.0,
    omega: float = 0.0,
    w_max: float = 8.0,
    w_points: int = 240,
    y_bracket: tuple[float, float] = (1e-4, 20.0),
    y_points: int = 1200,
    tol: float = 1e-10,
) -> VptSolution:
    """Two-parameter minimal-sensitivity optimization of the tricked potential.

    With the defaults (hbar = g = 1, omega = 0, the strong-coupling
    normalization) the stationary value approximates the leading
    strong-coupling coefficient of the ground-state energy.  Candidates are
    the interior simultaneous stationary points in (y, Omega) plus the
    Omega = 0 axis points (stationary in Omega by evenness) that are genuine
    extrema along Omega with y-stationarity; the adopted candidate is the
    flattest one, i.e. smallest |d2V/dOmega2|.  If no extremum exists the
    search falls back to turning points in Omega along the y-stationary
    branch.  All scans use fixed grids, so results are deterministic.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    trick = veff_trick(order)
    y_grid = log_grid(y_bracket[0], y_bracket[1], y_points)
    candidates: list[VptCandidate] = []

    # Omega = 0 axis
    for y0 in _y_roots(trick, 0.0, hbar, omega, g, y_grid):
        d2 = trick.omega_second_derivative(y0, 0.0, hbar, omega, g)
        if d2 != 0.0:
            V = trick.value(y0, 0.0, hbar, omega, g)
            candidates.append(VptCandidate(0.0, y0, V, "extremum", d2))

    # interior simultaneous stationary points, tracked along y-branches in w
    ws = [1e-6] + [w_max * (i + 1) / w_points for i in range(w_points)]
    prev_w: float | None = None
    prev: list[tuple[float, float]] = []  # (y, Vw) per branch
    interior: list[tuple[float, float]] = []
    for w in ws:
        roots = _y_roots(trick, w, hbar, omega, g, y_grid)
        cur = [(y0, trick._derivs(y0, w, hbar, omega, g)[2]) for y0 in roots]
        if prev_w is not None and len(cur) == len(prev):
            for idx in range(len(cur)):
                g0, g1 = prev[idx][1], cur[idx][1]
                if g0 == 0.0 or (g0 < 0.0) != (g1 < 0.0):
                    guess = prev[idx][0]

                    def fw(wm: float) -> float:
                        ym = _y_root_near(trick, wm, guess, hbar, omega, g)
                        if ym is None:
                            return float("nan")
                        return trick._derivs(ym, wm, hbar, omega, g)[2]

                    wstar = bisect(fw, prev_w, w, iterations=48)
                    ystar = _y_root_near(trick, wstar, guess, hbar, omega, g)
                    if ystar is not None:
                        interior.append((ystar, wstar))
        prev_w, prev = w, cur

    for y0, w0 in interior:
        # Newton polish on the full 2x2 system
        y, w = y0, w0
        for _ in range(60):
            V, Vy, Vw, Vyy, Vyw, Vww = trick._derivs(y, w, hbar, omega, g)
            det = Vyy * Vww - Vyw * Vyw
            if det == 0.0:
                break
            dy = -(Vww * Vy - Vyw * Vw) / det
            dw = -(-Vyw * Vy + Vyy * Vw) / det
            y, w = y + dy, w + dw
            if abs(dy) + abs(dw) < 1e-15:
                break
        V, Vy, Vw, Vyy, Vyw, Vww = trick._derivs(y, w, hbar, omega, g)
        if abs(Vy) > tol or abs(Vw) > tol or w <= 0.0:
            continue
        Omega = sqrt(w)
        d2 = 2.0 * Vw + 4.0 * w * Vww
        if not any(
            c.criticality == "extremum"
            and abs(c.omega_var - Omega) < 1e-7
            and c.background is not None
            and abs(c.background - y) < 1e-7
            for c in candidates
        ):
            candidates.append(VptCandidate(Omega, y, V, "extremum", d2))

    extrema = [c for c in candidates if c.criticality == "extremum"]
    if extrema:
        chosen = min(extrema, key=lambda c: abs(c.omega_second_derivative))
    else:
        # turning points: d2V/dOmega2 = 0 along the y-stationary branch
        turning: list[VptCandidate] = []
        prev_w, prev2 = None, []
        for w in ws:
            roots = _y_roots(trick, w, hbar, omega, g, y_grid)
            cur2 = []
            for y0 in roots:
                _, _, Vw, _, _, Vww = trick._derivs(y0, w, hbar, omega, g)
                cur2.append((y0, 2.0 * Vw + 4.0 * w * Vww))
            if prev_w is not None and len(cur2) == len(prev2):
                for idx in range(len(cur2)):
                    t0, t1 = prev2[idx][1], cur2[idx][1]
                    if t0 == 0.0 or (t0 < 0.0) != (t1 < 0.0):
                        guess = prev2[idx][0]

                        def ft(wm: float) -> float:
                            ym = _y_root_near(trick, wm, guess, hbar, omega, g)
                            if ym is None:
                                return float("nan")
                            _, _, Vw_, _, _, Vww_ = trick._derivs(ym, wm, hbar, omega, g)
                            return 2.0 * Vw_ + 4.0 * wm * Vww_

                        wstar = bisect(ft, prev_w, w, iterations=48)
                        ystar = _y_root_near(trick, wstar, guess, hbar, omega, g)
                        if ystar is not None:
                            V = trick.value(ystar, sqrt(wstar), hbar, omega, g)
                            turning.append(
                                VptCandidate(sqrt(wstar), ystar, V, "turning_point", 0.0)
                            )
            prev_w, prev2 = w, cur2
        if not turning:
            raise VeffSolverError(
                f"no PMS candidate for order {order}: "
                f"no extrema and no turning points in w <= {w_max}, y in {y_bracket}"
            )
        candidates.extend(turning)
        chosen = min(
            turning,
            key=lambda c: abs(trick.gradient(c.background, c.omega_var, hbar, omega, g)[1]),
        )

    gy, gO = trick.gradient(chosen.background, chosen.omega_var, hbar, omega, g)
    return VptSolution(
        variant="veff",
        order=order,
        omega_var=chosen.omega_var,
        background=chosen.background,
        b0_estimate=chosen.value,
        criticality=chosen.criticality,
        residuals=(abs(gy), abs(gO)),
        candidates=tuple(sorted(candidates, key=lambda c: c.omega_var)),
    )
