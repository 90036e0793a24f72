"""Exact coefficient arithmetic for the oscillator recursions.

Everything here is rational arithmetic: Gaussian rationals (complex numbers
with Fraction real and imaginary parts), dense polynomials in one variable
over the Gaussian rationals, truncated power series over an arbitrary
coefficient ring, generalized binomial coefficients with fractional upper
argument, and exact elements of Q[r] with r^5 fixed to a rational value.

No floating point ever enters these routines; callers convert to float only
at the outermost boundary (optimization, printing).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence, Union

#: Arbitrary-precision rational; always stored in lowest terms with a
#: positive denominator (guaranteed by fractions.Fraction).
BigRational = Fraction

RationalLike = Union[int, Fraction]


def half_binomial(p: RationalLike, j: int) -> Fraction:
    """Generalized binomial coefficient C(p, j) = p(p-1)...(p-j+1)/j!.

    Exact for any rational p (in particular half-integers) and j >= 0.
    For integer p >= j it reduces to the ordinary binomial coefficient.
    """
    if j < 0:
        raise ValueError(f"lower index must be >= 0, got {j}")
    p = Fraction(p)
    out = Fraction(1)
    for i in range(j):
        out *= p - i
    return out / factorial(j)


@dataclass(frozen=True)
class GaussRational:
    """Exact complex number re + im*i with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(re: RationalLike = 0, im: RationalLike = 0) -> "GaussRational":
        return GaussRational(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussRational") -> "GaussRational":
        return GaussRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussRational") -> "GaussRational":
        return GaussRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussRational":
        return GaussRational(-self.re, -self.im)

    def __mul__(self, other: "GaussRational") -> "GaussRational":
        return GaussRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "GaussRational") -> "GaussRational":
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def scaled(self, s: RationalLike) -> "GaussRational":
        s = Fraction(s)
        return GaussRational(self.re * s, self.im * s)

    def conjugate(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"


GR_ZERO = GaussRational()
GR_ONE = GaussRational.of(1)
GR_I = GaussRational.of(0, 1)


def i_power(j: int) -> GaussRational:
    """i**j for any integer j."""
    return (GR_ONE, GR_I, -GR_ONE, -GR_I)[j % 4]


@dataclass(frozen=True)
class BackgroundPoly:
    """Dense polynomial in the rescaled background variable over GaussRational.

    coefficients[j] multiplies the j-th power; no trailing zeros are stored,
    so the zero polynomial has an empty coefficient tuple.
    """

    coefficients: tuple[GaussRational, ...] = ()

    @staticmethod
    def of(coeffs: Iterable[GaussRational]) -> "BackgroundPoly":
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        return BackgroundPoly(tuple(cs))

    @staticmethod
    def constant(value: GaussRational) -> "BackgroundPoly":
        return BackgroundPoly.of([value])

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def coefficient(self, j: int) -> GaussRational:
        if 0 <= j < len(self.coefficients):
            return self.coefficients[j]
        return GR_ZERO

    def is_zero(self) -> bool:
        return not self.coefficients

    def __add__(self, other: "BackgroundPoly") -> "BackgroundPoly":
        n = max(len(self.coefficients), len(other.coefficients))
        return BackgroundPoly.of(
            [self.coefficient(j) + other.coefficient(j) for j in range(n)]
        )

    def __sub__(self, other: "BackgroundPoly") -> "BackgroundPoly":
        n = max(len(self.coefficients), len(other.coefficients))
        return BackgroundPoly.of(
            [self.coefficient(j) - other.coefficient(j) for j in range(n)]
        )

    def __neg__(self) -> "BackgroundPoly":
        return BackgroundPoly(tuple(-c for c in self.coefficients))

    def __mul__(self, other: "BackgroundPoly") -> "BackgroundPoly":
        if self.is_zero() or other.is_zero():
            return BP_ZERO
        out = [GR_ZERO] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] = out[i + j] + a * b
        return BackgroundPoly.of(out)

    def scaled(self, s: RationalLike) -> "BackgroundPoly":
        return BackgroundPoly.of([c.scaled(s) for c in self.coefficients])

    def scaled_gauss(self, s: GaussRational) -> "BackgroundPoly":
        return BackgroundPoly.of([c * s for c in self.coefficients])

    def shifted(self, d: int) -> "BackgroundPoly":
        """Multiply by the d-th power of the variable."""
        if self.is_zero():
            return self
        return BackgroundPoly((GR_ZERO,) * d + self.coefficients)

    def derivative(self) -> "BackgroundPoly":
        return BackgroundPoly.of(
            [self.coefficients[j].scaled(j) for j in range(1, len(self.coefficients))]
        )

    def __call__(self, x: GaussRational) -> GaussRational:
        acc = GR_ZERO
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for j, c in enumerate(self.coefficients):
            if c.is_zero():
                continue
            parts.append(f"({c})" + ("" if j == 0 else f"*X^{j}"))
        return " + ".join(parts)


BP_ZERO = BackgroundPoly()
BP_ONE = BackgroundPoly.constant(GR_ONE)
BP_X = BackgroundPoly((GR_ZERO, GR_ONE))


class TruncatedSeries:
    """Power series truncated at a fixed order, over any exact coefficient ring.

    The ring only needs +, -, * and (where used) /; Fraction, GaussRational
    and BackgroundPoly all qualify.  All coefficients through
    truncation_order are exact; higher ones are discarded.
    """

    __slots__ = ("coefficients", "truncation_order", "_zero", "_one")

    def __init__(self, coefficients: Sequence, truncation_order: int, zero, one):
        if truncation_order < 0:
            raise ValueError("truncation order must be >= 0")
        cs = list(coefficients)[: truncation_order + 1]
        cs += [zero] * (truncation_order + 1 - len(cs))
        self.coefficients = cs
        self.truncation_order = truncation_order
        self._zero = zero
        self._one = one

    @staticmethod
    def rational(coefficients: Sequence[RationalLike], order: int) -> "TruncatedSeries":
        return TruncatedSeries(
            [Fraction(c) for c in coefficients], order, Fraction(0), Fraction(1)
        )

    def _wrap(self, coefficients: Sequence) -> "TruncatedSeries":
        return TruncatedSeries(coefficients, self.truncation_order, self._zero, self._one)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self._wrap([a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self._wrap([a - b for a, b in zip(self.coefficients, other.coefficients)])

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = self.truncation_order
        out = [self._zero] * (n + 1)
        for i, a in enumerate(self.coefficients):
            for j in range(0, n + 1 - i):
                out[i + j] = out[i + j] + a * other.coefficients[j]
        return self._wrap(out)

    def scaled(self, s) -> "TruncatedSeries":
        return self._wrap([c * s for c in self.coefficients])

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires an invertible constant term."""
        c0 = self.coefficients[0]
        inv0 = self._one / c0
        out = [inv0] + [self._zero] * self.truncation_order
        for m in range(1, self.truncation_order + 1):
            acc = self._zero
            for k in range(1, m + 1):
                acc = acc + self.coefficients[k] * out[m - k]
            out[m] = -(acc * inv0)
        return self._wrap(out)

    def sqrt(self) -> "TruncatedSeries":
        """Square root of a series with constant term 1, by Newton iteration."""
        if self.coefficients[0] != self._one:
            raise ValueError("series sqrt requires constant term 1")
        half = self._one / (self._one + self._one)
        y = self._wrap([self._one])
        for _ in range(self.truncation_order.bit_length() + 2):
            y = (y + self * y.inverse()).scaled(half)
        return y

    def pow_int(self, n: int) -> "TruncatedSeries":
        """Integer power; negative n goes through inverse()."""
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = self._wrap([self._one])
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.truncation_order == other.truncation_order
            and self.coefficients == other.coefficients
        )

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.coefficients!r})"


class QuinticSurd:
    """Exact element of Q[r] where r**5 equals a fixed rational `base`.

    Stored in the power basis (c0, c1, c2, c3, c4) meaning
    c0 + c1*r + c2*r**2 + c3*r**3 + c4*r**4.  Used for closed-form
    strong-coupling coefficients such as multiples of 22**(1/5).
    """

    __slots__ = ("base", "coeffs")

    def __init__(self, base: RationalLike, coeffs: Sequence[RationalLike]):
        self.base = Fraction(base)
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > 5:
            raise ValueError("power basis has five components")
        cs += [Fraction(0)] * (5 - len(cs))
        self.coeffs = tuple(cs)

    @staticmethod
    def root(base: RationalLike) -> "QuinticSurd":
        """The generator r itself, with r**5 = base."""
        return QuinticSurd(base, [0, 1])

    @staticmethod
    def of(base: RationalLike, value: RationalLike) -> "QuinticSurd":
        return QuinticSurd(base, [Fraction(value)])

    def _coerce(self, other) -> "QuinticSurd":
        if isinstance(other, (int, Fraction)):
            return QuinticSurd(self.base, [Fraction(other)])
        return other

    def _check(self, other: "QuinticSurd") -> None:
        if self.base != other.base:
            raise ValueError("mixed radical bases")

    def __add__(self, other) -> "QuinticSurd":
        other = self._coerce(other)
        self._check(other)
        return QuinticSurd(self.base, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other) -> "QuinticSurd":
        other = self._coerce(other)
        self._check(other)
        return QuinticSurd(self.base, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "QuinticSurd":
        return QuinticSurd(self.base, [-a for a in self.coeffs])

    def __mul__(self, other) -> "QuinticSurd":
        other = self._coerce(other)
        self._check(other)
        out = [Fraction(0)] * 5
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b == 0:
                    continue
                k = i + j
                if k < 5:
                    out[k] += a * b
                else:
                    out[k - 5] += a * b * self.base
        return QuinticSurd(self.base, out)

    def scaled(self, s: RationalLike) -> "QuinticSurd":
        s = Fraction(s)
        return QuinticSurd(self.base, [a * s for a in self.coeffs])

    def inverse(self) -> "QuinticSurd":
        """Exact inverse via Gaussian elimination on the multiplication matrix."""
        # columns are self * r**j expressed in the power basis
        cols = []
        col = self
        for _ in range(5):
            cols.append(col.coeffs)
            col = col * QuinticSurd.root(self.base)
        a = [[cols[j][i] for j in range(5)] for i in range(5)]
        rhs = [Fraction(1), Fraction(0), Fraction(0), Fraction(0), Fraction(0)]
        for piv in range(5):
            sel = next((r for r in range(piv, 5) if a[r][piv] != 0), None)
            if sel is None:
                raise ZeroDivisionError("singular element has no inverse")
            a[piv], a[sel] = a[sel], a[piv]
            rhs[piv], rhs[sel] = rhs[sel], rhs[piv]
            inv = 1 / a[piv][piv]
            a[piv] = [x * inv for x in a[piv]]
            rhs[piv] *= inv
            for r in range(5):
                if r != piv and a[r][piv] != 0:
                    f = a[r][piv]
                    a[r] = [x - f * y for x, y in zip(a[r], a[piv])]
                    rhs[r] -= f * rhs[piv]
        return QuinticSurd(self.base, rhs)

    def __truediv__(self, other) -> "QuinticSurd":
        return self * self._coerce(other).inverse()

    def pow_int(self, n: int) -> "QuinticSurd":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = QuinticSurd.of(self.base, 1)
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QuinticSurd)
            and self.base == other.base
            and self.coeffs == other.coeffs
        )

    def __float__(self) -> float:
        r = float(self.base) ** 0.2
        return sum(float(c) * r**k for k, c in enumerate(self.coeffs))

    def __repr__(self) -> str:
        return f"QuinticSurd({self.base}, {list(self.coeffs)})"
