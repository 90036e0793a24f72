"""Deterministic one-dimensional root bracketing and refinement.

Fixed grids, fixed iteration counts and pure bisection keep every search
bit-reproducible; an optional Newton polish tightens the last digits without
introducing any search heuristics.
"""

from __future__ import annotations

from math import exp, log
from typing import Callable, Sequence


def log_grid(lo: float, hi: float, n: int) -> list[float]:
    """n+1 logarithmically spaced points covering [lo, hi]; requires lo > 0."""
    if not 0 < lo < hi:
        raise ValueError(f"need 0 < lo < hi, got ({lo}, {hi})")
    a, b = log(lo), log(hi)
    return [exp(a + (b - a) * i / n) for i in range(n + 1)]


def sign_change_brackets(
    f: Callable[[float], float], grid: Sequence[float]
) -> list[tuple[float, float]]:
    """All adjacent grid pairs across which f changes sign (or hits zero)."""
    out = []
    values = [f(x) for x in grid]
    for i in range(len(grid) - 1):
        a, b = values[i], values[i + 1]
        if a == 0.0:
            out.append((grid[i], grid[i]))
        elif (a < 0.0) != (b < 0.0):
            out.append((grid[i], grid[i + 1]))
    if values[-1] == 0.0:
        out.append((grid[-1], grid[-1]))
    return out


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    iterations: int = 80,
) -> float:
    """Plain bisection on a sign-change bracket; tolerates lo == hi (exact hit)."""
    if lo == hi:
        return lo
    flo = f(lo)
    if flo == 0.0:
        return lo
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid < 0.0) == (flo < 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def newton_polish(
    f: Callable[[float], float],
    df: Callable[[float], float],
    x0: float,
    iterations: int = 6,
    max_step: float | None = None,
) -> float:
    """A few Newton steps from an already-bracketed estimate."""
    x = x0
    for _ in range(iterations):
        d = df(x)
        if d == 0.0:
            break
        step = f(x) / d
        if max_step is not None and abs(step) > max_step:
            break
        nxt = x - step
        if nxt == x:
            break
        x = nxt
    return x
