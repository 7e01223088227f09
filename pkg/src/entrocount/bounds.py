"""Upper bounds on permanents of (0,1)-matrices from row sums.

The alpha-family bounds are evaluated in deformed-log space,
``sum_i (1/r_i) sum_{j<=r_i} ln_alpha(j)``, then inverted to a numeric
ceiling on the permanent.  For ``alpha > 1`` the deformed log is capped at
``1/(alpha-1)``; once the entropy-space value reaches that cap the bound says
nothing and the ceiling is reported as infinite.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .entropy import AlphaLike, AlphaParameter, alpha_log, as_alpha
from .permanent import BinaryMatrix

GOLDEN = (math.sqrt(5) - 1) / 2
DEFAULT_GRID = (1 / 16, 8.0, 64)


def _check_row_sums(row_sums: Sequence[int]) -> list:
    rs = [int(r) for r in row_sums]
    if not rs:
        raise ValueError("row_sums must be nonempty")
    if min(rs) < 1:
        raise ValueError("every row sum must be >= 1 (a zero row forces permanent 0)")
    return rs


def bound_rhs(row_sums: Sequence[int], alpha: AlphaLike) -> float:
    """Entropy-space right-hand side shared by both alpha ranges."""
    a = as_alpha(alpha)
    rs = _check_row_sums(row_sums)
    counts = Counter(rs)
    top = max(counts)
    # prefix sums of ln_alpha(1..top)
    logs = alpha_log(np.arange(1, top + 1, dtype=float), a)
    per_row = {}
    for r in counts:
        per_row[r] = math.fsum(logs[:r]) / r
    return math.fsum(per_row[r] * c for r, c in counts.items())


def invert_bound(rhs: float, alpha: AlphaLike) -> float:
    """Largest permanent compatible with the entropy-space bound ``rhs``."""
    a = as_alpha(alpha)
    if rhs < 0 or math.isnan(rhs):
        raise ValueError(f"rhs must be >= 0, got {rhs!r}")
    if a.is_shannon:
        return math.exp(rhs)
    c = 1.0 - a.value
    if a.value > 1:
        # ln_alpha(P) <= rhs  <=>  P <= (1 + c*rhs)^(1/c), c < 0
        base = c * rhs
    else:
        # -ln_alpha(1/P) <= rhs  <=>  P <= (1 - c*rhs)^(-1/c), c > 0
        base = -c * rhs
    if base <= -1.0:
        return math.inf
    try:
        return math.exp(math.log1p(base) / (c if a.value > 1 else -c))
    except OverflowError:
        return math.inf


def bregman_bound(row_sums: Sequence[int]) -> float:
    """Product of ``(r_i!)**(1/r_i)``."""
    rs = _check_row_sums(row_sums)
    if len(rs) > 20:
        return math.exp(math.fsum(math.lgamma(r + 1) / r for r in rs))
    return math.prod(math.factorial(r) ** (1.0 / r) for r in rs)


def _integer_ceiling(ceiling: float) -> int | None:
    if not math.isfinite(ceiling):
        return None
    # absorb rounding below an exact integer bound such as n! on the all-ones matrix
    return math.floor(ceiling * (1 + 1e-9) + 1e-12)


@dataclass(frozen=True)
class BoundReport:
    alpha: AlphaParameter
    rhs_entropy_space: float | None
    ceiling: float
    vacuous: bool = field(init=False)
    integer_ceiling: int | None = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "vacuous", math.isinf(self.ceiling))
        object.__setattr__(self, "integer_ceiling", _integer_ceiling(self.ceiling))

    def to_json_obj(self) -> dict:
        return {
            "alpha": self.alpha.value,
            "rhs": self.rhs_entropy_space,
            "ceiling": "inf" if self.vacuous else self.ceiling,
            "integer_ceiling": self.integer_ceiling,
            "vacuous": self.vacuous,
        }


def alpha_bound(m: BinaryMatrix | Sequence[int], alpha: AlphaLike) -> BoundReport:
    """Bound report for a matrix (or its row sums) at one alpha.

    A matrix with a zero row has permanent 0; the report then carries
    ``ceiling = 0`` and no entropy-space value.
    """
    a = as_alpha(alpha)
    row_sums = m.row_sums if isinstance(m, BinaryMatrix) else tuple(int(r) for r in m)
    if 0 in row_sums:
        return BoundReport(a, None, 0.0)
    rhs = bound_rhs(row_sums, a)
    return BoundReport(a, rhs, invert_bound(rhs, a))


@dataclass(frozen=True)
class OptimizationResult:
    best_alpha: AlphaParameter
    best_ceiling: float
    trace: tuple

    def to_json_obj(self) -> dict:
        def enc(c):
            return "inf" if math.isinf(c) else c
        return {
            "best_alpha": self.best_alpha.value,
            "best_ceiling": enc(self.best_ceiling),
            "trace": [[a, enc(c)] for a, c in self.trace],
        }


def _golden_section(f, lo: float, hi: float, tol: float):
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)


def optimize_alpha(m: BinaryMatrix | Sequence[int], grid_lo: float = DEFAULT_GRID[0],
                   grid_hi: float = DEFAULT_GRID[1], grid_points: int = DEFAULT_GRID[2],
                   tol: float = 1e-6) -> OptimizationResult:
    """Minimize the ceiling over alpha: log-spaced grid (plus alpha = 1), then golden-section refinement."""
    if not (0 < grid_lo < grid_hi) or not math.isfinite(grid_hi) or int(grid_points) < 2:
        raise ValueError("need 0 < grid_lo < grid_hi and grid_points >= 2")
    row_sums = m.row_sums if isinstance(m, BinaryMatrix) else tuple(int(r) for r in m)
    seen: dict = {}

    def ceiling(alpha: float) -> float:
        if alpha not in seen:
            seen[alpha] = alpha_bound(row_sums, alpha).ceiling
        return seen[alpha]

    grid = sorted(set(np.geomspace(grid_lo, grid_hi, int(grid_points)).tolist()) | {1.0})
    values = [ceiling(a) for a in grid]
    i = min(range(len(grid)), key=lambda t: (values[t], grid[t]))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    if math.isfinite(values[i]):
        _golden_section(ceiling, lo, hi, tol)
    trace = tuple(seen.items())
    best_alpha, best = min(trace, key=lambda ac: (ac[1], ac[0]))
    return OptimizationResult(AlphaParameter(best_alpha), best, trace)
