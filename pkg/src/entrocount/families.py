"""Cardinality bounds for set families via binary alpha-entropies.

Set families live on the ground set ``{1, ..., n}`` and are stored as
bitmasks (element ``j`` is bit ``j - 1``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .checks import CheckResult, UnsupportedRangeError
from .entropy import AlphaLike, alpha_log, as_alpha, binary_thc_entropy

TOL = 1e-12
LEMMA_ALPHA_RANGE = (1.0, 3.67)
FULL_INTERVAL_ALPHA_MAX = 2.0


@dataclass(frozen=True)
class SetFamily:
    n: int
    masks: tuple
    m: int = field(init=False)

    def __post_init__(self):
        n = int(self.n)
        masks = tuple(int(s) for s in self.masks)
        if n < 0:
            raise ValueError("ground set size must be >= 0")
        for s in masks:
            if s < 0 or s >> n:
                raise ValueError(f"set {_elements(s)} has elements outside 1..{n}")
        if len(set(masks)) != len(masks):
            raise ValueError("family members must be distinct")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "masks", masks)
        object.__setattr__(self, "m", len(masks))

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        masks = []
        for s in sets:
            mask = 0
            for j in s:
                j = int(j)
                if not 1 <= j <= n:
                    raise ValueError(f"element {j} outside 1..{n}")
                mask |= 1 << (j - 1)
            masks.append(mask)
        return cls(n, masks)

    @classmethod
    def power_set(cls, n: int) -> "SetFamily":
        return cls(n, range(1 << n))

    @classmethod
    def from_json(cls, text_or_obj) -> "SetFamily":
        obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
        try:
            n, sets = int(obj["n"]), obj["sets"]
        except (KeyError, TypeError, ValueError):
            raise ValueError('set family JSON needs integer "n" and list "sets"') from None
        if not isinstance(sets, list) or not all(isinstance(s, list) for s in sets):
            raise ValueError('"sets" must be a list of lists')
        return cls.from_sets(n, sets)

    def to_json_obj(self) -> dict:
        return {"n": self.n, "sets": [_elements(s) for s in self.masks]}

    @property
    def sets(self) -> list:
        return [frozenset(_elements(s)) for s in self.masks]

    def counts(self) -> list:
        """Number of members containing each element ``1..n``."""
        return [sum(s >> j & 1 for s in self.masks) for j in range(self.n)]


def _elements(mask: int) -> list:
    return [j + 1 for j in range(mask.bit_length()) if mask >> j & 1]


class FractionVector(NamedTuple):
    q: tuple
    counts: tuple
    m: int


class IntersectionCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool
    precondition_met: bool
    lam: float
    lambdas: tuple

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def to_json_obj(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": bool(self.holds), "slack": self.slack,
                "precondition_met": bool(self.precondition_met), "lambda": self.lam}


def fraction_vector(f: SetFamily) -> FractionVector:
    if f.m < 1:
        raise ValueError("family must be nonempty")
    counts = tuple(f.counts())
    return FractionVector(tuple(c / f.m for c in counts), counts, f.m)


def _require_alpha(alpha, lo: float, hi: float = math.inf):
    a = as_alpha(alpha)
    if not lo <= a.value <= hi:
        raise UnsupportedRangeError(f"alpha = {a.value} outside [{lo}, {hi}]")
    return a


def check_cardinality_bound(f: SetFamily, alpha: AlphaLike) -> CheckResult:
    """``ln_alpha |F| <= sum_j h_alpha(q_j)`` for alpha >= 1."""
    a = _require_alpha(alpha, 1.0)
    fv = fraction_vector(f)
    lhs = alpha_log(f.m, a)
    rhs = math.fsum(np.atleast_1d(binary_thc_entropy(np.array(fv.q), a))) if f.n else 0.0
    return CheckResult(lhs, rhs, lhs <= rhs + TOL)


def pairwise_intersections(f: SetFamily) -> list:
    return [a & b for a, b in combinations(f.masks, 2)]


def check_distinct_pairwise_intersections(f: SetFamily) -> bool:
    if f.m < 2:
        raise ValueError("need at least two members")
    seen = set()
    for x in pairwise_intersections(f):
        if x in seen:
            return False
        seen.add(x)
    return True


def _uniform_size(f: SetFamily) -> int:
    sizes = {s.bit_count() for s in f.masks}
    if len(sizes) != 1:
        raise ValueError(f"family is not k-uniform (member sizes {sorted(sizes)})")
    return sizes.pop()


def g_ratio(lam, alpha: AlphaLike):
    """``h_alpha(lam**2) / lam`` with the removable singularity at 0 set to 0."""
    lam_arr = np.asarray(lam, dtype=float)
    out = np.zeros_like(lam_arr)
    pos = lam_arr > 0
    out[pos] = binary_thc_entropy(lam_arr[pos] ** 2, alpha) / lam_arr[pos]
    return float(out) if out.ndim == 0 else out


def check_intersection_family_bound(f: SetFamily, k: int | None, alpha: AlphaLike) -> IntersectionCheck:
    """``ln_alpha C(m,2) <= k h_alpha(lam^2)/lam`` for a k-uniform family with distinct pairwise intersections.

    ``holds`` is only a theorem consequence when ``precondition_met``
    (every element lies in at most a ``1/sqrt(2)`` fraction of members).
    """
    a = _require_alpha(alpha, *LEMMA_ALPHA_RANGE)
    size = _uniform_size(f)
    if k is None:
        k = size
    if k != size:
        raise ValueError(f"k = {k} but members have size {size}")
    if k < 1:
        raise ValueError("members must be nonempty")
    if not check_distinct_pairwise_intersections(f):
        raise ValueError("family has coinciding pairwise intersections")
    counts = f.counts()
    m = f.m
    # lambda_j <= 1/sqrt(2)  <=>  2 c_j^2 <= m^2, decided on integers
    precondition = all(2 * c * c <= m * m for c in counts)
    lam_exact = sum(Fraction(c * c, m * m * k) for c in counts)
    lam = float(lam_exact)
    lhs = alpha_log(m * (m - 1) // 2, a)
    rhs = k * g_ratio(lam, a)
    return IntersectionCheck(lhs, rhs, lhs <= rhs + TOL, precondition, lam, tuple(c / m for c in counts))


def verify_lemma_concavity(alpha: AlphaLike, grid_step: float = 1e-3, upper: float | None = None,
                           slack: float = 1e-9) -> tuple:
    """Midpoint-concavity of ``lam -> h_alpha(lam^2)/lam`` over all grid pairs.

    The grid is ``step, 2*step, ...`` up to ``upper`` (default ``1/sqrt(2)``,
    or 1 when alpha <= 2), with ``upper`` itself appended.  Returns
    ``(passed, worst_violation)`` where the violation is
    ``(g(a)+g(b))/2 - g((a+b)/2)``.
    """
    a = _require_alpha(alpha, *LEMMA_ALPHA_RANGE)
    if not 0 < grid_step <= 0.01:
        raise ValueError("grid_step must lie in (0, 0.01]")
    limit = 1.0 if a.value <= FULL_INTERVAL_ALPHA_MAX else 1 / math.sqrt(2)
    if upper is None:
        upper = limit
    if not 0 < upper <= limit:
        raise UnsupportedRangeError(f"concavity is established only up to {limit} for alpha = {a.value}")
    count = int(math.floor(upper / grid_step + 1e-9))
    pts = grid_step * np.arange(1, count + 1)
    if not pts.size or upper - pts[-1] > 1e-12:
        pts = np.append(pts, upper)
    worst = worst_midpoint_violation(pts, a)
    return worst <= slack, worst


def worst_midpoint_violation(points, alpha: AlphaLike) -> float:
    """Max over pairs of ``(g(a)+g(b))/2 - g((a+b)/2)``; positive means not concave."""
    pts = np.asarray(points, dtype=float)
    g = g_ratio(pts, alpha)
    i, j = np.triu_indices(pts.size, k=1)
    if i.size == 0:
        return -math.inf
    violation = (g[i] + g[j]) / 2 - g_ratio((pts[i] + pts[j]) / 2, alpha)
    return float(violation.max())


def max_family_size(k: int, lam: float, alpha: AlphaLike, limit: int = 10 ** 12) -> float:
    """Largest ``m`` with ``ln_alpha C(m,2) <= k h_alpha(lam^2)/lam``, found by doubling then bisection.

    Returns ``inf`` when the right side reaches the cap of ``ln_alpha`` or no
    ``m <= limit`` violates the inequality.
    """
    a = as_alpha(alpha)
    rhs = k * g_ratio(lam, a)
    if a.value > 1 and rhs >= 1 / (a.value - 1):
        return math.inf

    def ok(m: int) -> bool:
        return alpha_log(max(m * (m - 1) // 2, 1), a) <= rhs + TOL

    lo = 2
    if not ok(lo):
        return 1
    hi = 4
    while ok(hi):
        lo = hi
        hi *= 2
        if hi > limit:
            return math.inf
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def scan_alpha_family_size(k: int, lam: float, alphas: Sequence[float]) -> list:
    """Exploratory: the implied family-size ceiling at each alpha."""
    return [(float(a), max_family_size(k, lam, a)) for a in alphas]
