"""Executable checks of the subadditivity, Shearer and conditioning inequalities.

Joint-table coordinates are numpy axes (0-based).  Covers are set families
on ``{1, ..., n}``, so group element ``j`` refers to table axis ``j - 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .checks import CheckResult, UnsupportedRangeError
from .entropy import (AlphaLike, JointTable, alpha_log, as_alpha,
                      conditional_entropy_daroczy, conditional_entropy_weighted,
                      joint_entropy)
from .families import SetFamily

TOL = 1e-10
SET_TOL = 1e-12
FORMS = ("daroczy", "weighted")


@dataclass(frozen=True)
class CoverFamily:
    """Groups of coordinates; ``k`` is the exact minimum coverage count."""

    n: int
    groups: tuple
    k: int = field(init=False)

    def __post_init__(self):
        n = int(self.n)
        groups = tuple(tuple(sorted(int(j) for j in g)) for g in self.groups)
        for g in groups:
            if not g:
                raise ValueError("cover groups must be nonempty")
            if len(set(g)) != len(g):
                raise ValueError(f"group {list(g)} repeats a coordinate")
            if g[0] < 1 or g[-1] > n:
                raise ValueError(f"group {list(g)} has coordinates outside 1..{n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "groups", groups)
        coverage = [sum(j in g for g in groups) for j in range(1, n + 1)]
        object.__setattr__(self, "k", min(coverage) if coverage else 0)

    @classmethod
    def from_json(cls, text_or_obj) -> "CoverFamily":
        obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
        try:
            return cls(int(obj["n"]), obj["groups"])
        except (KeyError, TypeError):
            raise ValueError('cover JSON needs "n" and "groups"') from None

    def to_json_obj(self) -> dict:
        return {"n": self.n, "groups": [list(g) for g in self.groups]}

    @classmethod
    def singletons(cls, n: int) -> "CoverFamily":
        return cls(n, [[j] for j in range(1, n + 1)])


def _require_alpha(alpha, lo: float):
    a = as_alpha(alpha)
    if a.value < lo:
        raise UnsupportedRangeError(f"alpha = {a.value} below {lo}")
    return a


def _form_fn(form: str, alpha):
    if form == "daroczy":
        return conditional_entropy_daroczy, _require_alpha(alpha, 1.0)
    if form == "weighted":
        return conditional_entropy_weighted, as_alpha(alpha)
    raise ValueError(f"form must be one of {FORMS}, got {form!r}")


def check_subadditivity(t: JointTable, alpha: AlphaLike) -> CheckResult:
    """Joint entropy against the sum of single-coordinate entropies (alpha >= 1)."""
    return check_shearer(t, CoverFamily.singletons(t.ndim), _require_alpha(alpha, 1.0))


def check_shearer(t: JointTable, cover: CoverFamily, alpha: AlphaLike) -> CheckResult:
    """``k H(X) <= sum_G H(X(G))`` for a cover with minimum coverage ``k`` (alpha >= 1)."""
    a = _require_alpha(alpha, 1.0)
    if cover.n != t.ndim:
        raise ValueError(f"cover is over {cover.n} coordinates, table has {t.ndim}")
    lhs = cover.k * joint_entropy(t, range(t.ndim), a)
    rhs = math.fsum(joint_entropy(t, [j - 1 for j in g], a) for g in cover.groups)
    return CheckResult(lhs, rhs, lhs <= rhs + TOL)


def check_trace_corollary(f: SetFamily, groups: SetFamily, alpha: AlphaLike) -> CheckResult:
    """``k ln_alpha|F| <= sum_j ln_alpha|F_j|`` with ``F_j`` the distinct traces of F on group j."""
    a = _require_alpha(alpha, 1.0)
    if f.n != groups.n:
        raise ValueError("family and groups must share the ground set")
    if f.m < 1:
        raise ValueError("family must be nonempty")
    coverage = [sum(g >> j & 1 for g in groups.masks) for j in range(f.n)]
    k = min(coverage) if coverage else 0
    if k == 0:
        raise ValueError("some element of the ground set is not covered by any group")
    lhs = k * alpha_log(f.m, a)
    rhs = math.fsum(alpha_log(len({s & g for s in f.masks}), a) for g in groups.masks)
    return CheckResult(lhs, rhs, lhs <= rhs + SET_TOL)


def conditioning_chain(t: JointTable, target, chain: Sequence[int], alpha: AlphaLike,
                       form: str = "daroczy") -> list:
    """``H(target | chain[:l])`` for ``l = 0 .. len(chain)``."""
    fn, a = _form_fn(form, alpha)
    target = (target,) if isinstance(target, (int, np.integer)) else tuple(target)
    chain = [int(c) for c in chain]
    return [fn(t, target, chain[:l], a) for l in range(len(chain) + 1)]


def check_conditioning_monotonicity(t: JointTable, target, chain: Sequence[int], alpha: AlphaLike,
                                    form: str = "daroczy") -> bool:
    values = conditioning_chain(t, target, chain, alpha, form)
    return all(b <= a + TOL for a, b in zip(values, values[1:]))


def _supports(t: JointTable, target: int, given: int, partition):
    ny = t.shape[given]
    blocks = [sorted({int(y) for y in block}) for block in partition]
    flat = [y for b in blocks for y in b]
    if any(not 0 <= y < ny for y in flat):
        raise ValueError(f"partition values must lie in 0..{ny - 1}")
    if len(flat) != len(set(flat)):
        raise ValueError("partition blocks overlap")
    joint = t.marginal((given, target))
    py = joint.sum(axis=1)
    missing = [y for y in np.flatnonzero(py > 0) if y not in set(flat)]
    if missing:
        raise ValueError(f"partition does not cover support values {missing}")
    probs, supports = [], []
    for b in blocks:
        mass = joint[b].sum(axis=0)
        if not b or mass.sum() <= 0:
            raise ValueError(f"partition block {b} carries no probability")
        probs.append(float(math.fsum(joint[b].ravel())))
        supports.append(frozenset(np.flatnonzero(mass > 0).tolist()))
    if len(set(supports)) != len(supports):
        raise ValueError("conditional support sets of two blocks coincide")
    return probs, supports


def check_merge_bound(t: JointTable, target: int, given: int, partition, alpha: AlphaLike,
                      form: str = "weighted") -> CheckResult:
    """Bound a conditional entropy by block probabilities and conditional support sizes.

    ``partition`` lists disjoint groups of values of the ``given``
    coordinate covering its support; the support of ``target`` over each
    block must differ from block to block.
    """
    fn, a = _form_fn(form, alpha)
    t._coords((target, given))
    probs, supports = _supports(t, int(target), int(given), partition)
    lhs = fn(t, (target,), (given,), a)
    power = a.value if form == "daroczy" else 1.0
    rhs = math.fsum(p ** power * alpha_log(len(s), a) for p, s in zip(probs, supports))
    return CheckResult(lhs, rhs, lhs <= rhs + TOL)
