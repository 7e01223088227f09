"""Tsallis-Havrda-Charvat alpha-entropies over finite distributions.

All entropy sums use the convention that zero-probability outcomes
contribute nothing.  Near ``alpha == 1`` the deformed logarithm is evaluated
through ``expm1`` so the Shannon limit is approached continuously; the
exact value ``alpha == 1`` takes the natural-log branch.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

PROB_TOL = 1e-12


@dataclass(frozen=True)
class AlphaParameter:
    """Entropic order; ``is_shannon`` is true only for exactly 1."""

    value: float
    is_shannon: bool = field(init=False)

    def __post_init__(self):
        value = float(self.value)
        if not math.isfinite(value) or value <= 0:
            raise ValueError(f"alpha must be a finite positive real, got {self.value!r}")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "is_shannon", value == 1.0)

    def __float__(self):
        return self.value


AlphaLike = Union[AlphaParameter, float, int]


def as_alpha(alpha: AlphaLike) -> AlphaParameter:
    if isinstance(alpha, AlphaParameter):
        return alpha
    return AlphaParameter(alpha)


def alpha_log(xi, alpha: AlphaLike):
    """Deformed logarithm ``(xi**(1-alpha) - 1) / (1 - alpha)``.

    Accepts scalars or arrays; scalar input returns a Python float.
    """
    a = as_alpha(alpha)
    x = np.asarray(xi, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("alpha_log is defined only for xi > 0")
    if a.is_shannon:
        out = np.log(x)
    else:
        c = 1.0 - a.value
        out = np.expm1(c * np.log(x)) / c
    return float(out) if out.ndim == 0 else out


def _weighted_log_inverse(p: np.ndarray, alpha: AlphaParameter, log_p: np.ndarray | None = None) -> np.ndarray:
    # p * ln_alpha(1/p) for p > 0, with ln(p) optionally supplied for accuracy
    if log_p is None:
        log_p = np.log(p)
    if alpha.is_shannon:
        return -p * log_p
    c = 1.0 - alpha.value
    return p * np.expm1(-c * log_p) / c


def _eta(xi, alpha: AlphaLike):
    """Concave kernel ``(xi**alpha - xi) / (1 - alpha)`` with ``eta(0) = 0``."""
    a = as_alpha(alpha)
    x = np.asarray(xi, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = _weighted_log_inverse(x[pos], a)
    return float(out) if out.ndim == 0 else out


def _entropy_of_vector(p: np.ndarray, alpha: AlphaParameter) -> float:
    p = p[p > 0]
    if p.size == 0:
        return 0.0
    return float(max(0.0, math.fsum(_weighted_log_inverse(p, alpha))))


def _check_probs(probs: np.ndarray) -> None:
    if probs.size == 0:
        raise ValueError("probability vector is empty")
    if not np.all(np.isfinite(probs)):
        raise ValueError("probabilities must be finite")
    if np.any(probs < 0):
        raise ValueError("probabilities must be nonnegative")
    total = math.fsum(probs.ravel())
    if abs(total - 1.0) > PROB_TOL:
        raise ValueError(f"probabilities sum to {total!r}, not 1")


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class DiscreteDistribution:
    probs: np.ndarray
    labels: tuple | None = None

    def __post_init__(self):
        probs = _readonly(np.asarray(self.probs, dtype=float).ravel())
        _check_probs(probs)
        if self.labels is not None and len(self.labels) != probs.size:
            raise ValueError("labels must match the number of outcomes")
        object.__setattr__(self, "probs", probs)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_weights(cls, weights: Iterable[float], labels=None) -> "DiscreteDistribution":
        """Renormalize nonnegative weights (e.g. file-sourced probabilities)."""
        w = np.asarray(list(weights), dtype=float)
        if w.size == 0 or np.any(w < 0) or not np.all(np.isfinite(w)) or w.sum() <= 0:
            raise ValueError("weights must be finite, nonnegative and not all zero")
        return cls(w / w.sum(), labels)

    @property
    def support_size(self) -> int:
        return int(np.count_nonzero(self.probs))

    def __len__(self):
        return self.probs.size


@dataclass(frozen=True, eq=False)
class JointTable:
    """Probability table over a product alphabet, stored with one axis per coordinate.

    Coordinates are numpy axes and are indexed from 0.
    """

    shape: tuple
    probs: np.ndarray

    def __post_init__(self):
        shape = tuple(int(s) for s in self.shape)
        if not shape or any(s < 1 for s in shape):
            raise ValueError(f"shape must be a nonempty tuple of positive integers, got {self.shape!r}")
        flat = np.asarray(self.probs, dtype=float).ravel()
        if flat.size != math.prod(shape):
            raise ValueError(f"table has {flat.size} entries but shape {shape} needs {math.prod(shape)}")
        _check_probs(flat)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "probs", _readonly(flat.reshape(shape)))

    @classmethod
    def from_array(cls, arr, renormalize: bool = False) -> "JointTable":
        arr = np.asarray(arr, dtype=float)
        if renormalize:
            total = arr.sum()
            if total <= 0:
                raise ValueError("cannot renormalize a table with zero mass")
            arr = arr / total
        return cls(arr.shape, arr)

    @classmethod
    def from_json(cls, text_or_obj, renormalize: bool = False) -> "JointTable":
        obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
        try:
            shape, probs = obj["shape"], obj["probs"]
        except (KeyError, TypeError):
            raise ValueError('joint table JSON needs "shape" and "probs"') from None
        arr = np.asarray(probs, dtype=float)
        if arr.ndim != 1:
            raise ValueError('"probs" must be a flat array')
        if arr.size != math.prod(int(s) for s in shape):
            raise ValueError('"probs" length does not match "shape"')
        arr = arr.reshape([int(s) for s in shape])
        return cls.from_array(arr, renormalize=renormalize)

    def to_json_obj(self) -> dict:
        return {"shape": list(self.shape), "probs": [float(x) for x in self.probs.ravel()]}

    @property
    def ndim(self) -> int:
        return len(self.shape)

    def _coords(self, coords) -> tuple:
        if isinstance(coords, (int, np.integer)):
            coords = (coords,)
        coords = tuple(int(c) for c in coords)
        for c in coords:
            if not 0 <= c < self.ndim:
                raise ValueError(f"coordinate {c} out of range for a {self.ndim}-coordinate table")
        if len(set(coords)) != len(coords):
            raise ValueError(f"repeated coordinate in {coords}")
        return coords

    def marginal(self, coords) -> np.ndarray:
        """Marginal array whose axes follow the order given in ``coords``."""
        coords = self._coords(coords)
        if not coords:
            return np.array(1.0)
        drop = tuple(i for i in range(self.ndim) if i not in coords)
        m = self.probs.sum(axis=drop) if drop else self.probs
        kept = sorted(coords)
        return np.transpose(m, [kept.index(c) for c in coords])

    def merge_values(self, coord: int, mapping: Sequence[int]) -> "JointTable":
        """Relabel values of ``coord`` through ``mapping`` (value -> new value), summing merged slices."""
        (coord,) = self._coords((coord,))
        mapping = [int(v) for v in mapping]
        if len(mapping) != self.shape[coord] or min(mapping) < 0:
            raise ValueError("mapping must assign a nonnegative new value to every old value")
        size = max(mapping) + 1
        moved = np.moveaxis(self.probs, coord, 0)
        out = np.zeros((size,) + moved.shape[1:])
        for old, new in enumerate(mapping):
            out[new] += moved[old]
        return JointTable.from_array(np.moveaxis(out, 0, coord))


def thc_entropy(p, alpha: AlphaLike) -> float:
    """THC entropy of a distribution (``DiscreteDistribution`` or probability vector)."""
    a = as_alpha(alpha)
    if not isinstance(p, DiscreteDistribution):
        p = DiscreteDistribution(p)
    return _entropy_of_vector(p.probs, a)


def binary_thc_entropy(q, alpha: AlphaLike):
    """Binary entropy ``h_alpha(q)``; vectorized over ``q``."""
    a = as_alpha(alpha)
    qa = np.asarray(q, dtype=float)
    if np.any(~((qa >= 0) & (qa <= 1))):
        raise ValueError("q must lie in [0, 1]")
    out = np.zeros_like(qa)
    inner = (qa > 0) & (qa < 1)
    qi = qa[inner]
    out[inner] = (_weighted_log_inverse(qi, a)
                  + _weighted_log_inverse(1.0 - qi, a, log_p=np.log1p(-qi)))
    out = np.maximum(out, 0.0)
    return float(out) if out.ndim == 0 else out


def joint_entropy(t: JointTable, coords, alpha: AlphaLike) -> float:
    coords = t._coords(coords)
    if not coords:
        raise ValueError("coords must be nonempty")
    return _entropy_of_vector(t.marginal(coords).ravel(), as_alpha(alpha))


def _slices(t: JointTable, target, given):
    target, given = t._coords(target), t._coords(given)
    if not target:
        raise ValueError("target must be nonempty")
    if set(target) & set(given):
        raise ValueError(f"target {target} and given {given} overlap")
    m = t.marginal(given + target)
    ny = math.prod(t.shape[c] for c in given)
    return m.reshape(ny, -1)


def _row_entropies(rows: np.ndarray, alpha: AlphaParameter) -> np.ndarray:
    out = np.zeros(rows.shape)
    pos = rows > 0
    out[pos] = _weighted_log_inverse(rows[pos], alpha)
    return np.maximum(out.sum(axis=1), 0.0)


def _conditional(t, target, given, alpha, weight_power: bool) -> float:
    a = as_alpha(alpha)
    rows = _slices(t, target, given)
    py = rows.sum(axis=1)
    keep = py > 0
    py = py[keep]
    h = _row_entropies(rows[keep] / py[:, None], a)
    weights = py ** a.value if weight_power else py
    return float(math.fsum(weights * h))


def conditional_entropy_daroczy(t: JointTable, target, given, alpha: AlphaLike) -> float:
    """Conditional entropy with slice weights ``p(y)**alpha``; obeys the chain rule."""
    return _conditional(t, target, given, alpha, weight_power=True)


def conditional_entropy_weighted(t: JointTable, target, given, alpha: AlphaLike) -> float:
    """Conditional entropy with slice weights ``p(y)``."""
    return _conditional(t, target, given, alpha, weight_power=False)


def parse_distribution(text_or_obj, renormalize: bool = False):
    """Parse a bare JSON array into a distribution, or an object into a ``JointTable``."""
    obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
    if isinstance(obj, list):
        return DiscreteDistribution.from_weights(obj) if renormalize else DiscreteDistribution(obj)
    if isinstance(obj, dict):
        return JointTable.from_json(obj, renormalize=renormalize)
    raise ValueError("expected a JSON array (distribution) or object (joint table)")
