"""Seeded randomized verification campaigns.

Every check is a registered function ``(instance, params, alpha) -> (lhs, rhs)``
that passes when ``lhs <= rhs + tol``; equality checks report
``lhs = |a - b|`` against ``rhs = 0``.  Instances and params are plain JSON
data, so a violation record can be replayed bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

import numpy as np

from . import bounds, entropy, families, permanent, shearer
from .entropy import JointTable

SUITES = ("entropy", "shearer", "family", "permanent")

DEFAULT_ALPHAS = {
    "entropy": (0.5, 1.0, 1.5, 2.0, 3.0),
    "shearer": (1.0, 1.5, 2.0, 3.0),
    "family": (1.0, 1.5, 2.0, 3.0),
    "permanent": (0.25, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0, 3.0, 5.0),
}
DEFAULT_INSTANCES = {"entropy": 500, "shearer": 300, "family": 300, "permanent": 1000}
INTERSECTION_ALPHAS = tuple(np.linspace(1.0, 3.67, 8).tolist())
BREGMAN_LIMIT_RTOL = 1e-4


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    tolerance: float = 1e-10
    alpha_list: tuple = ()
    instances: int | None = None
    output_format: str = "table"
    max_n: int = 10
    density: float = 0.5

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.instances is not None and self.instances < 1:
            raise ValueError("instances must be >= 1")
        if any(not a > 0 for a in self.alpha_list):
            raise ValueError("every alpha must be > 0")
        if self.output_format not in ("table", "json"):
            raise ValueError("output_format must be 'table' or 'json'")
        if not 0 <= self.density <= 1:
            raise ValueError("density must lie in [0, 1]")
        object.__setattr__(self, "alpha_list", tuple(float(a) for a in self.alpha_list))


@dataclass(frozen=True)
class Check:
    fn: Callable
    tol: float | None = None   # None: use RunConfig.tolerance
    alpha_min: float = 0.0
    alpha_max: float = math.inf
    per_alpha: bool = True

    def accepts(self, alpha: float) -> bool:
        return self.alpha_min <= alpha <= self.alpha_max


# ---------------------------------------------------------------- check bodies

def _table(inst) -> JointTable:
    return JointTable.from_json(inst["table"])


def _chain_rule(inst, params, alpha):
    t = _table(inst)
    order = params["order"]
    parts = [entropy.conditional_entropy_daroczy(t, [c], order[:i], alpha) for i, c in enumerate(order)]
    return abs(math.fsum(parts) - entropy.joint_entropy(t, order, alpha)), 0.0


def _chain_rule_pair(inst, params, alpha):
    t = _table(inst)
    x, y = params["x"], params["y"]
    total = entropy.conditional_entropy_daroczy(t, x, y, alpha) + entropy.joint_entropy(t, y, alpha)
    return abs(total - entropy.joint_entropy(t, x + y, alpha)), 0.0


def _subadditivity_pair(inst, params, alpha):
    t = _table(inst)
    x, y = params["x"], params["y"]
    return (entropy.joint_entropy(t, x + y, alpha),
            entropy.joint_entropy(t, x, alpha) + entropy.joint_entropy(t, y, alpha))


def _conditioning(form):
    def run(inst, params, alpha):
        values = shearer.conditioning_chain(_table(inst), params["target"], params["chain"], alpha, form)
        return max(b - a for a, b in zip(values, values[1:])), 0.0
    return run


def _contraction(form):
    fn = (entropy.conditional_entropy_daroczy if form == "daroczy"
          else entropy.conditional_entropy_weighted)

    def run(inst, params, alpha):
        t = _table(inst)
        x, y = params["target"], params["given"]
        merged = t.merge_values(y, params["mapping"])
        return fn(t, [x], [y], alpha), fn(merged, [x], [y], alpha)
    return run


def _form_order(inst, params, alpha):
    t = _table(inst)
    x, y = params["x"], params["y"]
    dar = entropy.conditional_entropy_daroczy(t, x, y, alpha)
    wtd = entropy.conditional_entropy_weighted(t, x, y, alpha)
    if alpha < 1:
        return wtd, dar
    if alpha > 1:
        return dar, wtd
    return abs(dar - wtd), 0.0


def _merge(form):
    def run(inst, params, alpha):
        r = shearer.check_merge_bound(_table(inst), params["target"], params["given"],
                                      params["partition"], alpha, form)
        return r.lhs, r.rhs
    return run


def _shearer(inst, params, alpha):
    r = shearer.check_shearer(_table(inst), shearer.CoverFamily.from_json(inst["cover"]), alpha)
    return r.lhs, r.rhs


def _singleton_reduction(inst, params, alpha):
    t = _table(inst)
    a = shearer.check_shearer(t, shearer.CoverFamily.singletons(t.ndim), alpha)
    b = shearer.check_subadditivity(t, alpha)
    return max(abs(a.lhs - b.lhs), abs(a.rhs - b.rhs)), 0.0


def _trace_corollary(inst, params, alpha):
    r = shearer.check_trace_corollary(families.SetFamily.from_json(inst["family"]),
                                      families.SetFamily.from_json(inst["groups"]), alpha)
    return r.lhs, r.rhs


def _cardinality(inst, params, alpha):
    r = families.check_cardinality_bound(families.SetFamily.from_json(inst["family"]), alpha)
    return r.lhs, r.rhs


def _intersection(inst, params, alpha):
    r = families.check_intersection_family_bound(families.SetFamily.from_json(inst["family"]), None, alpha)
    return r.lhs, r.rhs


def _matrix(inst) -> permanent.BinaryMatrix:
    return permanent.BinaryMatrix.from_rows(inst["rows"])


def _validity(inst, params, alpha):
    m = _matrix(inst)
    return float(permanent.permanent_ryser(m)), bounds.alpha_bound(m, alpha).ceiling


def _bregman_limit(inst, params, alpha):
    m = _matrix(inst)
    b = bounds.bregman_bound(m.row_sums)
    gap = max(abs(bounds.alpha_bound(m, a).ceiling - b) / b for a in (1 - 1e-6, 1 + 1e-6))
    return gap, BREGMAN_LIMIT_RTOL


def _oracle(inst, params, alpha):
    m = _matrix(inst)
    ryser = permanent.permanent_ryser(m)
    others = [permanent.permanent_bruteforce(m)] + [permanent.expand_minor(m, i) for i in range(m.n)]
    return float(max(abs(ryser - o) for o in others)), 0.0


CHECKS = {
    "entropy": {
        "chain_rule": Check(_chain_rule),
        "chain_rule_pair": Check(_chain_rule_pair),
        "subadditivity": Check(_subadditivity_pair, alpha_min=1.0),
        "conditioning_daroczy": Check(_conditioning("daroczy"), alpha_min=1.0),
        "conditioning_weighted": Check(_conditioning("weighted")),
        "contraction_daroczy": Check(_contraction("daroczy"), alpha_min=1.0),
        "contraction_weighted": Check(_contraction("weighted")),
        "form_order": Check(_form_order),
        "merge_daroczy": Check(_merge("daroczy"), alpha_min=1.0),
        "merge_weighted": Check(_merge("weighted")),
    },
    "shearer": {
        "shearer": Check(_shearer, alpha_min=1.0),
        "singleton_reduction": Check(_singleton_reduction, tol=1e-12, alpha_min=1.0),
        "trace_corollary": Check(_trace_corollary, tol=families.TOL, alpha_min=1.0),
    },
    "family": {
        "cardinality": Check(_cardinality, tol=families.TOL, alpha_min=1.0),
        "intersection": Check(_intersection, tol=families.TOL, alpha_min=1.0, alpha_max=3.67),
    },
    "permanent": {
        "validity": Check(_validity, tol=1e-9),
        "bregman_limit": Check(_bregman_limit, tol=0.0, per_alpha=False),
        "oracle_agreement": Check(_oracle, tol=0.0, per_alpha=False),
    },
}


def evaluate(suite: str, check: str, instance: dict, params: dict, alpha: float | None,
             tolerance: float = 1e-10) -> shearer.CheckResult:
    chk = CHECKS[suite][check]
    lhs, rhs = chk.fn(instance, params, alpha)
    tol = tolerance if chk.tol is None else chk.tol
    return shearer.CheckResult(float(lhs), float(rhs), bool(lhs <= rhs + tol))


# ------------------------------------------------------------------ generators

def random_table(rng: np.random.Generator, min_coords: int = 2, max_coords: int = 4,
                 max_alphabet: int = 6) -> JointTable:
    """Random joint table; a random fraction of cells is zeroed to vary supports."""
    shape = tuple(int(s) for s in rng.integers(2, max_alphabet + 1, size=rng.integers(min_coords, max_coords + 1)))
    w = rng.exponential(size=shape)
    w[rng.random(shape) < rng.choice([0.0, 0.3, 0.6])] = 0.0
    if not w.any():
        w.flat[rng.integers(w.size)] = 1.0
    return JointTable.from_array(w / w.sum())


def random_matrix(rng: np.random.Generator, max_n: int = 10, density: float = 0.5) -> permanent.BinaryMatrix:
    n = int(rng.integers(1, max_n + 1))
    return permanent.BinaryMatrix.from_rows((rng.random((n, n)) < density).astype(int).tolist())


def random_family(rng: np.random.Generator, max_n: int = 12, max_m: int = 200,
                  n: int | None = None) -> families.SetFamily:
    if n is None:
        n = int(rng.integers(1, max_n + 1))
    m = int(rng.integers(1, min(max_m, 1 << n) + 1))
    masks = rng.choice(1 << n, size=m, replace=False)
    return families.SetFamily(n, sorted(int(x) for x in masks))


def random_intersection_family(rng: np.random.Generator, max_tries: int = 10_000) -> families.SetFamily:
    """k-uniform family with distinct pairwise intersections and every fraction <= 1/sqrt(2), by rejection."""
    for _ in range(max_tries):
        n = int(rng.integers(4, 11))
        k = int(rng.integers(2, n // 2 + 1))
        pool = list(combinations(range(n), k))
        m = int(rng.integers(2, min(8, len(pool)) + 1))
        chosen = rng.choice(len(pool), size=m, replace=False)
        f = families.SetFamily(n, [sum(1 << j for j in pool[i]) for i in chosen])
        if not families.check_distinct_pairwise_intersections(f):
            continue
        if all(2 * c * c <= m * m for c in f.counts()):
            return f
    raise RuntimeError("rejection sampling did not find an admissible family")


def random_cover(rng: np.random.Generator, n: int) -> shearer.CoverFamily:
    groups = set()
    for _ in range(int(rng.integers(1, 7))):
        mask = int(rng.integers(1, 1 << n))
        groups.add(mask)
    covered = 0
    for g in groups:
        covered |= g
    groups |= {1 << j for j in range(n) if not covered >> j & 1}
    return shearer.CoverFamily(n, [[j + 1 for j in range(n) if g >> j & 1] for g in sorted(groups)])


def _split(rng, n: int):
    order = rng.permutation(n).tolist()
    cut = int(rng.integers(1, n))
    return sorted(order[:cut]), sorted(order[cut:])


def _random_partition(rng, t: JointTable, target: int, given: int):
    py = t.marginal(given)
    support = np.flatnonzero(py > 0).tolist()
    labels = rng.integers(0, len(support), size=len(support))
    blocks = {}
    for y, b in zip(support, labels.tolist()):
        blocks.setdefault(b, []).append(y)
    return [blocks[b] for b in sorted(blocks)]


def _entropy_cases(rng, cfg):
    t = random_table(rng)
    n = t.ndim
    x, y = _split(rng, n)
    order = rng.permutation(n).tolist()
    target, given = (int(v) for v in rng.choice(n, size=2, replace=False))
    chain = [c for c in rng.permutation(n).tolist() if c != target]
    mapping = rng.integers(0, max(1, t.shape[given] - 1), size=t.shape[given])
    mapping = np.unique(mapping, return_inverse=True)[1].tolist()
    instance = {"table": t.to_json_obj()}
    params = {
        "chain_rule": {"order": order},
        "chain_rule_pair": {"x": x, "y": y},
        "subadditivity": {"x": x, "y": y},
        "conditioning_daroczy": {"target": target, "chain": chain},
        "conditioning_weighted": {"target": target, "chain": chain},
        "contraction_daroczy": {"target": target, "given": given, "mapping": mapping},
        "contraction_weighted": {"target": target, "given": given, "mapping": mapping},
        "form_order": {"x": x, "y": y},
    }
    partition = _random_partition(rng, t, target, given)
    try:
        shearer._supports(t, target, given, partition)
        merge = {"target": target, "given": given, "partition": partition}
        params["merge_daroczy"] = params["merge_weighted"] = merge
    except ValueError:
        pass  # coinciding support sets: precondition not met, counted as excluded
    return instance, params


def _shearer_cases(rng, cfg):
    t = random_table(rng, min_coords=1)
    n = t.ndim
    cover = random_cover(rng, n)
    fam = random_family(rng, n=n, max_m=1 << n)
    groups = families.SetFamily(n, sorted({sum(1 << (j - 1) for j in g) for g in cover.groups}))
    instance = {"table": t.to_json_obj(), "cover": cover.to_json_obj(),
                "family": fam.to_json_obj(), "groups": groups.to_json_obj()}
    return instance, {"shearer": {}, "singleton_reduction": {}, "trace_corollary": {}}


def _family_cases(rng, cfg):
    return {"family": random_family(rng).to_json_obj()}, {"cardinality": {}}


def _intersection_cases(rng, cfg):
    return {"family": random_intersection_family(rng).to_json_obj()}, {"intersection": {}}


def _permanent_cases(rng, cfg):
    m = random_matrix(rng, cfg.max_n, cfg.density)
    instance = {"rows": m.to_lists()}
    if 0 in m.row_sums:
        return instance, {}
    params = {"validity": {}, "bregman_limit": {}}
    if m.n <= 8:
        params["oracle_agreement"] = {}
    return instance, params


# -------------------------------------------------------------------- running

@dataclass
class CheckStats:
    evaluated: int = 0
    violations: int = 0
    worst_slack: float = math.inf

    def to_json_obj(self) -> dict:
        return {"evaluated": self.evaluated, "violations": self.violations,
                "worst_slack": None if math.isinf(self.worst_slack) else self.worst_slack}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    instances: int = 0
    excluded: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_obj(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "instances": self.instances,
            "excluded": dict(sorted(self.excluded.items())),
            "checks": {k: v.to_json_obj() for k, v in sorted(self.stats.items())},
            "violations": self.violations,
            "ok": self.ok,
        }


def _record(report: SuiteReport, cfg: RunConfig, suite: str, check: str, instance, params, alpha):
    res = evaluate(suite, check, instance, params, alpha, cfg.tolerance)
    st = report.stats.setdefault(check, CheckStats())
    st.evaluated += 1
    st.worst_slack = min(st.worst_slack, res.slack)
    if not res.holds:
        st.violations += 1
        report.violations.append({
            "suite": suite, "check": check, "alpha": alpha, "tolerance": cfg.tolerance,
            "instance": instance, "params": params, "lhs": res.lhs, "rhs": res.rhs,
        })


def _run_cases(report, cfg, suite, make_case, count, alphas, rng, checks=None):
    for _ in range(count):
        instance, params = make_case(rng, cfg)
        report.instances += 1
        wanted = checks or CHECKS[suite].keys()
        for name in wanted:
            if name not in params:
                report.excluded[name] = report.excluded.get(name, 0) + 1
                continue
            chk = CHECKS[suite][name]
            if not chk.per_alpha:
                _record(report, cfg, suite, name, instance, params[name], None)
                continue
            for a in alphas:
                if chk.accepts(a):
                    _record(report, cfg, suite, name, instance, params[name], a)


def run_suite(suite: str, cfg: RunConfig) -> SuiteReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    rng = np.random.default_rng([cfg.seed, SUITES.index(suite)])
    count = cfg.instances or DEFAULT_INSTANCES[suite]
    alphas = cfg.alpha_list or DEFAULT_ALPHAS[suite]
    report = SuiteReport(suite, cfg.seed)
    if suite == "entropy":
        _run_cases(report, cfg, suite, _entropy_cases, count, alphas, rng)
    elif suite == "shearer":
        _run_cases(report, cfg, suite, _shearer_cases, count, alphas, rng)
    elif suite == "family":
        _run_cases(report, cfg, suite, _family_cases, count, alphas, rng, ["cardinality"])
        inter_alphas = cfg.alpha_list or INTERSECTION_ALPHAS
        _run_cases(report, cfg, suite, _intersection_cases, max(1, -(-count // 3)), inter_alphas, rng,
                   ["intersection"])
    else:
        _run_cases(report, cfg, suite, _permanent_cases, count, alphas, rng)
    return report


def replay(record: dict, tolerance: float | None = None) -> shearer.CheckResult:
    """Re-evaluate a violation record produced by ``run_suite``."""
    try:
        suite, check = record["suite"], record["check"]
        instance, params, alpha = record["instance"], record["params"], record["alpha"]
    except (KeyError, TypeError):
        raise ValueError("replay record needs suite, check, alpha, instance and params") from None
    if suite not in CHECKS or check not in CHECKS[suite]:
        raise ValueError(f"unknown check {suite}/{check}")
    tol = record.get("tolerance", 1e-10) if tolerance is None else tolerance
    return evaluate(suite, check, instance, params, alpha, tol)
