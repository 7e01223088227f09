"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed in the terminal summary."""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from entrocount import bounds, campaign, families, permanent
from entrocount.campaign import RunConfig, run_suite

ALPHAS_ENTROPY = (0.5, 1.0, 1.5, 2.0, 3.0)
ALPHAS_PERMANENT = (0.25, 0.5, 0.9, 1.0, 1.1, 1.5, 2.0, 3.0, 5.0)
ALPHAS_SETS = (1.0, 1.5, 2.0, 3.0)


class Criterion:
    def __init__(self, log, number, title, limit):
        self.log, self.number, self.title, self.limit = log, number, title, limit

    def __enter__(self):
        self.start = time.perf_counter()
        self.problems = []
        return self

    def require(self, ok, message):
        if not ok:
            self.problems.append(message)

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.problems.append(f"{exc_type.__name__}: {exc}")
        if elapsed >= self.limit:
            self.problems.append(f"runtime {elapsed:.2f}s >= {self.limit}s")
        status = "PASS" if not self.problems else "FAIL"
        detail = "; ".join(self.problems[:3]) if self.problems else f"{elapsed:.2f}s"
        self.log.append(f"{status} criterion {self.number}: {self.title} [{detail}]")
        print(self.log[-1])
        if exc is None and self.problems:
            pytest.fail("; ".join(self.problems))
        return False


def harmonic(n):
    return sum(Fraction(1, j) for j in range(1, n + 1))


def test_criterion_01_example_permanent(acceptance_log):
    with Criterion(acceptance_log, 1, "first-row-filled matrix has permanent 1, n = 3..12", 1.0) as c:
        for n in range(3, 13):
            p = permanent.permanent_ryser(permanent.BinaryMatrix.first_row_filled(n))
            c.require(p == 1, f"n={n}: permanent {p}")


def test_criterion_02_harmonic_bound(acceptance_log):
    with Criterion(acceptance_log, 2, "alpha=2 ceiling equals n/H_n, n = 2..1000, rel 1e-12", 1.0) as c:
        h = Fraction(0)
        worst = 0.0
        for n in range(1, 1001):
            h += Fraction(1, n)
            if n < 2:
                continue
            expected = float(n / h)
            got = bounds.alpha_bound([n] + [1] * (n - 1), 2).ceiling
            worst = max(worst, abs(got - expected) / expected)
        c.require(worst <= 1e-12, f"worst relative error {worst:.3g}")


def test_criterion_03_bound_comparison(acceptance_log):
    with Criterion(acceptance_log, 3, "n=20: alpha=2 ceiling ~5.559 < Bregman ~8.304, rel 1e-3", 1.0) as c:
        n = 20
        rows = [n] + [1] * (n - 1)
        exact_alpha2 = float(n / harmonic(n))
        exact_bregman = math.exp(math.lgamma(n + 1) / n)
        a2 = bounds.alpha_bound(rows, 2).ceiling
        br = bounds.bregman_bound(rows)
        c.require(abs(a2 - exact_alpha2) / exact_alpha2 <= 1e-12, f"alpha=2 ceiling {a2} vs {exact_alpha2}")
        c.require(abs(br - exact_bregman) / exact_bregman <= 1e-12, f"bregman {br} vs {exact_bregman}")
        c.require(abs(a2 - 5.559) / 5.559 <= 1e-3, f"alpha=2 ceiling {a2}")
        c.require(abs(br - 8.304) / 8.304 <= 1e-3, f"bregman {br}")
        c.require(a2 < br, "alpha=2 ceiling not below Bregman")


def test_criterion_04_bregman_limit(acceptance_log):
    with Criterion(acceptance_log, 4, "ceiling at alpha = 1 +- 1e-6 within 1e-4 of Bregman, 200 matrices", 5.0) as c:
        rng = np.random.default_rng(2024)
        done, worst = 0, 0.0
        while done < 200:
            m = campaign.random_matrix(rng, 10, 0.5)
            if 0 in m.row_sums:
                continue
            b = bounds.bregman_bound(m.row_sums)
            for a in (1 - 1e-6, 1 + 1e-6):
                worst = max(worst, abs(bounds.alpha_bound(m, a).ceiling - b) / b)
            done += 1
        c.require(worst <= 1e-4, f"worst relative gap {worst:.3g}")


def test_criterion_05_bound_validity(acceptance_log):
    with Criterion(acceptance_log, 5, "permanent <= ceiling + 1e-9 on 1000 random matrices, 9 alphas", 60.0) as c:
        cfg = RunConfig(seed=5, instances=1000, alpha_list=ALPHAS_PERMANENT, max_n=10, density=0.5)
        rng = np.random.default_rng([cfg.seed, 3])
        report = campaign.SuiteReport("permanent", cfg.seed)
        campaign._run_cases(report, cfg, "permanent", campaign._permanent_cases, 1000, ALPHAS_PERMANENT, rng,
                            ["validity"])
        st = report.stats["validity"]
        excluded = report.excluded.get("validity", 0)
        c.require(report.instances == 1000, f"{report.instances} instances")
        c.require(st.evaluated == (1000 - excluded) * len(ALPHAS_PERMANENT), "evaluation count mismatch")
        c.require(st.violations == 0, f"{st.violations} violations, first {report.violations[:1]}")
        print(f"criterion 5: {excluded} zero-row instances excluded")


def test_criterion_06_oracle_agreement(acceptance_log):
    with Criterion(acceptance_log, 6, "Ryser == brute force and row expansion, 200 matrices n <= 8", 30.0) as c:
        rng = np.random.default_rng(6)
        for _ in range(200):
            m = campaign.random_matrix(rng, 8, 0.5)
            p = permanent.permanent_ryser(m)
            c.require(p == permanent.permanent_bruteforce(m), f"brute force disagrees on {m.to_lists()}")
            for i in range(m.n):
                c.require(p == permanent.expand_minor(m, i), f"row {i} expansion disagrees on {m.to_lists()}")


def _suite_clean(c, report, expected_checks):
    c.require(not report.violations, f"{len(report.violations)} violations, first {report.violations[:1]}")
    missing = set(expected_checks) - set(report.stats)
    c.require(not missing, f"checks never evaluated: {sorted(missing)}")


def test_criterion_07_entropy_suite(acceptance_log):
    with Criterion(acceptance_log, 7, "entropy inequality suite, 500 tables, zero violations", 60.0) as c:
        report = run_suite("entropy", RunConfig(seed=7, instances=500, alpha_list=ALPHAS_ENTROPY))
        c.require(report.instances == 500, f"{report.instances} instances")
        _suite_clean(c, report, campaign.CHECKS["entropy"])
        print(f"criterion 7: merge bound excluded on {report.excluded.get('merge_weighted', 0)} tables")


def test_criterion_08_shearer_suite(acceptance_log):
    with Criterion(acceptance_log, 8, "Shearer suite, 300 instances, singleton case within 1e-12", 30.0) as c:
        report = run_suite("shearer", RunConfig(seed=8, instances=300, alpha_list=ALPHAS_SETS))
        c.require(report.instances == 300, f"{report.instances} instances")
        _suite_clean(c, report, ["shearer", "singleton_reduction"])


def test_criterion_09_family_suite(acceptance_log):
    with Criterion(acceptance_log, 9, "set-family suite and worked example", 30.0) as c:
        cfg = RunConfig(seed=9, instances=300)
        report = campaign.SuiteReport("family", cfg.seed)
        rng = np.random.default_rng([cfg.seed, 2])
        campaign._run_cases(report, cfg, "family", campaign._family_cases, 300, ALPHAS_SETS, rng, ["cardinality"])
        campaign._run_cases(report, cfg, "family", campaign._intersection_cases, 100,
                            campaign.INTERSECTION_ALPHAS, rng, ["intersection"])
        c.require(report.stats["cardinality"].evaluated == 300 * len(ALPHAS_SETS), "cardinality count")
        c.require(report.stats["intersection"].evaluated == 100 * 8, "intersection count")
        _suite_clean(c, report, ["cardinality", "intersection"])
        f = families.SetFamily.from_sets(3, [[1, 2], [1, 3], [2, 3]])
        r = families.check_intersection_family_bound(f, 2, 1)
        c.require(abs(r.lhs - math.log(3)) <= 1e-6, f"lhs {r.lhs}")
        c.require(abs(r.rhs - 2.061) <= 1e-3, f"rhs {r.rhs}")
        # h(4/9) written out from its definition
        q = 4 / 9
        derived = 3 * -(q * math.log(q) + (1 - q) * math.log(1 - q))
        c.require(abs(r.rhs - derived) <= 1e-6, f"rhs {r.rhs} vs derived {derived}")
        c.require(r.holds and r.precondition_met, "worked example does not satisfy the bound")


def test_criterion_10_concavity(acceptance_log):
    with Criterion(acceptance_log, 10, "midpoint concavity at step 1e-3, slack 1e-9", 10.0) as c:
        for a in (1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 3.67):
            ok, worst = families.verify_lemma_concavity(a, 1e-3, upper=1 / math.sqrt(2), slack=1e-9)
            c.require(ok, f"alpha={a} on (0, 1/sqrt2]: worst {worst:.3g}")
        for a in (1.0, 1.5, 2.0):
            ok, worst = families.verify_lemma_concavity(a, 1e-3, upper=1.0, slack=1e-9)
            c.require(ok, f"alpha={a} on (0, 1]: worst {worst:.3g}")
