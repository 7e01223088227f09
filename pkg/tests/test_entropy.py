import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entrocount.entropy import (AlphaParameter, DiscreteDistribution, JointTable, _eta, alpha_log,
                                binary_thc_entropy, conditional_entropy_daroczy,
                                conditional_entropy_weighted, joint_entropy, parse_distribution,
                                thc_entropy)

from conftest import alphas, alphas_ge1, direct_thc, joint_tables

UNIFORM_BITS = JointTable((2, 2), [0.25] * 4)


class TestAlphaParameter:
    def test_shannon_flag(self):
        assert AlphaParameter(1).is_shannon
        assert not AlphaParameter(1 + 1e-12).is_shannon

    @pytest.mark.parametrize("bad", [0, -1, math.inf, math.nan])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            AlphaParameter(bad)


class TestAlphaLog:
    @pytest.mark.parametrize("alpha", [0.2, 0.5, 1.0, 2.0, 7.0])
    def test_one(self, alpha):
        assert alpha_log(1, alpha) == 0

    def test_alpha_two(self):
        assert alpha_log(4, 2) == pytest.approx(0.75, abs=1e-15)

    def test_natural_log(self):
        assert alpha_log(math.e, 1) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("xi", [0, -2.0])
    def test_domain(self, xi):
        with pytest.raises(ValueError):
            alpha_log(xi, 2)

    @given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3), alphas)
    def test_monotone(self, x, y, alpha):
        if x < y:
            assert alpha_log(x, alpha) <= alpha_log(y, alpha)

    @given(st.floats(1e-2, 1e2), st.floats(1e-2, 1e2), alphas)
    def test_product_identity(self, r, xi, alpha):
        lhs = alpha_log(r * xi, alpha)
        rhs = alpha_log(r, alpha) + r ** (1 - alpha) * alpha_log(xi, alpha)
        assert lhs == pytest.approx(rhs, abs=1e-12, rel=1e-12)

    def test_continuous_through_one(self):
        for xi in [0.1, 2.0, 50.0]:
            for d in [1e-6, 1e-9, 1e-12]:
                assert alpha_log(xi, 1 + d) == pytest.approx(math.log(xi), rel=1e-5)
                assert alpha_log(xi, 1 - d) == pytest.approx(math.log(xi), rel=1e-5)

    def test_vectorized(self):
        out = alpha_log(np.array([1.0, 2.0, 4.0]), 2)
        np.testing.assert_allclose(out, [0.0, 0.5, 0.75], atol=1e-15)


class TestThcEntropy:
    def test_point_mass(self):
        assert thc_entropy([1, 0, 0], 2) == 0

    @pytest.mark.parametrize("n", [1, 2, 5, 16])
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.5])
    def test_uniform_is_log(self, n, alpha):
        assert thc_entropy([1 / n] * n, alpha) == pytest.approx(alpha_log(n, alpha), abs=1e-12)

    def test_fair_coin_alpha_two(self):
        assert thc_entropy([0.5, 0.5], 2) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("bad", [[0.5, 0.6], [-0.1, 1.1], [], [math.nan, 1]])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            thc_entropy(bad, 2)

    def test_renormalize(self):
        d = DiscreteDistribution.from_weights([1, 1, 2])
        np.testing.assert_allclose(d.probs, [0.25, 0.25, 0.5])

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=8).filter(lambda w: sum(w) > 1e-3), alphas)
    def test_against_defining_sum(self, w, alpha):
        p = np.array(w) / sum(w)
        assert thc_entropy(p, alpha) == pytest.approx(direct_thc(p, alpha), abs=1e-9)

    @given(st.lists(st.floats(0, 1), min_size=1, max_size=8).filter(lambda w: sum(w) > 1e-3), alphas)
    def test_bounded_by_support_log(self, w, alpha):
        p = np.array(w) / sum(w)
        h = thc_entropy(p, alpha)
        assert 0 <= h <= alpha_log(np.count_nonzero(p), alpha) + 1e-10


class TestBinary:
    @pytest.mark.parametrize("q", [0.0, 1.0])
    def test_deterministic(self, q):
        assert binary_thc_entropy(q, 2.5) == 0

    def test_half_shannon(self):
        assert binary_thc_entropy(0.5, 1) == pytest.approx(math.log(2), abs=1e-15)

    def test_half_alpha_two(self):
        assert binary_thc_entropy(0.5, 2) == pytest.approx(thc_entropy([0.5, 0.5], 2), abs=1e-15)
        assert binary_thc_entropy(0.5, 2) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("q", [-0.1, 1.5])
    def test_domain(self, q):
        with pytest.raises(ValueError):
            binary_thc_entropy(q, 2)

    @given(st.floats(0.5, 1), alphas)
    def test_symmetric(self, q, alpha):
        # 1 - q is exact for q >= 1/2; elsewhere the rounding of 1 - q gets
        # amplified by the unbounded slope of h near 0 when alpha < 1
        assert binary_thc_entropy(q, alpha) == pytest.approx(binary_thc_entropy(1 - q, alpha), abs=1e-12)

    @given(st.floats(1e-9, 1 - 1e-9), alphas)
    def test_matches_two_point_entropy(self, q, alpha):
        assert binary_thc_entropy(q, alpha) == pytest.approx(direct_thc([q, 1 - q], alpha), abs=1e-9)


class TestEta:
    def test_zero(self):
        assert _eta(0.0, 2) == 0

    @given(st.floats(0, 1), st.floats(0, 1), st.sampled_from([0.3, 0.7, 1.5, 3.0]))
    def test_concave_midpoint(self, a, b, alpha):
        assert _eta((a + b) / 2, alpha) >= (_eta(a, alpha) + _eta(b, alpha)) / 2 - 1e-12


class TestJointAndConditional:
    def test_joint_uniform_bits(self):
        assert joint_entropy(UNIFORM_BITS, (0, 1), 2) == pytest.approx(0.75, abs=1e-15)

    def test_joint_full_is_flat(self):
        t = JointTable((2, 3), [0.1, 0.2, 0.05, 0.15, 0.3, 0.2])
        assert joint_entropy(t, (0, 1), 1.7) == pytest.approx(thc_entropy(t.probs.ravel(), 1.7))

    def test_deterministic_coordinate(self):
        t = JointTable((2, 3), [0.2, 0.3, 0.5, 0, 0, 0])
        assert joint_entropy(t, [0], 2) == 0

    @pytest.mark.parametrize("coords", [[], [2], [0, 0], [-1]])
    def test_bad_coords(self, coords):
        with pytest.raises(ValueError):
            joint_entropy(UNIFORM_BITS, coords, 2)

    def test_daroczy_independent(self):
        assert conditional_entropy_daroczy(UNIFORM_BITS, [0], [1], 2) == pytest.approx(0.25, abs=1e-15)

    def test_weighted_independent(self):
        assert conditional_entropy_weighted(UNIFORM_BITS, [0], [1], 2) == pytest.approx(0.5, abs=1e-15)

    def test_function_of_given_is_zero(self):
        t = JointTable((3, 3), np.diag([0.2, 0.5, 0.3]).ravel())
        for fn in (conditional_entropy_daroczy, conditional_entropy_weighted):
            assert fn(t, [0], [1], 2.3) == 0

    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            conditional_entropy_daroczy(UNIFORM_BITS, [0], [0, 1], 2)

    def test_shannon_forms_agree(self):
        p = np.array([[0.1, 0.2, 0.0], [0.3, 0.1, 0.3]])
        t = JointTable.from_array(p)
        # standard conditional Shannon entropy as -sum p(x,y) ln p(x|y)
        py = p.sum(axis=0)
        expected = -sum(p[x, y] * math.log(p[x, y] / py[y]) for x in range(2) for y in range(3) if p[x, y])
        assert conditional_entropy_daroczy(t, [0], [1], 1) == pytest.approx(expected, abs=1e-14)
        assert conditional_entropy_weighted(t, [0], [1], 1) == pytest.approx(expected, abs=1e-14)

    def test_zero_probability_slice_skipped(self):
        t = JointTable((2, 2), [0.5, 0.0, 0.5, 0.0])
        assert conditional_entropy_weighted(t, [0], [1], 2) == pytest.approx(0.5)

    def test_marginal_order(self):
        t = JointTable.from_array(np.arange(24, dtype=float).reshape(2, 3, 4) / 276)
        m = t.marginal((2, 0))
        assert m.shape == (4, 2)
        np.testing.assert_allclose(m, t.probs.sum(axis=1).T)

    def test_merge_values(self):
        t = JointTable((2, 3), [0.1, 0.2, 0.05, 0.15, 0.3, 0.2])
        merged = t.merge_values(1, [0, 1, 0])
        np.testing.assert_allclose(merged.probs, [[0.15, 0.2], [0.35, 0.3]])


class TestEntropyProperties:
    @given(joint_tables(), alphas)
    def test_chain_rule(self, t, alpha):
        lhs = joint_entropy(t, (0, 1), alpha)
        rhs = conditional_entropy_daroczy(t, [0], [1], alpha) + joint_entropy(t, [1], alpha)
        assert lhs == pytest.approx(rhs, abs=1e-10)

    @given(joint_tables(min_coords=3, max_coords=4, max_alphabet=3), alphas, st.randoms())
    def test_n_variable_chain_rule(self, t, alpha, rnd):
        order = list(range(t.ndim))
        rnd.shuffle(order)
        total = sum(conditional_entropy_daroczy(t, [c], order[:i], alpha) for i, c in enumerate(order))
        assert total == pytest.approx(joint_entropy(t, order, alpha), abs=1e-10)

    @given(joint_tables(), alphas_ge1)
    def test_subadditive(self, t, alpha):
        assert joint_entropy(t, (0, 1), alpha) <= joint_entropy(t, [0], alpha) + joint_entropy(t, [1], alpha) + 1e-10

    @given(joint_tables(min_coords=3), alphas_ge1)
    def test_daroczy_conditioning_reduces(self, t, alpha):
        assert (conditional_entropy_daroczy(t, [0], [1, 2], alpha)
                <= conditional_entropy_daroczy(t, [0], [1], alpha) + 1e-10)

    @given(joint_tables(min_coords=3), alphas)
    def test_weighted_conditioning_reduces(self, t, alpha):
        assert (conditional_entropy_weighted(t, [0], [1, 2], alpha)
                <= conditional_entropy_weighted(t, [0], [1], alpha) + 1e-10)

    @given(joint_tables(), alphas)
    def test_form_ordering(self, t, alpha):
        dar = conditional_entropy_daroczy(t, [0], [1], alpha)
        wtd = conditional_entropy_weighted(t, [0], [1], alpha)
        if alpha < 1:
            assert wtd <= dar + 1e-12
        elif alpha > 1:
            assert wtd >= dar - 1e-12
        else:
            assert wtd == pytest.approx(dar, abs=1e-12)

    @given(joint_tables(max_alphabet=5), alphas, st.data())
    def test_function_contraction(self, t, alpha, data):
        ny = t.shape[1]
        mapping = data.draw(st.lists(st.integers(0, ny - 1), min_size=ny, max_size=ny))
        merged = t.merge_values(1, mapping)
        wtd = conditional_entropy_weighted
        assert wtd(merged, [0], [1], alpha) >= wtd(t, [0], [1], alpha) - 1e-10
        if alpha >= 1:
            dar = conditional_entropy_daroczy
            assert dar(merged, [0], [1], alpha) >= dar(t, [0], [1], alpha) - 1e-10


class TestParsing:
    def test_array_is_distribution(self):
        d = parse_distribution("[0.5, 0.5]")
        assert isinstance(d, DiscreteDistribution)

    def test_object_is_table(self):
        t = parse_distribution('{"shape": [2, 2], "probs": [0.25, 0.25, 0.25, 0.25]}')
        assert t.shape == (2, 2)

    def test_round_trip(self):
        t = JointTable((2, 3), [0.1, 0.2, 0.05, 0.15, 0.3, 0.2])
        again = JointTable.from_json(t.to_json_obj())
        np.testing.assert_array_equal(again.probs, t.probs)

    @pytest.mark.parametrize("text", ['{"shape": [2, 2], "probs": [1, 0, 0]}', '{"shape": [2]}', '"x"',
                                      '{"shape": [2], "probs": [0.7, 0.7]}'])
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            parse_distribution(text)

    def test_renormalize_table(self):
        t = JointTable.from_json({"shape": [2], "probs": [1, 3]}, renormalize=True)
        np.testing.assert_allclose(t.probs, [0.25, 0.75])
