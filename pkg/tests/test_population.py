"""Exact population correlation functionals against independent brute-force oracles."""

import numpy as np
import pytest

from degdep import (
    DegenerateLawError,
    JointPmf,
    Pmf,
    continuized_joint_cdf_mean,
    continuized_moment,
    discrete_moment_sum,
    joint_continuized_product,
    kendall_population,
    s_factor,
    size_biased,
    spearman_average_limit,
    spearman_population,
)

from helpers import kendall_brute, random_joint, random_nondegenerate_joint, random_pmf, spearman_brute

EXACT = 1e-12


def diag_bernoulli() -> JointPmf:
    return JointPmf.from_entries({(0, 0): 0.5, (1, 1): 0.5})


def anti_bernoulli() -> JointPmf:
    return JointPmf.from_entries({(0, 1): 0.5, (1, 0): 0.5})


class TestSpearmanPopulation:
    def test_diagonal_bernoulli(self):
        assert spearman_population(diag_bernoulli()) == pytest.approx(0.75, abs=EXACT)

    def test_anti_diagonal_bernoulli(self):
        assert spearman_population(anti_bernoulli()) == pytest.approx(-0.75, abs=EXACT)

    def test_independent_pairs_are_zero(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            j = JointPmf.product(
                random_pmf(rng, 5, min_atoms=2), random_pmf(rng, 5, min_atoms=2)
            )
            assert spearman_population(j) == pytest.approx(0.0, abs=EXACT)

    def test_degenerate_marginal_rejected(self):
        j = JointPmf.from_entries({(0, 0): 0.5, (0, 1): 0.5})
        with pytest.raises(DegenerateLawError):
            spearman_population(j)

    def test_matches_four_probability_definition(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            j = random_nondegenerate_joint(rng, max_side=5)
            assert spearman_population(j) == pytest.approx(spearman_brute(j), abs=EXACT)

    def test_bounded(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            j = random_nondegenerate_joint(rng)
            assert -1.0 - EXACT <= spearman_population(j) <= 1.0 + EXACT


class TestKendallPopulation:
    def test_diagonal_bernoulli(self):
        assert kendall_population(diag_bernoulli()) == pytest.approx(0.5, abs=EXACT)

    def test_anti_diagonal_bernoulli(self):
        assert kendall_population(anti_bernoulli()) == pytest.approx(-0.5, abs=EXACT)

    def test_independent_pairs_are_zero(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            j = JointPmf.product(random_pmf(rng, 5), random_pmf(rng, 5))
            assert kendall_population(j) == pytest.approx(0.0, abs=EXACT)

    def test_matches_sign_product_oracle(self):
        rng = np.random.default_rng(14)
        for _ in range(40):
            j = random_joint(rng, max_side=6)
            assert kendall_population(j) == pytest.approx(kendall_brute(j), abs=EXACT)

    def test_bounded(self):
        rng = np.random.default_rng(15)
        for _ in range(50):
            j = random_joint(rng)
            assert -1.0 - EXACT <= kendall_population(j) <= 1.0 + EXACT


class TestRelabelingInvariance:
    """Rank functionals depend only on the ordering of the support values."""

    @staticmethod
    def _relabel(j: JointPmf) -> JointPmf:
        # strictly increasing integer maps on both margins
        fx = {k: 3 * k + 7 for k in np.unique(j.xs)}
        fy = {l: int(l**3) for l in np.unique(j.ys)}  # monotone on integers
        xs = np.array([fx[k] for k in j.xs])
        ys = np.array([fy[l] for l in j.ys])
        return JointPmf(xs, ys, j.probs)

    def test_spearman_and_kendall_invariant(self):
        rng = np.random.default_rng(16)
        for _ in range(25):
            j = random_nondegenerate_joint(rng, max_side=6)
            k = self._relabel(j)
            assert spearman_population(k) == pytest.approx(spearman_population(j), abs=EXACT)
            assert kendall_population(k) == pytest.approx(kendall_population(j), abs=EXACT)


class TestSFactor:
    def test_bernoulli(self):
        assert s_factor(Pmf(np.array([0, 1]), np.array([0.5, 0.5]))) == pytest.approx(
            0.25, abs=EXACT
        )

    def test_point_mass_is_zero(self):
        assert s_factor(Pmf(np.array([4]), np.array([1.0]))) == 0.0

    def test_uniform_three(self):
        p = Pmf(np.array([0, 1, 2]), np.full(3, 1 / 3))
        assert s_factor(p) == pytest.approx(8 / 27, abs=EXACT)

    def test_in_unit_interval(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            assert 0.0 <= s_factor(random_pmf(rng)) <= 1.0


class TestSpearmanAverageLimit:
    def test_diagonal_bernoulli_is_one(self):
        assert spearman_average_limit(diag_bernoulli()) == pytest.approx(1.0, abs=EXACT)

    def test_anti_diagonal_is_minus_one(self):
        assert spearman_average_limit(anti_bernoulli()) == pytest.approx(-1.0, abs=EXACT)

    def test_independent_is_zero(self):
        rng = np.random.default_rng(18)
        j = JointPmf.product(
            random_pmf(rng, 4, min_atoms=2), random_pmf(rng, 4, min_atoms=2)
        )
        assert spearman_average_limit(j) == pytest.approx(0.0, abs=EXACT)

    def test_degenerate_rejected(self):
        j = JointPmf.from_entries({(0, 0): 0.5, (0, 1): 0.5})
        with pytest.raises(DegenerateLawError):
            spearman_average_limit(j)


class TestContinuizedMoments:
    def test_first_moment_is_half_for_any_law(self):
        rng = np.random.default_rng(19)
        for _ in range(30):
            p = random_pmf(rng)
            assert continuized_moment(p, 1) == pytest.approx(0.5, abs=EXACT)
            assert discrete_moment_sum(p, 1) == pytest.approx(0.5, abs=EXACT)

    def test_bernoulli_second_moment(self):
        p = Pmf(np.array([0, 1]), np.array([0.5, 0.5]))
        assert continuized_moment(p, 2) == pytest.approx(1 / 3, abs=EXACT)

    def test_point_mass_second_moment(self):
        p = Pmf(np.array([9]), np.array([1.0]))
        assert continuized_moment(p, 2) == pytest.approx(1 / 3, abs=EXACT)

    def test_moment_identity_orders_one_to_four(self):
        rng = np.random.default_rng(20)
        for _ in range(60):
            p = random_pmf(rng)
            for m in (1, 2, 3, 4):
                assert continuized_moment(p, m) == pytest.approx(
                    discrete_moment_sum(p, m), abs=EXACT
                )

    def test_rejects_order_zero(self):
        p = Pmf(np.array([0]), np.array([1.0]))
        with pytest.raises(ValueError):
            continuized_moment(p, 0)

    def test_mean_tie_aware_cdf_is_one(self):
        rng = np.random.default_rng(21)
        for _ in range(30):
            p = random_pmf(rng)
            mean_sf = float(np.dot(p.probs, p.tie_aware_cdf(p.support)))
            assert mean_sf == pytest.approx(1.0, abs=EXACT)


class TestJointContinuizedIdentities:
    def test_quarter_identity_for_products(self):
        rng = np.random.default_rng(22)
        j = JointPmf.product(random_pmf(rng, 4), random_pmf(rng, 4))
        assert joint_continuized_product(j) == pytest.approx(0.25, abs=EXACT)

    def test_diagonal_bernoulli_value(self):
        assert joint_continuized_product(diag_bernoulli()) == pytest.approx(
            0.3125, abs=EXACT
        )

    def test_quarter_of_tie_aware_product(self):
        rng = np.random.default_rng(23)
        for _ in range(40):
            j = random_joint(rng)
            mx, my = j.marginal_x(), j.marginal_y()
            sf_prod = float(
                np.dot(j.probs, mx.tie_aware_cdf(j.xs) * my.tie_aware_cdf(j.ys))
            )
            assert joint_continuized_product(j) == pytest.approx(sf_prod / 4, abs=EXACT)

    def test_quarter_of_tie_aware_joint_cdf(self):
        rng = np.random.default_rng(24)
        for _ in range(40):
            j = random_joint(rng)
            sh_mean = float(np.dot(j.probs, j.tie_aware_joint_cdf(j.xs, j.ys)))
            assert continuized_joint_cdf_mean(j) == pytest.approx(sh_mean / 4, abs=EXACT)

    def test_chains_to_spearman(self):
        rng = np.random.default_rng(25)
        for _ in range(25):
            j = random_nondegenerate_joint(rng)
            assert 3 * (4 * joint_continuized_product(j)) - 3 == pytest.approx(
                spearman_population(j), abs=EXACT
            )


class TestSizeBiased:
    def test_uniform_two_atoms(self):
        p = Pmf(np.array([1, 2]), np.array([0.5, 0.5]))
        b = size_biased(p)
        assert b.support.tolist() == [1, 2]
        assert b.probs == pytest.approx([1 / 3, 2 / 3], abs=EXACT)

    def test_point_mass_fixed(self):
        p = Pmf(np.array([5]), np.array([1.0]))
        b = size_biased(p)
        assert b.support.tolist() == [5] and b.probs.tolist() == [1.0]

    def test_drops_zero_atom(self):
        p = Pmf(np.array([0, 2]), np.array([0.5, 0.5]))
        assert size_biased(p).support.tolist() == [2]

    def test_zero_mean_rejected(self):
        p = Pmf(np.array([0]), np.array([1.0]))
        with pytest.raises(DegenerateLawError):
            size_biased(p)
