import numpy as np
import pytest

from cjkit.fitter import (
    FitConfig,
    FitResult,
    NonFiniteEstimateError,
    NotConvergedError,
    fit,
    fit_firth,
)
from cjkit.model import CountData, DisconnectedError, score_vector
from cjkit.penalties import (
    PenaltySpec,
    alpha_penalties,
    dummy_penalties,
    epsilon_penalties,
    firth_penalties,
)

from _oracles import random_instance

TIGHT = FitConfig(tolerance=1e-10)

# logit closed forms for a single pair, computed independently
LOGIT_3_4 = 1.0986122886681098  # log(3)
LOGIT_0_7125 = 0.9075570519054005
LOGIT_0_7 = 0.8472978603872036
LOGIT_0_9 = 2.1972245773362196


def penalty_vector(kind, counts, lam):
    if kind == "none":
        return np.zeros(counts.n_items)
    if kind == "epsilon":
        return epsilon_penalties(counts)
    if kind == "alpha":
        return alpha_penalties(lam)
    if kind == "dummy":
        return dummy_penalties(lam)
    return firth_penalties(counts, lam)


class TestTwoItemClosedForms:
    # one pair, 3 wins out of 4 for item 0

    def test_plain(self):
        c = CountData([[0, 3], [1, 0]])
        res = fit(c, "none", TIGHT)
        assert res.log_strengths[0] - res.log_strengths[1] == pytest.approx(
            LOGIT_3_4, abs=1e-8
        )

    def test_epsilon(self):
        # shrunken share (3 - 0.15) / 4 = 0.7125
        c = CountData([[0, 3], [1, 0]])
        res = fit(c, "epsilon", TIGHT)
        assert res.log_strengths[0] - res.log_strengths[1] == pytest.approx(
            LOGIT_0_7125, abs=1e-8
        )

    def test_firth(self):
        # adjusted share (3 + 0.5) / (4 + 1) = 0.7
        c = CountData([[0, 3], [1, 0]])
        res = fit(c, "firth", TIGHT)
        assert res.log_strengths[0] - res.log_strengths[1] == pytest.approx(
            LOGIT_0_7, abs=1e-8
        )

    def test_firth_on_a_sweep(self):
        # whitewashed pair stays finite: (4 + 0.5) / (4 + 1) = 0.9
        c = CountData([[0, 4], [0, 0]])
        res = fit(c, "firth", TIGHT)
        assert res.log_strengths[0] - res.log_strengths[1] == pytest.approx(
            LOGIT_0_9, abs=1e-8
        )


class TestResultInvariants:
    def test_mean_zero_and_residual(self):
        rng = np.random.default_rng(20)
        for _ in range(10):
            counts = CountData(random_instance(rng, 5))
            for kind in ("none", "epsilon", "alpha", "dummy", "firth"):
                try:
                    res = fit(counts, kind)
                except NonFiniteEstimateError:
                    assert kind == "none"
                    continue
                assert abs(res.log_strengths.mean()) <= 1e-9
                assert res.converged
                assert res.max_score_residual <= 1e-8  # default tolerance

    def test_residual_is_the_penalized_score(self):
        rng = np.random.default_rng(21)
        counts = CountData(random_instance(rng, 4))
        for kind in ("epsilon", "alpha", "dummy", "firth"):
            res = fit(counts, kind, TIGHT)
            lam = res.log_strengths
            if kind == "dummy":
                # reporting is centred; the anchored solution satisfies the
                # score equations before centring
                shift = _dummy_shift(counts, lam)
                lam = lam + shift
            g = score_vector(counts, lam) + penalty_vector(kind, counts, lam)
            if kind == "epsilon":
                g = g - g.mean()  # stationarity holds on the mean-zero subspace
            assert np.abs(g).max() <= 1e-6

    def test_determinism(self):
        rng = np.random.default_rng(22)
        counts = CountData(random_instance(rng, 6))
        for kind in ("epsilon", "alpha", "dummy", "firth"):
            a = fit(counts, kind)
            b = fit(counts, kind)
            assert np.array_equal(a.log_strengths, b.log_strengths)
            assert a.iterations == b.iterations

    def test_string_and_spec_agree(self):
        c = CountData([[0, 3], [1, 0]])
        a = fit(c, "alpha")
        b = fit(c, PenaltySpec("alpha"))
        assert np.array_equal(a.log_strengths, b.log_strengths)

    def test_zero_constant_degenerates_to_plain(self):
        c = CountData([[0, 4], [0, 0]])
        with pytest.raises(NonFiniteEstimateError):
            fit(c, PenaltySpec("alpha", 0.0))


def _dummy_shift(counts, centred):
    # recover the anchor offset t with sum sigma(lam + t) = n/2
    from scipy.optimize import brentq
    from scipy.special import expit

    n = counts.n_items
    return brentq(lambda t: expit(centred + t).sum() - n / 2.0, -50, 50, xtol=1e-12)


class TestSeparation:
    def test_two_item_whitewash_names_both(self):
        with pytest.raises(NonFiniteEstimateError) as err:
            fit(CountData([[0, 4], [0, 0]]), "none")
        assert err.value.items == [0, 1]
        assert "penalty" in str(err.value)

    def test_undefeated_and_winless_flagged_but_not_the_middle(self):
        # 0 beats everyone, 1 and 2 trade wins, 3 loses everything:
        # 0 drifts up, 3 drifts down, the middle pair stays put
        c = np.zeros((4, 4))
        c[0, 1] = c[0, 2] = c[0, 3] = 1
        c[1, 2] = c[2, 1] = 1
        c[1, 3] = c[2, 3] = 1
        with pytest.raises(NonFiniteEstimateError) as err:
            fit(CountData(c), "none")
        assert err.value.items == [0, 3]

    def test_dominant_group(self):
        # items {0, 1} beat items {2, 3} in every cross meeting; every
        # item drifts once the means are pinned, so all four are named
        c = np.zeros((4, 4))
        c[0, 1], c[1, 0] = 1, 1
        c[2, 3], c[3, 2] = 1, 1
        c[0, 2], c[1, 3] = 2, 2
        with pytest.raises(NonFiniteEstimateError) as err:
            fit(CountData(c), "none")
        assert err.value.items == [0, 1, 2, 3]

    def test_penalties_rescue_separation(self):
        c = np.zeros((3, 3))
        c[0, 1], c[0, 2], c[1, 2], c[2, 1] = 2, 1, 1, 1
        for kind in ("epsilon", "alpha", "dummy", "firth"):
            res = fit(CountData(c), kind)
            assert np.all(np.isfinite(res.log_strengths))
            assert res.converged

    def test_firth_whitewash_value(self):
        c = CountData([[0, 4], [0, 0]])
        res = fit(c, "firth", TIGHT)
        assert np.all(np.isfinite(res.log_strengths))


class TestDisconnected:
    def setup_method(self):
        c = np.zeros((4, 4))
        c[0, 1], c[1, 0] = 2, 1
        c[2, 3], c[3, 2] = 1, 2
        self.counts = CountData(c)

    def test_rejected_kinds(self):
        for kind in ("none", "epsilon", "firth"):
            with pytest.raises(DisconnectedError):
                fit(self.counts, kind)

    def test_alpha_and_dummy_still_fit(self):
        for kind in ("alpha", "dummy"):
            res = fit(self.counts, kind)
            assert res.converged
            assert np.all(np.isfinite(res.log_strengths))


class TestNotConverged:
    def test_partial_result_attached(self):
        rng = np.random.default_rng(23)
        counts = CountData(random_instance(rng, 6))
        config = FitConfig(tolerance=1e-12, max_iterations=1)
        with pytest.raises(NotConvergedError) as err:
            fit(counts, "alpha", config)
        partial = err.value.result
        assert isinstance(partial, FitResult)
        assert not partial.converged
        assert partial.iterations == 1
        assert np.all(np.isfinite(partial.log_strengths))


class TestSymmetries:
    def test_label_invariance(self):
        rng = np.random.default_rng(24)
        counts = random_instance(rng, 6)
        perm = rng.permutation(6)
        permuted = CountData(counts[np.ix_(perm, perm)])
        for kind in ("none", "epsilon", "alpha", "dummy", "firth"):
            try:
                base = fit(CountData(counts), kind, TIGHT).log_strengths
            except NonFiniteEstimateError:
                continue
            other = fit(permuted, kind, TIGHT).log_strengths
            assert other == pytest.approx(base[perm], abs=1e-9)

    def test_outcome_flip_negates(self):
        rng = np.random.default_rng(25)
        counts = random_instance(rng, 5)
        for kind in ("none", "epsilon", "alpha", "dummy", "firth"):
            try:
                base = fit(CountData(counts), kind, TIGHT).log_strengths
            except NonFiniteEstimateError:
                continue
            flipped = fit(CountData(counts.T), kind, TIGHT).log_strengths
            assert flipped == pytest.approx(-base, abs=1e-8)

    def test_balanced_data_gives_zero(self):
        c = np.zeros((4, 4))
        for i in range(4):
            for j in range(i + 1, 4):
                c[i, j] = c[j, i] = 2.0
        counts = CountData(c)
        for kind in ("none", "epsilon", "alpha", "dummy", "firth"):
            res = fit(counts, kind, TIGHT)
            assert res.log_strengths == pytest.approx(np.zeros(4), abs=1e-9)
        assert fit_firth(counts, TIGHT).log_strengths == pytest.approx(
            np.zeros(4), abs=1e-9
        )


class TestFirthRoutes:
    def test_sweepwise_and_outer_refits_agree(self):
        rng = np.random.default_rng(26)
        for _ in range(8):
            counts = CountData(random_instance(rng, 5))
            a = fit(counts, "firth", TIGHT).log_strengths
            b = fit_firth(counts, TIGHT).log_strengths
            assert a == pytest.approx(b, abs=1e-6)

    def test_two_item_closed_form(self):
        c = CountData([[0, 3], [1, 0]])
        res = fit_firth(c, TIGHT)
        assert res.log_strengths[0] - res.log_strengths[1] == pytest.approx(
            LOGIT_0_7, abs=1e-8
        )


class TestConfigValidation:
    def test_tolerance_positive(self):
        with pytest.raises(ValueError):
            FitConfig(tolerance=0.0)

    def test_max_iterations_positive(self):
        with pytest.raises(ValueError):
            FitConfig(max_iterations=0)

    def test_damping_range(self):
        with pytest.raises(ValueError):
            FitConfig(damping=0.0)
        with pytest.raises(ValueError):
            FitConfig(damping=1.5)
