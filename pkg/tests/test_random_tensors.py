"""Signed-sum probabilities, random lift experiments, and resilience."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ptf.cube_lift import CubePoint, lift
from ptf.errors import InvalidInputError, ResourceLimitError, VerificationError
from ptf.random_tensors import (
    ExperimentConfig,
    good_subset_fraction,
    independence_probability_exhaustive,
    littlewood_offord_P,
    lo_distribution,
    lo_empirical,
    lo_probability_exact,
    mc_independence,
    resilience_check,
    subset_verdicts,
    theorem41_parameter_check,
)


class TestSharpBoundSequence:
    def test_reference_value(self):
        assert littlewood_offord_P(3) == Fraction(3, 8)

    def test_non_increasing_and_capped(self):
        values = [littlewood_offord_P(n) for n in range(3, 65)]
        assert all(v <= Fraction(3, 8) for v in values)
        assert all(a >= b for a, b in zip(values, values[1:]))

    def test_closed_form(self):
        for n in range(1, 20):
            assert littlewood_offord_P(n) == Fraction(
                math.comb(n, n // 2), 2**n
            )


class TestExactHitProbability:
    def test_reference_values(self):
        assert lo_probability_exact([1, 1, 1], 1) == Fraction(3, 8)
        assert lo_probability_exact([1, 2], 1) == Fraction(1, 4)

    def test_zero_coefficient_rejected(self):
        with pytest.raises(InvalidInputError):
            lo_probability_exact([1, 0, 1], 0)

    def test_enumeration_cap(self):
        with pytest.raises(ResourceLimitError):
            lo_probability_exact([1] * 21, 0)

    @given(st.lists(st.integers(1, 6), min_size=1, max_size=8),
           st.integers(-10, 10))
    @settings(max_examples=40, deadline=None)
    def test_never_exceeds_sharp_bound(self, coeffs, target):
        n = len(coeffs)
        p = lo_probability_exact(coeffs, target)
        assert p <= littlewood_offord_P(n)
        if target != 0:
            assert p <= littlewood_offord_P(n + 1)


class TestDistribution:
    @given(st.lists(st.fractions(min_value=Fraction(1, 3), max_value=4,
                                 max_denominator=6),
                    min_size=1, max_size=7))
    @settings(max_examples=30, deadline=None)
    def test_total_mass_and_pointwise_agreement(self, coeffs):
        dist = lo_distribution(coeffs)
        assert sum(dist.values()) == 1
        peak = max(dist.values())
        assert peak <= littlewood_offord_P(len(coeffs))
        some_value = next(iter(dist))
        assert lo_probability_exact(coeffs, some_value) == dist[some_value]

    def test_symmetry_about_zero(self):
        dist = lo_distribution([1, 2, 3])
        assert all(dist[v] == dist[-v] for v in dist)


class TestEmpiricalHitRate:
    def test_seeded_reproducibility(self):
        a = lo_empirical([1, 1, 1], 1, 5000, seed=7)
        b = lo_empirical([1, 1, 1], 1, 5000, seed=7)
        assert a.successes == b.successes

    def test_exact_included_for_small_n(self):
        rep = lo_empirical([1, 1, 1], 1, 2000, seed=3)
        assert rep.exact == Fraction(3, 8)
        assert 0.0 <= rep.ci_low <= rep.ci_high <= 1.0

    def test_ci_width_shrinks_with_trials(self):
        narrow = lo_empirical([1, 1, 1], 1, 40000, seed=5)
        wide = lo_empirical([1, 1, 1], 1, 400, seed=5)
        assert (narrow.ci_high - narrow.ci_low) < (wide.ci_high - wide.ci_low)


class TestExperimentConfig:
    def test_validation(self):
        with pytest.raises(InvalidInputError):
            ExperimentConfig(n=0, d=1, m=1, trials=1, master_seed=0)
        with pytest.raises(InvalidInputError):
            ExperimentConfig(n=3, d=4, m=1, trials=1, master_seed=0)
        with pytest.raises(InvalidInputError):
            ExperimentConfig(n=3, d=1, m=1, trials=0, master_seed=0)
        with pytest.raises(InvalidInputError):
            ExperimentConfig(n=3, d=1, m=1, trials=1, master_seed=-1)

    def test_oversized_sample_rejected(self):
        cfg = ExperimentConfig(n=3, d=1, m=5, trials=10, master_seed=0)
        with pytest.raises(InvalidInputError):
            mc_independence(cfg)


class TestIndependenceExperiment:
    def test_thread_count_never_changes_the_outcome(self):
        cfg = ExperimentConfig(n=8, d=2, m=12, trials=400, master_seed=11)
        base = mc_independence(cfg).successes
        for t in (2, 3, 8):
            assert mc_independence(cfg, threads=t).successes == base

    def test_parity_screen_never_beats_exact_rank(self):
        # same seed, same sampled points: a mod-2 nonsingular lift is also
        # nonsingular over the rationals, so the screen can only lose trials
        cfg = ExperimentConfig(n=8, d=2, m=12, trials=400, master_seed=19)
        exact = mc_independence(cfg, mode="rational").successes
        screen = mc_independence(cfg, mode="gf2").successes
        assert screen <= exact

    def test_estimate_matches_successes(self):
        cfg = ExperimentConfig(n=6, d=1, m=4, trials=250, master_seed=123)
        rep = mc_independence(cfg)
        assert rep.estimate == rep.successes / rep.trials


class TestExhaustiveProbability:
    def test_reference_value(self):
        assert independence_probability_exhaustive(3, 1, 4) == Fraction(87, 256)

    def test_single_sample_always_independent(self):
        assert independence_probability_exhaustive(2, 1, 1) == 1

    def test_tuple_budget_enforced(self):
        with pytest.raises(ResourceLimitError):
            independence_probability_exhaustive(10, 2, 10)


class TestResilience:
    def test_face_triple_is_bad_with_verified_witness(self):
        points = [(1, 1, 1), (1, 1, -1), (1, -1, 1)]
        v = resilience_check(points, 1)
        assert not v.good and v.status == "bad"
        assert v.witness.coords() == (1, -1, -1)
        # the returned coefficients exactly rebuild the witness lift
        lifts = [lift(CubePoint.from_coords(p), 1).coords for p in points]
        rebuilt = sum(
            np.array(l, dtype=object) * c for l, c in zip(lifts, v.coefficients)
        )
        assert list(rebuilt) == list(lift(v.witness, 1).coords)

    def test_generic_triple_is_good(self):
        v = resilience_check([(1, 1, 1), (1, -1, -1), (-1, 1, -1)], 1)
        assert v.good and v.witness is None

    def test_duplicate_points_rejected(self):
        with pytest.raises(InvalidInputError):
            resilience_check([(1, 1), (1, 1)], 1)

    def test_dimension_cap(self):
        with pytest.raises(ResourceLimitError):
            resilience_check([tuple([1] * 17)], 1)


class TestSubsetCensus:
    def test_exhaustive_fraction_matches_frozen_oracle(self):
        assert good_subset_fraction(3, 1, 3) == Fraction(8, 56)

    def test_verdict_stream_is_deterministic_and_complete(self):
        verdicts = list(subset_verdicts(3, 1, 3))
        assert len(verdicts) == math.comb(8, 3)
        good = [s for s, v in verdicts if v.good]
        assert len(good) == 8

    def test_sampled_estimate_reproducible(self):
        a = good_subset_fraction(4, 1, 4, trials=100, seed=99)
        b = good_subset_fraction(4, 1, 4, trials=100, seed=99)
        assert a == b
        assert a.denominator == 100

    def test_every_bad_witness_verifies(self):
        for subset, verdict in subset_verdicts(3, 1, 3):
            if verdict.good:
                continue
            lifts = [lift(p, 1).coords for p in subset]
            rebuilt = sum(
                np.array(l, dtype=object) * c
                for l, c in zip(lifts, verdict.coefficients)
            )
            assert list(rebuilt) == list(lift(verdict.witness, 1).coords)
            assert verdict.witness not in subset


class TestRegimePredicates:
    def test_small_instances_are_vacuous(self):
        rc = theorem41_parameter_check(3, 1, 4, 1)
        assert rc.vacuous and not rc.applies

    def test_fields_are_conservative(self):
        rc = theorem41_parameter_check(20, 2, 50, 2)
        assert rc.inner_floor <= rc.n
        assert rc.m_bound >= 0
