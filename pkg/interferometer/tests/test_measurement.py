import math

import numpy as np
from django.test import SimpleTestCase, override_settings

from interferometer.algebra import as_state, identity, random_state, random_unitary, zero_state
from interferometer.circuit import BeamSplitter, CircuitConfig, PassResult, default_qtltt_params, open_loop_pass
from interferometer.ensemble import block_bounds, monte_carlo, tally_block
from interferometer.exceptions import ZeroOutput
from interferometer.measurement import (
    Outcome,
    born_probabilities,
    collapse,
    collapse_with,
    run_generator,
    trial_generator,
)
from interferometer.timetravel import Coherent, Dephased, ExplicitM, RandomPhase, TwoPassProtocol


def _pass(psi3, psi4):
    psi3, psi4 = as_state(psi3), as_state(psi4)
    return PassResult(psi1=zero_state(psi3.shape[0]), psi2=zero_state(psi3.shape[0]), psi3=psi3, psi4=psi4)


class BornProbabilitiesTest(SimpleTestCase):
    def test_even_split(self):
        p_right, p_left = born_probabilities(open_loop_pass(default_qtltt_params(1, identity(1)), [1.0]))
        self.assertAlmostEqual(p_right, 0.5, delta=1e-15)
        self.assertAlmostEqual(p_left, 0.5, delta=1e-15)

    def test_probabilities_are_complementary(self):
        p_right, p_left = born_probabilities(_pass([0.3, 0.1j], [2.0, -1.0]))
        self.assertEqual(p_right + p_left, 1.0)
        self.assertAlmostEqual(p_right, 0.1 / 5.1, delta=1e-15)

    def test_unnormalized_outputs(self):
        p_right, p_left = born_probabilities(_pass([3.0], [4.0j]))
        self.assertAlmostEqual(p_right, 9 / 25, delta=1e-15)
        self.assertAlmostEqual(p_left, 16 / 25, delta=1e-15)

    def test_empty_left_channel(self):
        self.assertEqual(born_probabilities(_pass([1.0], [0.0])), (1.0, 0.0))

    def test_zero_output(self):
        with self.assertRaises(ZeroOutput):
            born_probabilities(_pass([0.0], [0.0]))


class CollapseTest(SimpleTestCase):
    def test_certain_outcomes(self):
        rng = run_generator(3)
        for _ in range(1000):
            self.assertEqual(collapse_with(1.0, rng), Outcome.LEFT)
            self.assertEqual(collapse_with(0.0, rng), Outcome.RIGHT)

    def test_even_frequencies(self):
        rng = run_generator(4)
        draws = 100_000
        left = sum(collapse_with(0.5, rng) is Outcome.LEFT for _ in range(draws))
        self.assertAlmostEqual(left / draws, 0.5, delta=0.005)

    def test_collapse_uses_born_weights(self):
        rng = run_generator(5)
        self.assertEqual(collapse(_pass([0.0], [1.0]), rng), Outcome.LEFT)
        self.assertEqual(collapse(_pass([1.0], [0.0]), rng), Outcome.RIGHT)

    def test_same_seed_same_stream(self):
        a = run_generator(42).random(8)
        b = run_generator(42).random(8)
        np.testing.assert_array_equal(a, b)

    def test_trial_streams_are_distinct(self):
        first = trial_generator(42, 0).random(4)
        second = trial_generator(42, 1).random(4)
        self.assertFalse(np.array_equal(first, second))
        np.testing.assert_array_equal(trial_generator(42, 1).random(4), second)

    def test_outcome_values(self):
        self.assertEqual(Outcome('left'), Outcome.LEFT)
        self.assertEqual(Outcome.RIGHT.value, 'right')


class BlockBoundsTest(SimpleTestCase):
    def test_even_blocks(self):
        self.assertEqual(block_bounds(9, 3), [(0, 3), (3, 6), (6, 9)])

    def test_remainder_goes_to_leading_blocks(self):
        self.assertEqual(block_bounds(10, 3), [(0, 4), (4, 7), (7, 10)])

    def test_blocks_cover_every_trial_once(self):
        for trials, blocks in ((1, 1), (7, 7), (1000, 6)):
            bounds = block_bounds(trials, blocks)
            covered = [i for start, stop in bounds for i in range(start, stop)]
            self.assertEqual(covered, list(range(trials)))


class MonteCarloTest(SimpleTestCase):
    def setUp(self):
        self.cfg = default_qtltt_params(1, identity(1))
        self.psi = [1.0]

    def test_trigger_rate_and_full_contradiction(self):
        trials = 100_000
        report = monte_carlo(self.cfg, self.psi, Coherent(), trials=trials, seed=20240611, workers=1)
        self.assertEqual(report.left_count + report.right_count, trials)
        self.assertAlmostEqual(report.trigger_frequency, 0.5, delta=0.005)
        self.assertEqual(report.mean_paradox, 1.0)

    def test_trigger_frequency_within_binomial_bounds(self):
        unbalanced = CircuitConfig(dim=1, splitter=BeamSplitter.from_transmission(0.6),
                                   g1=identity(1), g2=identity(1))
        for cfg in (self.cfg, unbalanced):
            p_left = TwoPassProtocol(cfg, self.psi, Coherent()).p_left
            for trials, seed in ((1_000, 101), (10_000, 102), (100_000, 103)):
                with self.subTest(p_left=p_left, trials=trials):
                    report = monte_carlo(cfg, self.psi, Coherent(), trials=trials, seed=seed, workers=1)
                    bound = 3.0 * math.sqrt(p_left * (1.0 - p_left) / trials)
                    self.assertLessEqual(abs(report.trigger_frequency - p_left), bound)
        self.assertAlmostEqual(TwoPassProtocol(unbalanced, self.psi, Coherent()).p_left, 0.9216, delta=1e-12)

    def test_half_turn_dephasing_has_no_contradiction(self):
        report = monte_carlo(self.cfg, self.psi, Dephased(phi=math.pi), trials=2000, seed=9, workers=1)
        self.assertAlmostEqual(report.mean_paradox, 0.0, delta=1e-12)

    def test_random_phase_averages_to_even_second_pass(self):
        report = monte_carlo(self.cfg, self.psi, RandomPhase(), trials=40_000, seed=10, workers=1)
        self.assertAlmostEqual(report.mean_paradox, 0.5, delta=0.01)

    def test_nothing_triggered(self):
        # With no reflection the whole input exits on the right.
        cfg = CircuitConfig(dim=1, splitter=BeamSplitter(alpha=1.0, beta=0.0), g1=identity(1), g2=identity(1))
        report = monte_carlo(cfg, self.psi, Coherent(), trials=50, seed=1, workers=1)
        self.assertEqual(report.right_count, 50)
        self.assertEqual(report.trigger_frequency, 0.0)
        self.assertIsNone(report.mean_paradox)

    def test_block_count_does_not_change_the_report(self):
        rng = np.random.default_rng(12)
        cfg = default_qtltt_params(3, random_unitary(rng, 3))
        psi = random_state(rng, 3)
        for mode in (Coherent(), Dephased(phi=1.0), RandomPhase(), ExplicitM(m=random_unitary(rng, 3))):
            serial = monte_carlo(cfg, psi, mode, trials=3000, seed=77, workers=1)
            blocked = monte_carlo(cfg, psi, mode, trials=3000, seed=77, workers=3)
            self.assertEqual(serial, blocked)

    def test_same_seed_same_report(self):
        first = monte_carlo(self.cfg, self.psi, RandomPhase(), trials=500, seed=5, workers=1)
        second = monte_carlo(self.cfg, self.psi, RandomPhase(), trials=500, seed=5, workers=1)
        self.assertEqual(first, second)

    @override_settings(CHRONOLOOP_THREADS=4)
    def test_workers_default_to_settings(self):
        report = monte_carlo(self.cfg, self.psi, Coherent(), trials=400, seed=3)
        self.assertEqual(report, monte_carlo(self.cfg, self.psi, Coherent(), trials=400, seed=3, workers=1))

    def test_more_workers_than_trials(self):
        report = monte_carlo(self.cfg, self.psi, Coherent(), trials=2, seed=3, workers=8)
        self.assertEqual(report.left_count + report.right_count, 2)

    def test_trials_must_be_positive(self):
        with self.assertRaises(ValueError):
            monte_carlo(self.cfg, self.psi, Coherent(), trials=0, seed=1)

    def test_tally_matches_individual_runs(self):
        protocol = TwoPassProtocol(self.cfg, self.psi, Coherent())
        tally = tally_block(protocol, 8, 0, 200)
        left = sum(protocol.run(trial_generator(8, i)).triggered for i in range(200))
        self.assertEqual(tally['left'], left)
        self.assertEqual(tally['right'], 200 - left)
        self.assertEqual(len(tally['paradoxes']), left)
