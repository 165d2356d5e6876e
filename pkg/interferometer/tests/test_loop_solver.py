import numpy as np
from django.test import SimpleTestCase

from interferometer.algebra import identity, norm, random_state, random_unitary, zero_operator
from interferometer.circuit import closed_form_outputs, default_qtltt_params, open_loop_pass, two_input_pass
from interferometer.exceptions import DimensionMismatch, NoConvergence, Singular
from interferometer.loop_solver import (
    SolveMethod,
    feedback_gain,
    iterate_established_loop,
    loop_residual,
    solve_established_loop,
)

from .helpers import max_error, random_circuit

LOOP_VALUE = (2 - 1j) / 5


class SolveEstablishedLoopTest(SimpleTestCase):
    def setUp(self):
        self.cfg = default_qtltt_params(1, identity(1))
        self.psi = [1.0]

    def test_unit_feedback(self):
        solution = solve_established_loop(self.cfg, identity(1), self.psi)
        self.assertEqual(solution.method, SolveMethod.DIRECT)
        self.assertIsNone(solution.iterations)
        self.assertLessEqual(max_error(solution.psi4, [LOOP_VALUE]), 1e-12)
        self.assertLessEqual(solution.residual, 1e-10)

    def test_psi3_is_derived_from_the_loop(self):
        solution = solve_established_loop(self.cfg, identity(1), self.psi)
        expected = two_input_pass(self.cfg, np.array(self.psi), solution.psi4).psi3
        self.assertLessEqual(max_error(solution.psi3, expected), 1e-15)

    def test_no_feedback_reduces_to_open_loop(self):
        solution = solve_established_loop(self.cfg, zero_operator(1), self.psi)
        np.testing.assert_array_equal(solution.psi4, open_loop_pass(self.cfg, self.psi).psi4)
        _, closed4 = closed_form_outputs(self.cfg, np.array(self.psi, dtype=complex))
        self.assertLessEqual(max_error(solution.psi4, closed4), 1e-15)

    def test_feedback_cancelling_identity_is_singular(self):
        with self.assertRaises(Singular):
            solve_established_loop(self.cfg, -(1 + 1j) * identity(1), self.psi)
        with self.assertRaises(Singular):
            solve_established_loop(default_qtltt_params(2, identity(2)), -(1 + 1j) * identity(2), [1.0, 0.5j])

    def test_condition_limit_must_be_positive(self):
        with self.assertRaises(ValueError):
            solve_established_loop(self.cfg, identity(1), self.psi, cond_limit=0)

    def test_mismatched_feedback(self):
        with self.assertRaises(DimensionMismatch):
            solve_established_loop(self.cfg, identity(2), self.psi)

    def test_unitary_feedback_never_singular(self):
        rng = np.random.default_rng(61)
        for _ in range(50):
            dim = int(rng.integers(1, 9))
            cfg = default_qtltt_params(dim, random_unitary(rng, dim))
            m = random_unitary(rng, dim)
            self.assertAlmostEqual(feedback_gain(cfg, m), 2 ** -0.5, delta=1e-10)
            psi = random_state(rng, dim)
            solution = solve_established_loop(cfg, m, psi)
            self.assertLessEqual(solution.residual, 1e-10 * max(1.0, norm(psi)))


class IterateEstablishedLoopTest(SimpleTestCase):
    def setUp(self):
        self.cfg = default_qtltt_params(1, identity(1))
        self.psi = [1.0]

    def test_unit_feedback_converges_to_direct_solution(self):
        iterated = iterate_established_loop(self.cfg, identity(1), self.psi, tol=1e-12, max_iter=10_000)
        direct = solve_established_loop(self.cfg, identity(1), self.psi)
        self.assertEqual(iterated.method, SolveMethod.ITERATIVE)
        self.assertGreater(iterated.iterations, 1)
        self.assertLessEqual(max_error(iterated.psi4, direct.psi4), 1e-10)
        self.assertLessEqual(max_error(iterated.psi4, [LOOP_VALUE]), 1e-10)

    def test_no_feedback_converges_in_one_iteration(self):
        solution = iterate_established_loop(self.cfg, zero_operator(1), self.psi, tol=1e-12, max_iter=10)
        self.assertEqual(solution.iterations, 1)
        np.testing.assert_array_equal(solution.psi4, open_loop_pass(self.cfg, self.psi).psi4)

    def test_amplifying_feedback_does_not_converge(self):
        with self.assertRaises(NoConvergence) as ctx:
            iterate_established_loop(self.cfg, 2 * identity(1), self.psi, tol=1e-12, max_iter=500)
        self.assertEqual(ctx.exception.iterations, 500)
        self.assertGreater(feedback_gain(self.cfg, 2 * identity(1)), 1.0)

    def test_divergence_to_overflow_is_reported(self):
        with self.assertRaises(NoConvergence):
            iterate_established_loop(self.cfg, 1e100 * identity(1), self.psi, tol=1e-12, max_iter=100)

    def test_arguments_validated(self):
        with self.assertRaises(ValueError):
            iterate_established_loop(self.cfg, identity(1), self.psi, tol=0, max_iter=10)
        with self.assertRaises(ValueError):
            iterate_established_loop(self.cfg, identity(1), self.psi, tol=1e-12, max_iter=0)


class LoopAgreementTest(SimpleTestCase):
    def test_direct_matches_iteration_on_contractive_loops(self):
        rng = np.random.default_rng(62)
        for _ in range(100):
            dim = int(rng.integers(1, 9))
            cfg = random_circuit(rng, dim)
            m = 0.9 * random_unitary(rng, dim)
            psi = random_state(rng, dim)
            self.assertLess(feedback_gain(cfg, m), 1.0)

            direct = solve_established_loop(cfg, m, psi)
            iterated = iterate_established_loop(cfg, m, psi, tol=1e-13, max_iter=100_000)
            self.assertLessEqual(max_error(direct.psi4, iterated.psi4), 1e-10)
            self.assertLessEqual(direct.residual, 1e-10 * max(1.0, norm(psi)))
            self.assertAlmostEqual(loop_residual(cfg, m, psi, direct.psi4), direct.residual, delta=1e-15)
