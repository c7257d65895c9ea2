#!/usr/bin/python3
"""
Sparse logistic regression unittest module
"""

import unittest

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit

from engine import DegenerateProblemError
from engine.logreg import (
    fit_l1_logistic,
    kkt_residual,
    lambda_max,
    lambda_path,
    logistic_objective,
    smooth_gradient
)
from models.estimates import LogRegProblem


def random_problem(rng, m, k, lam):
    design = rng.choice([-1.0, 1.0], size=(m, k))
    response = rng.choice([-1.0, 1.0], size=m)
    weights = rng.uniform(0.2, 2.0, size=m)
    offsets = rng.normal(0.0, 0.5, size=m)
    return LogRegProblem(design, response, lam, sample_weights=weights, offsets=offsets)


def split_variable_oracle(problem):
    """Minimize the objective over theta = u - v with u, v >= 0 by L-BFGS-B."""
    k = problem.k
    weights = problem.sample_weights / problem.sample_weights.sum()
    target = (problem.response > 0).astype(float)

    def objective(z):
        theta = z[:k] - z[k:]
        eta = problem.offsets + 2.0 * problem.design @ theta
        loss = weights @ np.logaddexp(0.0, -problem.response * eta)
        gradient = 2.0 * problem.design.T @ (weights * (expit(eta) - target))
        value = loss + problem.lam * z.sum()
        return value, np.concatenate([gradient + problem.lam, -gradient + problem.lam])

    result = minimize(objective, np.zeros(2 * k), jac=True, method='L-BFGS-B',
                      bounds=[(0, None)] * (2 * k),
                      options={'ftol': 1e-15, 'gtol': 1e-12, 'maxiter': 100000})
    return result.fun


class LogRegProblemTests(unittest.TestCase):
    """Problem validation."""

    def test_defaults(self):
        problem = LogRegProblem([[1.0], [-1.0]], [1, -1], 0.1)
        np.testing.assert_array_equal(problem.sample_weights, [1.0, 1.0])
        np.testing.assert_array_equal(problem.offsets, [0.0, 0.0])
        self.assertEqual((problem.m, problem.k), (2, 1))

    def test_invalid_inputs(self):
        with self.assertRaises(ValueError):
            LogRegProblem([[1.0], [-1.0]], [1, 0], 0.1)
        with self.assertRaises(ValueError):
            LogRegProblem([[1.0], [-1.0]], [1, -1], -0.1)
        with self.assertRaises(ValueError):
            LogRegProblem([[1.0], [-1.0]], [1, -1], 0.1, sample_weights=[1.0, -1.0])
        with self.assertRaises(ValueError):
            LogRegProblem([[1.0], [-1.0]], [1, -1, 1], 0.1)

    def test_zero_weights_are_degenerate(self):
        problem = LogRegProblem([[1.0], [-1.0]], [1, -1], 0.1, sample_weights=[0.0, 0.0])
        with self.assertRaises(DegenerateProblemError):
            fit_l1_logistic(problem)


class SolverTests(unittest.TestCase):
    """Coordinate descent against an independent oracle."""

    def setUp(self):
        self.rng = np.random.default_rng(20170101)

    def test_fixed_instance(self):
        design = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1], [1, 1], [-1, 1], [1, -1], [1, 1]], dtype=float)
        response = np.array([1, 1, -1, -1, 1, 1, -1, 1], dtype=float)
        problem = LogRegProblem(design, response, 0.1)
        solution = fit_l1_logistic(problem)
        self.assertTrue(solution.converged)
        self.assertAlmostEqual(solution.objective, split_variable_oracle(problem), delta=1e-4)

    def test_randomized_instances(self):
        for _ in range(50):
            m = int(self.rng.integers(10, 41))
            k = int(self.rng.integers(1, 11))
            problem = random_problem(self.rng, m, k, float(self.rng.uniform(0.02, 0.3)))
            solution = fit_l1_logistic(problem, tolerance=1e-7)
            self.assertTrue(solution.converged)
            self.assertLessEqual(solution.kkt_residual, 1e-6)
            self.assertAlmostEqual(solution.objective, split_variable_oracle(problem), delta=1e-4)

    def test_lambda_max_gives_zero_coefficients(self):
        problem = random_problem(self.rng, 30, 5, 0.0)
        top = lambda_max(problem)
        for lam in (top * (1 + 1e-9), 1.5 * top):
            solution = fit_l1_logistic(problem.with_lambda(lam))
            np.testing.assert_array_equal(solution.coefficients, np.zeros(5))
        below = fit_l1_logistic(problem.with_lambda(0.9 * top))
        self.assertTrue(np.any(below.coefficients != 0))

    def test_objective_is_reported_with_fixed_penalty(self):
        problem = LogRegProblem([[1.0], [-1.0], [1.0]], [1, -1, -1], 0.2, fixed_penalty=0.5)
        self.assertAlmostEqual(logistic_objective(problem, [0.0]), np.log(2.0) + 0.5)

    def test_offsets_shift_the_solution(self):
        problem = random_problem(self.rng, 40, 3, 0.05)
        shifted = LogRegProblem(problem.design, problem.response, problem.lam,
                                problem.sample_weights, problem.offsets + 1.0)
        self.assertFalse(np.allclose(fit_l1_logistic(problem).coefficients,
                                     fit_l1_logistic(shifted).coefficients))

    def test_duplicated_rows_at_half_weight(self):
        problem = random_problem(self.rng, 40, 4, 0.05)
        doubled = LogRegProblem(np.vstack([problem.design, problem.design]),
                                np.concatenate([problem.response, problem.response]),
                                problem.lam,
                                sample_weights=np.concatenate([problem.sample_weights] * 2) / 2.0,
                                offsets=np.concatenate([problem.offsets, problem.offsets]))
        single = fit_l1_logistic(problem, tolerance=1e-10)
        double = fit_l1_logistic(doubled, tolerance=1e-10)
        self.assertAlmostEqual(single.objective, double.objective, delta=1e-10)
        np.testing.assert_allclose(single.coefficients, double.coefficients, atol=1e-6)

    def test_fixed_column_moved_into_offsets(self):
        problem = random_problem(self.rng, 60, 4, 0.02)
        full = fit_l1_logistic(problem, tolerance=1e-10)
        j = int(np.argmax(np.abs(full.coefficients)))
        self.assertNotEqual(full.coefficients[j], 0.0)
        keep = [c for c in range(problem.k) if c != j]
        reduced = LogRegProblem(problem.design[:, keep], problem.response, problem.lam,
                                sample_weights=problem.sample_weights,
                                offsets=problem.offsets + 2.0 * full.coefficients[j] * problem.design[:, j],
                                fixed_penalty=problem.lam * abs(full.coefficients[j]))
        self.assertAlmostEqual(logistic_objective(reduced, full.coefficients[keep]),
                               logistic_objective(problem, full.coefficients), delta=1e-12)
        refit = fit_l1_logistic(reduced, tolerance=1e-10)
        self.assertAlmostEqual(refit.objective, full.objective, delta=1e-9)
        np.testing.assert_allclose(refit.coefficients, full.coefficients[keep], atol=1e-6)

    def test_gradient_matches_finite_differences(self):
        problem = random_problem(self.rng, 50, 5, 0.05)
        solution = fit_l1_logistic(problem)
        smooth = problem.with_lambda(0.0)
        step = 1e-6
        numeric = np.zeros(problem.k)
        for j in range(problem.k):
            shift = np.zeros(problem.k)
            shift[j] = step
            numeric[j] = (logistic_objective(smooth, solution.coefficients + shift)
                          - logistic_objective(smooth, solution.coefficients - shift)) / (2.0 * step)
        np.testing.assert_allclose(smooth_gradient(problem, solution.coefficients), numeric,
                                   rtol=1e-5, atol=1e-8)

    def test_warm_start_shape(self):
        problem = random_problem(self.rng, 20, 3, 0.1)
        with self.assertRaises(ValueError):
            fit_l1_logistic(problem, warm_start=np.zeros(2))

    def test_non_convergence_is_reported(self):
        design = self.rng.choice([-1.0, 1.0], size=(60, 4))
        design[:, 1] = design[:, 0] * np.where(self.rng.random(60) < 0.9, 1.0, -1.0)
        response = np.where(self.rng.random(60) < expit(design[:, 0] + design[:, 1]), 1.0, -1.0)
        problem = LogRegProblem(design, response, 0.001)
        with self.assertLogs('engine.logreg', level='WARNING'):
            solution = fit_l1_logistic(problem, max_iter=1)
        self.assertFalse(solution.converged)
        self.assertEqual(solution.iterations, 1)


class PathTests(unittest.TestCase):
    """Warm-started penalty paths."""

    def test_path_matches_cold_starts(self):
        rng = np.random.default_rng(4)
        problem = random_problem(rng, 40, 6, 0.0)
        grid = [0.3, 0.15, 0.08, 0.04, 0.02]
        path = lambda_path(problem, grid, tolerance=1e-10)
        for lam, solution in zip(grid, path):
            cold = fit_l1_logistic(problem.with_lambda(lam), tolerance=1e-10)
            self.assertAlmostEqual(solution.objective, cold.objective, delta=1e-10)
            np.testing.assert_allclose(solution.coefficients, cold.coefficients, atol=1e-8)

    def test_path_requires_descending_grid(self):
        problem = random_problem(np.random.default_rng(1), 10, 2, 0.0)
        with self.assertRaises(ValueError):
            lambda_path(problem, [0.1, 0.2])


class KktTests(unittest.TestCase):
    """Optimality residual."""

    def test_residual(self):
        gradient = np.array([-0.1, 0.3, 0.05])
        coefficients = np.array([0.5, 0.0, 0.0])
        # active: |-0.1 + 0.1| = 0; inactive: 0.3 - 0.1 and 0
        self.assertAlmostEqual(kkt_residual(gradient, coefficients, 0.1), 0.2)
        self.assertEqual(kkt_residual(np.zeros(0), np.zeros(0), 0.1), 0.0)

    def test_gradient_is_zero_at_unpenalized_optimum(self):
        problem = LogRegProblem([[1.0], [1.0], [-1.0], [-1.0]], [1, -1, 1, -1], 0.0)
        np.testing.assert_allclose(smooth_gradient(problem, [0.0]), [0.0], atol=1e-15)


if __name__ == '__main__':
    unittest.main()
