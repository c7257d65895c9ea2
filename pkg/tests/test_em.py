#!/usr/bin/python3
"""
EM edge refinement unittest module
"""

import math
import unittest

import numpy as np

from engine import CandidateLimitError, MissingGammaError
from engine.configurations import config_table
from engine.distributions import apply_misclassification, ising_logpmf, sample_ising
from engine.em import (
    build_mstep_problem,
    em_mstep,
    em_update,
    estep_weights,
    penalized_node_likelihood
)
from engine.logreg import fit_l1_logistic, logistic_objective
from engine.rwl import rwl_fit
from models.em_state import EMState
from models.estimates import LogRegProblem, RwlFit
from models.graph import EdgeSetEstimate, GraphSpec, update_partition
from models.spins import MisclassLaw, SpinMatrix


def true_state(graph, candidates, lam=0.1):
    theta = graph.weight_matrix()
    partition = update_partition(EdgeSetEstimate.from_graph(graph), candidates)
    return EMState(0, theta, theta, partition, lam)


class EStepTests(unittest.TestCase):
    """Posterior weights of candidate configurations."""

    def setUp(self):
        self.graph = GraphSpec(5, ((0, 1, 0.4), (1, 2, 0.6), (0, 2, -0.3), (2, 3, 0.5), (3, 4, 0.7)))
        self.gammas = [0.3, 0.5, 0.0, 0.0, 0.0]
        self.law = MisclassLaw.per_node(self.gammas)
        self.data = SpinMatrix(config_table(5))
        self.state = true_state(self.graph, [0, 1])

    def bayes_posterior(self, observed, configs):
        """P(X_C = z | X~ = observed) by enumerating the latent states."""
        log_joint = []
        for z in configs:
            latent = np.array(observed)
            latent[[0, 1]] = z
            channel = 1.0
            for s in (0, 1):
                channel *= self.gammas[s] if z[s] != observed[s] else 1.0 - self.gammas[s]
            log_joint.append(ising_logpmf(self.graph, latent) + math.log(channel))
        log_joint = np.array(log_joint)
        weights = np.exp(log_joint - log_joint.max())
        return weights / weights.sum()

    def test_matches_bayes_posterior(self):
        component = self.state.partition.component_of(0)
        table = estep_weights(self.state, self.data, self.law, component)
        self.assertEqual(table.candidates, (0, 1))
        for row, observed in enumerate(self.data.values):
            np.testing.assert_allclose(table.weights[row], self.bayes_posterior(observed, table.configs),
                                       atol=1e-10)

    def test_rows_sum_to_one(self):
        component = self.state.partition.component_of(0)
        table = estep_weights(self.state, self.data, self.law, component)
        np.testing.assert_allclose(table.weights.sum(axis=1), np.ones(self.data.n), atol=1e-12)

    def test_isolated_candidate_gets_prior_weights(self):
        graph = GraphSpec(3, ((1, 2, 0.5),))
        state = true_state(graph, [0])
        law = MisclassLaw.per_node([0.6, 0.0, 0.0])
        data = SpinMatrix([[-1, 1, 1], [-1, -1, 1]])
        table = estep_weights(state, data, law, frozenset({0}))
        np.testing.assert_allclose(table.weights, [[0.4, 0.6], [0.4, 0.6]])

    def test_candidate_limit(self):
        with self.assertRaises(CandidateLimitError):
            estep_weights(self.state, self.data, self.law, self.state.partition.component_of(0), c_max=1)

    def test_missing_gamma(self):
        law = MisclassLaw.per_node([0.3])
        with self.assertRaises(MissingGammaError):
            estep_weights(self.state, self.data, law, self.state.partition.component_of(0))


class MStepTests(unittest.TestCase):
    """Expanded weighted regressions."""

    def setUp(self):
        self.graph = GraphSpec(6, ((0, 1, 0.5), (1, 2, 0.5), (3, 4, 0.5), (4, 5, 0.5), (2, 3, 0.4)))
        clean = sample_ising(self.graph, 200, seed=9)
        self.law = MisclassLaw.per_node([0.3, 0, 0, 0, 0, 0])
        self.data = apply_misclassification(clean, self.law, seed=10)
        self.state = true_state(self.graph, [0], lam=0.05)
        self.component = self.state.partition.component_of(0)
        self.table = estep_weights(self.state, self.data, self.law, self.component)

    def test_update_set(self):
        self.assertEqual(self.component, frozenset({0, 1, 2}))

    def test_problem_layout(self):
        problem = build_mstep_problem(self.state, self.data, self.table, 1)
        self.assertEqual(problem.k, 2)
        self.assertAlmostEqual(problem.sample_weights.sum(), 1.0)
        self.assertLessEqual(problem.m, 2 * self.data.n)
        # node 1 has no coefficient outside its component
        np.testing.assert_array_equal(problem.offsets, np.zeros(problem.m))
        self.assertEqual(problem.fixed_penalty, 0.0)

    def test_outside_coefficients_are_offsets(self):
        problem = build_mstep_problem(self.state, self.data, self.table, 2)
        values = self.data.as_float()
        expected = np.repeat(2.0 * 0.4 * values[:, 3], 2)[self.table.weights.reshape(-1) > 0]
        np.testing.assert_allclose(problem.offsets, expected)
        self.assertAlmostEqual(problem.fixed_penalty, 0.05 * 0.4)

    def test_node_outside_component(self):
        with self.assertRaises(ValueError):
            build_mstep_problem(self.state, self.data, self.table, 4)

    def test_mstep_returns_component_coefficients(self):
        coefficients = em_mstep(self.state, self.data, self.table, 0)
        self.assertEqual(set(coefficients), {1, 2})

    def test_mstep_does_not_raise_its_objective(self):
        for r in sorted(self.component):
            others = [s for s in self.table.component if s != r]
            problem = build_mstep_problem(self.state, self.data, self.table, r)
            before = logistic_objective(problem, self.state.theta[r, others])
            coefficients = em_mstep(self.state, self.data, self.table, r)
            after = logistic_objective(problem, [coefficients[s] for s in others])
            self.assertLessEqual(after, before + 1e-12, msg=f"node {r}")

    def test_zero_law_reduces_to_observed_regression(self):
        law = MisclassLaw.per_node(np.zeros(6))
        table = estep_weights(self.state, self.data, law, self.component)
        values = self.data.as_float()
        for r in sorted(self.component):
            others = [s for s in table.component if s != r]
            outside = [s for s in range(6) if s not in self.component]
            direct = LogRegProblem(values[:, others], values[:, r], 0.05,
                                   sample_weights=np.full(self.data.n, 1.0 / self.data.n),
                                   offsets=2.0 * values[:, outside] @ self.state.fixed_theta[r, outside])
            problem = build_mstep_problem(self.state, self.data, table, r)
            np.testing.assert_array_equal(problem.design, direct.design)
            np.testing.assert_array_equal(problem.response, direct.response)
            np.testing.assert_allclose(problem.sample_weights, direct.sample_weights)
            np.testing.assert_allclose(problem.offsets, direct.offsets)
            expected = fit_l1_logistic(direct, tolerance=1e-10)
            coefficients = em_mstep(self.state, self.data, table, r, tolerance=1e-10)
            np.testing.assert_allclose([coefficients[s] for s in others], expected.coefficients, atol=1e-6)


class LikelihoodAuditTests(unittest.TestCase):
    """Penalized node likelihoods."""

    def test_observed_form(self):
        graph = GraphSpec(3, ((0, 1, 0.5), (1, 2, -0.3)))
        data = sample_ising(graph, 50, seed=2)
        state = true_state(graph, [0], lam=0.1)
        values = data.as_float()
        eta = 2.0 * values @ state.theta[1]
        expected = np.mean(-np.logaddexp(0.0, -values[:, 1] * eta)) - 0.1 * 0.8
        self.assertAlmostEqual(penalized_node_likelihood(state, data, 1), expected)

    def test_marginal_form_with_certain_law(self):
        graph = GraphSpec(3, ((0, 1, 0.5), (1, 2, -0.3)))
        data = sample_ising(graph, 50, seed=2)
        state = true_state(graph, [0], lam=0.1)
        certain = MisclassLaw.per_node([0.0, 0.0, 0.0])
        self.assertAlmostEqual(penalized_node_likelihood(state, data, 1, certain),
                               penalized_node_likelihood(state, data, 1), places=12)


class EmUpdateTests(unittest.TestCase):
    """Full refinement runs."""

    @classmethod
    def setUpClass(cls):
        cls.truth = GraphSpec(6, tuple((s, s + 1, 0.8) for s in range(5)))
        cls.clean = sample_ising(cls.truth, 300, seed=31)
        rng = np.random.default_rng(32)
        flipped = rng.random(cls.clean.n) < 0.4
        gammas = np.zeros((cls.clean.n, 6))
        gammas[flipped, 2] = 0.9999
        cls.law = MisclassLaw.per_cell(gammas)
        values = cls.clean.values.copy()
        values[flipped, 2] *= -1
        cls.observed = SpinMatrix(values)
        cls.initial = rwl_fit(cls.observed, 0.05)

    def test_no_candidates_leaves_edges_unchanged(self):
        state, edges = em_update(self.initial, self.observed, self.law, [], 0.05)
        self.assertEqual(edges, self.initial.edge_set)
        self.assertEqual(state.edge_history, ())
        self.assertEqual(state.iteration, 0)

    def test_zero_law_keeps_the_rwl_fit(self):
        initial = rwl_fit(self.observed, 0.05, tolerance=1e-10)
        law = MisclassLaw.per_node(np.zeros(6))
        state, edges = em_update(initial, self.observed, law, [2], 0.05, tolerance=1e-10)
        self.assertEqual(edges, initial.edge_set)
        np.testing.assert_allclose(state.theta, initial.coefficient_matrix(), atol=1e-5)

    def test_history_has_one_edge_set_per_update(self):
        state, edges = em_update(self.initial, self.observed, self.law, [2], 0.05, iterations=3)
        self.assertEqual(state.iteration, 3)
        self.assertEqual(len(state.edge_history), 3)
        self.assertEqual(state.edge_history[-1], edges)

    def test_edges_outside_refit_components_are_kept(self):
        state, edges = em_update(self.initial, self.observed, self.law, [2], 0.05)
        refit = [c for c in state.partition.components if c & state.partition.candidates]
        for s, t in self.initial.edge_set.edges:
            if not any(s in c and t in c for c in refit):
                self.assertIn((s, t), edges.edges)

    def test_coefficients_outside_components_stay_fixed(self):
        state, _ = em_update(self.initial, self.observed, self.law, [2], 0.05)
        inside = set(state.theta_u)
        initial = self.initial.coefficient_matrix()
        for r in range(6):
            for s in range(6):
                if r != s and (r, s) not in inside:
                    self.assertEqual(state.theta[r, s], initial[r, s])

    def test_certain_law_never_decreases_likelihood(self):
        for seed in range(20):
            rng = np.random.default_rng(100 + seed)
            weights = rng.uniform(0.4, 1.0, size=5) * rng.choice([-1.0, 1.0], size=5)
            truth = GraphSpec(6, tuple((s, s + 1, float(weights[s])) for s in range(5)) + ((0, 5, 0.5),))
            clean = sample_ising(truth, 150, seed=200 + seed)
            candidate = seed % 6
            flipped = rng.random(clean.n) < 0.3
            gammas = np.zeros((clean.n, 6))
            gammas[flipped, candidate] = 1.0
            values = clean.values.copy()
            values[flipped, candidate] *= -1
            observed = SpinMatrix(values)
            initial = rwl_fit(observed, 0.05)
            state, _ = em_update(initial, observed, MisclassLaw.per_cell(gammas), [candidate], 0.05,
                                 audit_likelihood=True)
            self.assertEqual(len(state.audit), 1)
            self.assertTrue(state.audit[0])
            for r, (before, after) in state.audit[0].items():
                self.assertGreaterEqual(after, before - 1e-10, msg=f"seed {seed}, node {r}")

    def test_correcting_flips_recovers_the_chain(self):
        _, edges = em_update(self.initial, self.observed, self.law, [2], 0.05)
        self.assertIn((1, 2), edges.edges)
        self.assertIn((2, 3), edges.edges)

    def test_ring_is_recovered_in_most_replications(self):
        truth = GraphSpec(8, tuple((s, (s + 1) % 8, 0.7) for s in range(8)))
        law = MisclassLaw.per_node([0.05] + [0.0] * 7)
        exact = 0
        for seed in range(10):
            clean = sample_ising(truth, 2000, seed=400 + seed)
            observed = apply_misclassification(clean, law, seed=500 + seed)
            _, edges = em_update(rwl_fit(observed, 0.1), observed, law, [0], 0.1)
            exact += edges.edges == truth.edge_pairs
        self.assertGreaterEqual(exact, 7)

    def test_candidate_limit(self):
        law = MisclassLaw.per_node(np.full(6, 0.2))
        with self.assertRaises(CandidateLimitError):
            em_update(self.initial, self.observed, law, [2], 0.05, c_max=0)

    def test_node_count_mismatch(self):
        other = RwlFit.from_coefficients(np.zeros((4, 4)), 0.05)
        with self.assertRaises(ValueError):
            em_update(other, self.observed, self.law, [2], 0.05)

    def test_state_serialization(self):
        state, _ = em_update(self.initial, self.observed, self.law, [2], 0.05, audit_likelihood=True)
        document = state.to_dict()
        self.assertEqual(document['iteration'], 1)
        self.assertEqual(len(document['edge_history']), 1)
        self.assertEqual(document['partition']['candidates'], [2])
        self.assertTrue(all(r != s for r, s, _ in document['theta_u']))


if __name__ == '__main__':
    unittest.main()
