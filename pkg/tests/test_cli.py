#!/usr/bin/python3
"""
Command line unittest module
"""

import json
import os
import unittest

from click.testing import CliRunner

from cli import cli

GRAPH = {'p': 4, 'edges': [[0, 1, 0.9], [1, 2, 0.9], [2, 3, 0.9]]}
LAW = {'mode': 'perNode', 'gammas': [0.0, 0.25, 0.0, 0.0]}
SCENARIO = {
    'name': 'cli',
    'network': {'graph': GRAPH, 'candidates': [1]},
    'n': 40,
    'replications': 2,
    'seed': 5,
    'law': {'scheme': 'perNode', 'gammas': [0.0, 0.25, 0.0, 0.0]},
    'lambda_grid': [0.3, 0.1],
    'estimators': ['RWL', 'RWL_EM1'],
}


def write(path, document):
    with open(path, 'w') as f:
        json.dump(document, f)


class PipelineTests(unittest.TestCase):
    """sample -> perturb -> fit -> em -> diagnose -> simulate."""

    def setUp(self):
        self.runner = CliRunner()

    def invoke(self, *args):
        result = self.runner.invoke(cli, list(args))
        self.assertEqual(result.exit_code, 0, msg=result.output)
        return result

    def test_full_pipeline(self):
        with self.runner.isolated_filesystem():
            write('graph.json', GRAPH)
            write('law.json', LAW)
            write('scenario.json', SCENARIO)

            self.invoke('sample', '--graph', 'graph.json', '--n', '200', '--seed', '1', '--out', 'clean.csv')
            with open('clean.csv') as f:
                lines = f.read().splitlines()
            self.assertEqual(lines[0], 'X0,X1,X2,X3')
            self.assertEqual(len(lines), 201)

            result = self.invoke('perturb', '--data', 'clean.csv', '--law', 'law.json',
                                 '--seed', '2', '--out', 'observed.csv')
            self.assertIn('Flipped', result.output)

            self.invoke('fit', '--data', 'observed.csv', '--lambda', '0.1', '--out', 'fit.json')
            with open('fit.json') as f:
                fit = json.load(f)
            self.assertEqual(fit['lambda'], 0.1)
            self.assertEqual(len(fit['neighborhoods']), 4)

            self.invoke('fit', '--data', 'observed.csv', '--lambda-grid', '0.1,0.3',
                        '--law', 'law.json', '--candidates', 'auto:0.1', '--out', 'path.json')
            with open('path.json') as f:
                self.assertEqual([entry['lambda'] for entry in json.load(f)['fits']], [0.3, 0.1])

            self.invoke('em', '--data', 'observed.csv', '--init-fit', 'fit.json', '--law', 'law.json',
                        '--candidates', 'auto:0.1', '--iters', '2', '--out', 'em.json')
            with open('em.json') as f:
                refined = json.load(f)
            self.assertEqual(refined['state']['iteration'], 2)
            self.assertEqual(refined['state']['partition']['candidates'], [1])
            self.assertEqual(len(refined['state']['edge_history']), 2)

            result = self.invoke('diagnose', '--graph', 'graph.json', '--law', 'law.json',
                                 '--n', '200', '--lambda', '0.2', '--out', 'report.json')
            self.assertIn('S_max=', result.output)
            with open('report.json') as f:
                report = json.load(f)
            self.assertEqual(report['p'], 4)
            self.assertIn('lambda_tilde', report)

            result = self.invoke('simulate', '--config', 'scenario.json', '--out-dir', 'results',
                                 '--threads', '1')
            self.assertIn('metrics.csv', os.listdir('results'))
            self.assertIn('"completed": 2', result.output)


class CommandErrorTests(unittest.TestCase):
    """Exit statuses of invalid invocations."""

    def setUp(self):
        self.runner = CliRunner()

    def test_invalid_spins(self):
        with self.runner.isolated_filesystem():
            with open('bad.csv', 'w') as f:
                f.write("A,B\n1,0\n-1,1\n")
            result = self.runner.invoke(cli, ['fit', '--data', 'bad.csv', '--lambda', '0.1', '--out', 'fit.json'])
            self.assertEqual(result.exit_code, 1)
            self.assertIn('Error', result.output)
            self.assertFalse(os.path.exists('fit.json'))

    def test_fit_needs_one_penalty(self):
        with self.runner.isolated_filesystem():
            with open('spins.csv', 'w') as f:
                f.write("A,B\n1,-1\n-1,1\n")
            result = self.runner.invoke(cli, ['fit', '--data', 'spins.csv', '--out', 'fit.json'])
            self.assertEqual(result.exit_code, 2)
            result = self.runner.invoke(cli, ['fit', '--data', 'spins.csv', '--lambda', '0.1',
                                              '--lambda-grid', '0.2,0.1', '--out', 'fit.json'])
            self.assertEqual(result.exit_code, 2)

    def test_em_candidate_limit(self):
        with self.runner.isolated_filesystem():
            write('graph.json', GRAPH)
            write('law.json', LAW)
            self.runner.invoke(cli, ['sample', '--graph', 'graph.json', '--n', '100', '--out', 'clean.csv'])
            self.runner.invoke(cli, ['fit', '--data', 'clean.csv', '--lambda', '0.1', '--out', 'fit.json'])
            result = self.runner.invoke(cli, ['em', '--data', 'clean.csv', '--init-fit', 'fit.json',
                                              '--law', 'law.json', '--candidates', '1', '--c-max', '0',
                                              '--out', 'em.json'])
            self.assertEqual(result.exit_code, 1)
            self.assertIn('candidates', result.output)

    def test_unknown_format(self):
        result = self.runner.invoke(cli, ['simulate', '--config', 'missing.json', '--out-dir', 'x',
                                          '--format', 'xlsx'])
        self.assertEqual(result.exit_code, 2)


if __name__ == '__main__':
    unittest.main()
