#!/usr/bin/python3
"""
Command line interface of the isingmis engine.

Usage:
    python cli.py sample --graph graph.json --n 200 --seed 1 --out clean.csv
    python cli.py perturb --data clean.csv --law law.json --seed 2 --out observed.csv
    python cli.py fit --data observed.csv --lambda 0.1 --out fit.json
    python cli.py em --data observed.csv --init-fit fit.json --law law.json \\
        --candidates auto:0.1 --lambda 0.1 --iters 1 --out em.json
    python cli.py diagnose --graph graph.json --law law.json --n 200 --out report.json
    python cli.py simulate --config scenarios/block_ring.json --out-dir results/block_ring
"""
import functools
import json
import logging

import click
import numpy as np

from config.settings import LOG_LEVEL
from engine import IsingMisError
from engine.diagnostics import check_assumptions
from engine.distributions import apply_misclassification, sample_ising
from engine.em import em_update
from engine.outputs import FORMATS, emit_outputs
from engine.rwl import rwl_fit, rwl_path, rwl_weighted_fit, rwl_weighted_path
from engine.simulation import load_scenario, run_scenario
from utils.io import read_fit, read_graph, read_json, read_law, read_spins, write_json, write_spins
from validators.validators import parse_candidates, parse_lambda_grid

logger = logging.getLogger(__name__)


def translate_errors(command):
    """Report validation and engine errors as click errors (exit status 1)."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (ValueError, IsingMisError, OSError) as e:
            raise click.ClickException(str(e))
    return wrapper


def resolve_candidates(text: str, p: int, law, statistic: str):
    rule = parse_candidates(text, p)
    if isinstance(rule, tuple):
        return law.candidates_above(rule[1], statistic)
    return rule


@click.group()
@click.option('--log-level', default=LOG_LEVEL, show_default=True, help='Logging level.')
def cli(log_level):
    """Edge selection for Ising models observed with misclassification."""
    logging.basicConfig(level=log_level.upper())


@cli.command()
@click.option('--graph', 'graph_path', required=True, type=click.Path(exists=True), help='Graph JSON.')
@click.option('--n', required=True, type=int, help='Number of observations.')
@click.option('--seed', default=0, show_default=True, type=int)
@click.option('--method', type=click.Choice(['exact', 'gibbs']), default='exact', show_default=True)
@click.option('--burn-in', type=int, default=None, help='Gibbs burn-in sweeps.')
@click.option('--thin', type=int, default=None, help='Gibbs sweeps between draws.')
@click.option('--out', required=True, type=click.Path(), help='Output spin CSV.')
@translate_errors
def sample(graph_path, n, seed, method, burn_in, thin, out):
    """Draw observations from an Ising model."""
    data = sample_ising(read_graph(graph_path), n, method, seed, burn_in, thin)
    write_spins(data, out)
    click.echo(f"Wrote {data.n} observations of {data.p} nodes to {out}")


@cli.command()
@click.option('--data', 'data_path', required=True, type=click.Path(exists=True), help='Clean spin CSV.')
@click.option('--law', 'law_path', required=True, type=click.Path(exists=True), help='Misclassification law JSON.')
@click.option('--seed', default=0, show_default=True, type=int)
@click.option('--out', required=True, type=click.Path(), help='Output spin CSV.')
@translate_errors
def perturb(data_path, law_path, seed, out):
    """Misclassify observations with independent per-cell flips."""
    data = read_spins(data_path)
    observed = apply_misclassification(data, read_law(law_path), seed)
    write_spins(observed, out)
    flipped = int((observed.values != data.values).sum())
    click.echo(f"Flipped {flipped} of {data.n * data.p} entries, wrote {out}")


@cli.command()
@click.option('--data', 'data_path', required=True, type=click.Path(exists=True), help='Spin CSV.')
@click.option('--lambda', 'lam', type=float, default=None, help='Penalty.')
@click.option('--lambda-grid', default=None, help='Comma-separated penalties.')
@click.option('--aggregation', type=click.Choice(['and', 'or']), default='and', show_default=True)
@click.option('--weights', 'weights_path', type=click.Path(exists=True), default=None,
              help='JSON array of row weights (n or n x p).')
@click.option('--law', 'law_path', type=click.Path(exists=True), default=None,
              help='Misclassification law; fits RWL Weighted.')
@click.option('--candidates', default='', help='Candidates of RWL Weighted: list or auto:q.')
@click.option('--candidate-stat', type=click.Choice(['mean', 'max']), default='mean', show_default=True)
@click.option('--out', required=True, type=click.Path(), help='Output fit JSON.')
@translate_errors
def fit(data_path, lam, lambda_grid, aggregation, weights_path, law_path, candidates, candidate_stat, out):
    """Fit RWL (or RWL Weighted) at one penalty or along a grid."""
    if (lam is None) == (lambda_grid is None):
        raise click.UsageError("Give exactly one of --lambda and --lambda-grid")
    data = read_spins(data_path)
    weights = np.asarray(read_json(weights_path), dtype=float) if weights_path else None
    law = read_law(law_path) if law_path else None
    if law is not None and weights is not None:
        raise click.UsageError("--weights cannot be combined with --law")
    chosen = resolve_candidates(candidates, data.p, law, candidate_stat) if law is not None else None

    if lambda_grid is not None:
        grid = parse_lambda_grid(lambda_grid)
        if law is None:
            fits = rwl_path(data, grid, aggregation, weights)
        else:
            fits = rwl_weighted_path(data, grid, law, chosen, aggregation)
        write_json({'fits': [result.to_dict() for result in fits]}, out)
        click.echo(f"Wrote {len(fits)} fits to {out}")
        return
    if law is None:
        result = rwl_fit(data, lam, aggregation, weights)
    else:
        result = rwl_weighted_fit(data, lam, law, chosen, aggregation)
    write_json(result.to_dict(), out)
    click.echo(f"Selected {len(result.edge_set.edges)} edges at lambda={lam:g}, wrote {out}")


@cli.command()
@click.option('--data', 'data_path', required=True, type=click.Path(exists=True), help='Spin CSV.')
@click.option('--init-fit', 'fit_path', required=True, type=click.Path(exists=True), help='Initial fit JSON.')
@click.option('--law', 'law_path', required=True, type=click.Path(exists=True), help='Misclassification law JSON.')
@click.option('--candidates', required=True, help='Comma-separated nodes or auto:q.')
@click.option('--candidate-stat', type=click.Choice(['mean', 'max']), default='mean', show_default=True,
              help='Per-node summary of per-cell laws for auto:q.')
@click.option('--lambda', 'lam', type=float, default=None, help='M-step penalty (default: initial penalty).')
@click.option('--iters', type=int, default=1, show_default=True)
@click.option('--c-max', type=int, default=None, help='Candidate limit per component.')
@click.option('--audit-likelihood', is_flag=True, help='Record penalized likelihoods per node.')
@click.option('--out', required=True, type=click.Path(), help='Output JSON.')
@translate_errors
def em(data_path, fit_path, law_path, candidates, candidate_stat, lam, iters, c_max, audit_likelihood, out):
    """Refine an RWL edge set with EM updates."""
    data = read_spins(data_path)
    initial = read_fit(fit_path)
    law = read_law(law_path)
    chosen = resolve_candidates(candidates, data.p, law, candidate_stat)
    state, edges = em_update(initial, data, law, chosen, initial.lam if lam is None else lam,
                             iterations=iters, c_max=c_max, audit_likelihood=audit_likelihood)
    write_json({
        'initial_edges': initial.edge_set.to_dict()['edges'],
        'edges': edges.to_dict()['edges'],
        'state': state.to_dict(),
    }, out)
    click.echo(f"{len(initial.edge_set.edges)} -> {len(edges.edges)} edges after {iters} update(s), wrote {out}")


@cli.command()
@click.option('--graph', 'graph_path', required=True, type=click.Path(exists=True), help='True graph JSON.')
@click.option('--law', 'law_path', required=True, type=click.Path(exists=True), help='Misclassification law JSON.')
@click.option('--n', required=True, type=int, help='Sample size.')
@click.option('--d', type=int, default=None, help='Maximum degree (default: the graph\'s).')
@click.option('--lambda', 'lam', type=float, default=None, help='Penalty for lambda_tilde.')
@click.option('--out', required=True, type=click.Path(), help='Output report JSON.')
@translate_errors
def diagnose(graph_path, law_path, n, d, lam, out):
    """Evaluate the misclassified score, information and assumptions."""
    report = check_assumptions(read_graph(graph_path), read_law(law_path), n, d)
    write_json(report.to_dict(lam), out)
    status = 'holds' if report.a3_satisfied else 'fails'
    click.echo(f"S_max={report.s_max:.4g}, misclassification condition {status}, wrote {out}")


@cli.command()
@click.option('--config', 'config_path', required=True, type=click.Path(exists=True), help='Scenario JSON.')
@click.option('--out-dir', required=True, type=click.Path(file_okay=False), help='Output directory.')
@click.option('--threads', type=int, default=None, help='Worker processes (default ISINGMIS_THREADS).')
@click.option('--format', 'fmt', type=click.Choice(list(FORMATS)), default='csv', show_default=True)
@click.option('--record', is_flag=True, help='Also record the run in the database.')
@translate_errors
def simulate(config_path, out_dir, threads, fmt, record):
    """Run a simulation scenario and write its tables."""
    config = load_scenario(read_json(config_path))
    result = run_scenario(config, threads)
    emit_outputs(result, fmt, out_dir)
    if record:
        from config.database import SessionLocal
        from models.simulation_run import SimulationRun

        session = SessionLocal()
        try:
            run = SimulationRun.record(session, config.name, config, result)
            click.echo(f"Recorded run {run.id}")
        finally:
            session.close()
    click.echo(json.dumps(result.summary(), indent=2))


if __name__ == '__main__':
    cli()
