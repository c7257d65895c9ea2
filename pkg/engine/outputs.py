#!/usr/bin/python3
"""
Flat-file output of scenario results.

Every table is written as <name>.csv or <name>.json in the destination
directory, plus run.json with the scenario and its summary:

    metrics          estimator, lambda, replication, node_class, tp, fp, tn, fn,
                     tpr, fpr, tnr, fnr, error_rate  (one row per record)
    roc              estimator, node_class, lambda, mean_fpr, mean_tpr
    summary          estimator, node_class, auc, matched_error_rate,
                     optimal_lambda, optimal_error_rate
    node_errors      estimator, node, label, error_rate  (matched penalty)
    selection_<est>  p x p edge selection frequencies at the matched penalty,
                     indexed and labeled by node label
    failures         replication, seed, error

JSON tables use pandas' "split" layout ({"index", "columns", "data"}).

Functions:
    result_tables: Result as named DataFrames
    emit_outputs: Write the tables
    load_outputs: Read a written directory back
"""
import json
import logging
import os
from typing import Dict

import pandas as pd

from models.scenario import ScenarioResult

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json')
FLOAT_FORMAT = '%.10g'


def result_tables(result: ScenarioResult) -> Dict[str, pd.DataFrame]:
    """Named tables of a scenario result, in writing order."""
    labels = list(result.config.graph.labels or [str(node) for node in range(result.config.graph.p)])
    metric_columns = ['estimator', 'lambda', 'replication', 'node_class',
                      'tp', 'fp', 'tn', 'fn', 'tpr', 'fpr', 'tnr', 'fnr', 'error_rate']
    tables = {
        'metrics': pd.DataFrame([record.to_row() for record in result.records], columns=metric_columns),
        'roc': pd.DataFrame(
            [(estimator, node_class, lam, fpr, tpr)
             for (estimator, node_class), curve in result.roc.items()
             for lam, fpr, tpr in curve],
            columns=['estimator', 'node_class', 'lambda', 'mean_fpr', 'mean_tpr'],
        ),
        'summary': pd.DataFrame(
            [(spec.name, node_class, result.auc[(spec.name, node_class)],
              result.matched_error[(spec.name, node_class)],
              *result.optimal[(spec.name, node_class)])
             for spec in result.config.estimators for node_class in result.node_classes],
            columns=['estimator', 'node_class', 'auc', 'matched_error_rate', 'optimal_lambda', 'optimal_error_rate'],
        ),
        'node_errors': pd.DataFrame(
            [(spec.name, node, labels[node], float(rate))
             for spec in result.config.estimators
             for node, rate in enumerate(result.node_error_rates[spec.name])],
            columns=['estimator', 'node', 'label', 'error_rate'],
        ),
    }
    for spec in result.config.estimators:
        tables[f"selection_{spec.name}"] = pd.DataFrame(
            result.selection_frequency[spec.name], index=labels, columns=labels)
    tables['failures'] = pd.DataFrame(list(result.failures), columns=['replication', 'seed', 'error'])
    return tables


def _write_table(frame: pd.DataFrame, path: str, fmt: str, keep_index: bool) -> None:
    if fmt == 'csv':
        frame.to_csv(path, index=keep_index, float_format=FLOAT_FORMAT, lineterminator='\n')
    else:
        with open(path, 'w') as f:
            json.dump(frame.to_dict(orient='split'), f, indent=1)
            f.write('\n')


def emit_outputs(result: ScenarioResult, fmt: str = 'csv', destination: str = '.') -> Dict[str, str]:
    """
    Write the result tables and run.json.

    Args:
        result: Scenario result
        fmt: 'csv' or 'json'
        destination: Output directory, created when missing

    Returns:
        Dict[str, str]: Table name -> written path

    Raises:
        ValueError: For an unknown format, an empty grid or no records;
            nothing is written in that case
        OSError: When a file cannot be written
    """
    if fmt not in FORMATS:
        raise ValueError(f"Unknown output format: {fmt!r}")
    if not result.config.lambda_grid:
        raise ValueError("Lambda grid cannot be empty")
    if not result.records:
        raise ValueError("No successful replication to write")

    os.makedirs(destination, exist_ok=True)
    written = {}
    for name, frame in result_tables(result).items():
        path = os.path.join(destination, f"{name}.{fmt}")
        _write_table(frame, path, fmt, keep_index=name.startswith('selection_'))
        written[name] = path

    run_path = os.path.join(destination, 'run.json')
    with open(run_path, 'w') as f:
        json.dump({'config': result.config.to_dict(), 'summary': result.summary()}, f, indent=2)
        f.write('\n')
    written['run'] = run_path
    logger.info(f"Wrote {len(written)} output files to {destination}")
    return written


def load_outputs(directory: str) -> Dict[str, object]:
    """
    Read a directory written by emit_outputs.

    Returns:
        Dict[str, object]: Table name -> DataFrame, plus 'run' -> parsed run.json
    """
    loaded = {}
    for filename in sorted(os.listdir(directory)):
        name, extension = os.path.splitext(filename)
        path = os.path.join(directory, filename)
        if filename == 'run.json':
            with open(path) as f:
                loaded['run'] = json.load(f)
        elif extension == '.json':
            with open(path) as f:
                loaded[name] = pd.DataFrame(**json.load(f))
        elif extension == '.csv':
            loaded[name] = pd.read_csv(path, index_col=0 if name.startswith('selection_') else None)
    return loaded
