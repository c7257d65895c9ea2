#!/usr/bin/python3
"""
Graph query API endpoints.

This module provides endpoints for the EM update-set partition of an
edge set and for comparing an estimated edge set with the truth.
"""
from flask import Blueprint, jsonify

from api.v1.helpers import json_body, parse_candidates, required
from models.graph import EdgeSetEstimate, GraphSpec, edge_metrics, update_partition

graphs_bp = Blueprint('graphs', __name__)


def _edge_set(payload: dict) -> EdgeSetEstimate:
    """Accept either an edge set or a weighted graph description."""
    edges = payload.get('edges', [])
    if edges and len(edges[0]) == 3:
        return EdgeSetEstimate.from_graph(GraphSpec.from_dict(payload))
    return EdgeSetEstimate.from_dict(payload)


@graphs_bp.route('/partition', methods=['POST'])
def partition():
    """
    Update-set partition endpoint.

    Request body:
        graph: Edge set or weighted graph ({"p", "edges"})
        candidates: Candidate node indices

    Returns:
        Candidates, participants, update set and its components
    """
    data = json_body()
    required(data, 'graph')
    edges = _edge_set(data['graph'])
    result = update_partition(edges, parse_candidates(data.get('candidates'), edges.p))
    return jsonify({**result.to_dict(), 'c_max': result.c_max})


@graphs_bp.route('/metrics', methods=['POST'])
def metrics():
    """
    Edge-recovery metrics endpoint.

    Request body:
        estimate: Estimated edge set
        truth: True graph or edge set
        node_class: Optional nodes whose pairs are compared
        exclude: Optional nodes whose pairs are skipped

    Returns:
        Confusion counts and rates
    """
    data = json_body()
    required(data, 'estimate', 'truth')
    estimate, truth = _edge_set(data['estimate']), _edge_set(data['truth'])
    result = edge_metrics(estimate, truth, data.get('node_class'), data.get('exclude'))
    return jsonify(result.to_dict())
