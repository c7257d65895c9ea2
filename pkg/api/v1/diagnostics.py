#!/usr/bin/python3
"""
Theory diagnostics API endpoint.

Reports are deterministic in their inputs and cached in Redis under a
hash of the canonical request body.
"""
import logging

from flask import Blueprint, jsonify

from api.v1.helpers import json_body, required
from engine.diagnostics import check_assumptions
from models.graph import GraphSpec
from models.spins import MisclassLaw
from utils.redis_client import RedisClient

logger = logging.getLogger(__name__)

diagnostics_bp = Blueprint('diagnostics', __name__)
redis_client = RedisClient()


@diagnostics_bp.route('/', methods=['POST'])
def diagnose():
    """
    Misclassified score/information report.

    Request body:
        graph: True weighted graph
        law: Misclassification law
        n: Sample size
        d: Optional maximum degree
        lambda: Optional penalty for lambda_tilde

    Returns:
        DiagnosticsReport JSON
    """
    body = json_body()
    required(body, 'graph', 'law', 'n')
    cached = redis_client.get_report('diagnostics', body)
    if cached is not None:
        logger.info("Diagnostics served from cache")
        return jsonify(cached)

    report = check_assumptions(GraphSpec.from_dict(body['graph']), MisclassLaw.from_dict(body['law']),
                               body['n'], body.get('d'))
    response = report.to_dict(body.get('lambda'))
    redis_client.store_report('diagnostics', body, response)
    return jsonify(response)
