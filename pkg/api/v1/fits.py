#!/usr/bin/python3
"""
RWL fitting API endpoints.

Fits are computed synchronously; a lambda grid returns one fit per
value, warm-started along the grid.
"""
import logging

from flask import Blueprint, jsonify

from api.v1.helpers import json_body, parse_candidates, parse_spins, required
from engine.rwl import rwl_fit, rwl_path, rwl_weighted_fit, rwl_weighted_path
from models.spins import MisclassLaw
from validators.validators import validate_lambda_grid

logger = logging.getLogger(__name__)

fits_bp = Blueprint('fits', __name__)


@fits_bp.route('/', methods=['POST'])
def create_fit():
    """
    Fit RWL (or RWL Weighted when a law is given).

    Request body:
        data: Spin observations
        lambda: Penalty, or
        lambda_grid: Descending penalties
        aggregation: 'and' (default) or 'or'
        weights: Optional row weights (n, or n x p)
        law: Optional misclassification law, selects RWL Weighted
        candidates: Candidates of RWL Weighted (list or {"threshold": q})

    Returns:
        The fit, or {"fits": [...]} for a grid
    """
    body = json_body()
    required(body, 'data')
    data = parse_spins(body['data'])
    aggregation = body.get('aggregation', 'and')
    law = MisclassLaw.from_dict(body['law']) if 'law' in body else None
    if law is not None and 'weights' in body:
        raise ValueError("Row weights cannot be combined with RWL Weighted")

    if 'lambda_grid' in body:
        grid = validate_lambda_grid(body['lambda_grid'])
        if law is None:
            fits = rwl_path(data, grid, aggregation, body.get('weights'))
        else:
            candidates = parse_candidates(body.get('candidates'), data.p, law)
            fits = rwl_weighted_path(data, grid, law, candidates, aggregation)
        logger.info(f"Fitted {len(fits)} penalties on {data.n} x {data.p} observations")
        return jsonify({'fits': [fit.to_dict() for fit in fits]})

    required(body, 'lambda')
    if law is None:
        fit = rwl_fit(data, body['lambda'], aggregation, body.get('weights'))
    else:
        fit = rwl_weighted_fit(data, body['lambda'], law,
                               parse_candidates(body.get('candidates'), data.p, law), aggregation)
    return jsonify(fit.to_dict())
