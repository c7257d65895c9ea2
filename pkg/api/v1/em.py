#!/usr/bin/python3
"""
EM refinement API endpoint.
"""
from flask import Blueprint, jsonify

from api.v1.helpers import json_body, parse_candidates, parse_spins, required
from engine.em import em_update
from engine.rwl import rwl_fit
from models.estimates import RwlFit
from models.spins import MisclassLaw

em_bp = Blueprint('em', __name__)


@em_bp.route('/', methods=['POST'])
def refine():
    """
    Run EM updates from an initial fit.

    Request body:
        data: Spin observations used for the initial fit
        init_fit: Initial RwlFit, or
        init_lambda: Penalty of an RWL fit computed here
        law: Misclassification law
        candidates: Candidate nodes (list or {"threshold": q})
        lambda: M-step penalty (default: the initial penalty)
        iters: Number of EM updates (default 1)
        c_max: Candidate limit per component
        audit_likelihood: Record the penalized likelihood per node

    Returns:
        Final EM state and edge set
    """
    body = json_body()
    required(body, 'data', 'law')
    data = parse_spins(body['data'])
    law = MisclassLaw.from_dict(body['law'])
    if 'init_fit' in body:
        initial = RwlFit.from_dict(body['init_fit'])
    else:
        required(body, 'init_lambda')
        initial = rwl_fit(data, body['init_lambda'], body.get('aggregation', 'and'))

    state, edges = em_update(
        initial, data, law,
        parse_candidates(body.get('candidates'), data.p, law),
        body.get('lambda', initial.lam),
        iterations=body.get('iters', 1),
        c_max=body.get('c_max'),
        audit_likelihood=bool(body.get('audit_likelihood', False)),
    )
    return jsonify({
        'initial_edges': initial.edge_set.to_dict()['edges'],
        'edges': edges.to_dict()['edges'],
        'state': state.to_dict(),
    })
