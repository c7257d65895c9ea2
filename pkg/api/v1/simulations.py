#!/usr/bin/python3
"""
Simulation run API endpoints.

Runs are executed synchronously and recorded with their aggregate
summary; recorded runs can be listed and retrieved.
"""
import logging

from flask import Blueprint, jsonify, request

from api.v1.helpers import json_body, required
from config.database import get_db
from engine.simulation import load_scenario, run_scenario
from models.simulation_run import SimulationRun

logger = logging.getLogger(__name__)

simulations_bp = Blueprint('simulations', __name__)


@simulations_bp.route('/', methods=['POST'])
def create_run():
    """
    Run and record a scenario.

    Request body:
        config: Scenario JSON
        threads: Optional worker count

    Returns:
        Recorded run with its summary
    """
    body = json_body()
    required(body, 'config')
    config = load_scenario(body['config'])
    result = run_scenario(config, body.get('threads'))

    db = next(get_db())
    try:
        run = SimulationRun.record(db, config.name, config, result)
    except Exception as e:
        db.rollback()
        logger.error(f"Failed to record run of scenario {config.name}: {e}")
        return jsonify({'error': 'Failed to record simulation run'}), 500
    return jsonify(run.to_dict()), 201


@simulations_bp.route('/', methods=['GET'])
def list_runs():
    """
    List recorded runs, newest first.

    Query params:
        page: Page number (default: 1)
        per_page: Items per page (default: 10, at most 100)
        name: Filter by scenario name
    """
    db = next(get_db())
    try:
        page = max(1, int(request.args.get('page', 1)))
        per_page = min(max(1, int(request.args.get('per_page', 10))), 100)
    except ValueError:
        return jsonify({'error': 'page and per_page must be integers'}), 400

    query = db.query(SimulationRun)
    if 'name' in request.args:
        query = query.filter(SimulationRun.name == request.args['name'])
    total = query.count()
    runs = query.order_by(SimulationRun.created_at.desc()) \
                .offset((page - 1) * per_page) \
                .limit(per_page) \
                .all()

    return jsonify({
        'runs': [run.to_dict() for run in runs],
        'pagination': {
            'page': page,
            'per_page': per_page,
            'total': total,
            'pages': (total + per_page - 1) // per_page
        }
    })


@simulations_bp.route('/<int:run_id>', methods=['GET'])
def get_run(run_id: int):
    """Recorded run with its configuration."""
    db = next(get_db())
    run = db.query(SimulationRun).filter_by(id=run_id).first()
    if not run:
        return jsonify({'error': 'Simulation run not found'}), 404
    return jsonify(run.to_dict(include_config=True))
