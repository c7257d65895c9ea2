#!/usr/bin/python3
"""
Main Flask application for the isingmis edge-selection service.

This module initializes and configures the Flask application,
registers blueprints, and sets up error handlers.
"""
import logging

from flask import Flask, jsonify

from api.v1.diagnostics import diagnostics_bp
from api.v1.em import em_bp
from api.v1.fits import fits_bp
from api.v1.graphs import graphs_bp
from api.v1.simulations import simulations_bp
from config.database import engine
from config.settings import LOG_LEVEL
from engine import IsingMisError
from models import Base


def create_app():
    """
    Create and configure Flask application.

    Returns:
        Flask: Configured Flask application instance
    """
    logging.basicConfig(level=LOG_LEVEL)
    app = Flask(__name__)

    # Register blueprints
    app.register_blueprint(graphs_bp, url_prefix='/api/v1/graphs')
    app.register_blueprint(fits_bp, url_prefix='/api/v1/fits')
    app.register_blueprint(em_bp, url_prefix='/api/v1/em')
    app.register_blueprint(diagnostics_bp, url_prefix='/api/v1/diagnostics')
    app.register_blueprint(simulations_bp, url_prefix='/api/v1/simulations')

    # Create database tables
    Base.metadata.create_all(bind=engine)

    # Error handlers
    @app.errorhandler(ValueError)
    def invalid_input(error):
        return jsonify({'error': str(error)}), 400

    @app.errorhandler(IsingMisError)
    def engine_error(error):
        return jsonify({'error': str(error), 'type': type(error).__name__}), 400

    @app.errorhandler(404)
    def not_found(error):
        return jsonify({'error': 'Not found'}), 404

    @app.errorhandler(500)
    def internal_error(error):
        return jsonify({'error': 'Internal server error'}), 500

    @app.route('/health')
    def health_check():
        """Basic health check endpoint."""
        return {'status': 'healthy'}, 200

    return app


if __name__ == '__main__':
    app = create_app()
    app.run(debug=True)
