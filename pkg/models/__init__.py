#!/usr/bin/python3
"""
This module initializes the models package and defines the Base class.

This package contains the domain containers of the edge-selection
engine (graphs, spin data, misclassification laws, estimates, EM state,
scenarios) and the SQLAlchemy ORM model recording simulation runs.

Attributes:
    Base: SQLAlchemy declarative base class for all ORM models
"""
from sqlalchemy.orm import declarative_base
Base = declarative_base()

# Import all ORM models
from models.simulation_run import RunStatus, SimulationRun

__all__ = ["Base", "SimulationRun", "RunStatus"]
