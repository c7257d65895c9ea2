#!/usr/bin/python3
"""
This module defines the SimulationRun class for experiment tracking.

Every scenario run started from the service or with `simulate --record`
leaves one row with its configuration and aggregate summary, so that
results can be listed and compared later.

Classes:
    RunStatus: Enum defining possible run outcomes
    SimulationRun: Represents one recorded scenario run
"""
import enum
import json
from datetime import datetime

from sqlalchemy import Column, DateTime, Enum, Index, Integer, String, Text

from models import Base


class RunStatus(enum.Enum):
    """
    Enum defining possible run outcomes.

    Attributes:
        COMPLETED: At least one replication was aggregated
        FAILED: Every replication failed
    """
    COMPLETED = "completed"
    FAILED = "failed"


class SimulationRun(Base):
    """
    SimulationRun model class for recorded scenario runs.

    Attributes:
        id (Column): Primary key of the run
        name (Column): Scenario name
        seed (Column): Scenario seed, stored as text to hold 64-bit values
        replications (Column): Requested replications
        failed_replications (Column): Replications excluded from the aggregates
        status (Column): Run outcome (from RunStatus)
        config (Column): JSON string of the scenario
        summary (Column): JSON string of AUC and error-rate aggregates
        created_at (Column): Timestamp of the record
    """
    __tablename__ = 'simulation_runs'

    id = Column(Integer, primary_key=True)
    name = Column(String(100), nullable=False)
    seed = Column(String(20), nullable=False)
    replications = Column(Integer, nullable=False)
    failed_replications = Column(Integer, nullable=False, default=0)
    status = Column(Enum(RunStatus), nullable=False)
    config = Column(Text, nullable=False)
    summary = Column(Text)
    created_at = Column(DateTime, default=datetime.utcnow)

    # Indexes
    __table_args__ = (
        Index('idx_run_name', name),
        Index('idx_run_created_at', created_at),
    )

    @staticmethod
    def record(session, name, config, result):
        """
        Create and save a run record.

        Args:
            session: SQLAlchemy session
            name: Scenario name
            config: ScenarioConfig of the run
            result: ScenarioResult of the run

        Returns:
            SimulationRun: The committed record
        """
        run = SimulationRun(
            name=name,
            seed=str(config.seed),
            replications=config.replications,
            failed_replications=len(result.failures),
            status=RunStatus.COMPLETED if result.completed else RunStatus.FAILED,
            config=json.dumps(config.to_dict()),
            summary=json.dumps(result.summary()),
        )
        session.add(run)
        session.commit()
        return run

    def to_dict(self, include_config: bool = False) -> dict:
        data = {
            'id': self.id,
            'name': self.name,
            'seed': int(self.seed),
            'replications': self.replications,
            'failed_replications': self.failed_replications,
            'status': self.status.value,
            'summary': json.loads(self.summary) if self.summary else None,
            'created_at': self.created_at.isoformat() if self.created_at else None,
        }
        if include_config:
            data['config'] = json.loads(self.config)
        return data
