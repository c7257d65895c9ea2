#!/usr/bin/python3
"""Database initialization script with added verification"""
from sqlalchemy import create_engine, inspect

from config.database import DATABASE_URL
from models import Base


def init_database(url: str = DATABASE_URL):
    """Create all tables and return the names found afterwards"""
    engine = create_engine(url)
    Base.metadata.create_all(engine)
    tables = sorted(inspect(engine).get_table_names())
    print(f"Created database tables at {engine.url}: {', '.join(tables)}")
    return tables


if __name__ == '__main__':
    try:
        init_database()
        print("Database initialization completed successfully!")
    except Exception as e:
        print(f"Error during initialization: {e}")
        raise SystemExit(1)
