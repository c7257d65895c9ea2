#!/usr/bin/python3
"""
Request parsing shared by the v1 endpoints.

Spin data is accepted either as a list of rows or as
{"names": [...], "values": [[...], ...]}. Candidates are a list of node
indices or {"threshold": q}, resolved against the request's law.
"""
from typing import FrozenSet

from flask import request

from models.spins import MisclassLaw, SpinMatrix
from validators.validators import validate_gammas, validate_nodes


def json_body() -> dict:
    """Request body as a JSON object; ValueError when missing or not an object."""
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise ValueError("Request body must be a JSON object")
    return data


def required(data: dict, *fields: str) -> None:
    missing = [name for name in fields if name not in data]
    if missing:
        raise ValueError(f"Missing required fields: {', '.join(missing)}")


def parse_spins(payload) -> SpinMatrix:
    if isinstance(payload, dict):
        names = payload.get('names')
        return SpinMatrix(payload.get('values', []), tuple(names) if names else None)
    return SpinMatrix(payload)


def parse_candidates(payload, p: int, law: MisclassLaw = None) -> FrozenSet[int]:
    if isinstance(payload, dict):
        if law is None:
            raise ValueError("A threshold candidate rule needs a misclassification law")
        threshold = float(validate_gammas([payload.get('threshold')])[0])
        return law.candidates_above(threshold, payload.get('statistic', 'mean'))
    return validate_nodes(payload or (), p)
