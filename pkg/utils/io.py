#!/usr/bin/python3
"""
File formats shared by the command line and the service.

Spin data is CSV with a header of node names and one row per
observation (entries -1/+1). Graphs, misclassification laws, fits and
reports are JSON documents using the to_dict/from_dict layouts of the
model classes.

Functions:
    read_spins / write_spins: Spin CSV files
    read_json / write_json: JSON documents
    read_graph, read_law, read_fit: Typed JSON readers
"""
import json
import logging
from typing import Any

import pandas as pd

from models.estimates import RwlFit
from models.graph import GraphSpec
from models.spins import MisclassLaw, SpinMatrix

logger = logging.getLogger(__name__)


def read_spins(path: str) -> SpinMatrix:
    """
    Read a spin CSV file.

    Raises:
        ValueError: If an entry is not -1 or +1
    """
    frame = pd.read_csv(path)
    if frame.empty:
        raise ValueError(f"{path} contains no observations")
    return SpinMatrix(frame.to_numpy(), tuple(frame.columns))


def write_spins(data: SpinMatrix, path: str) -> None:
    pd.DataFrame(data.values, columns=list(data.names)).to_csv(path, index=False, lineterminator='\n')
    logger.debug(f"Wrote {data.n} x {data.p} spins to {path}")


def read_json(path: str) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ValueError(f"{path} is not valid JSON: {e}")


def write_json(document: Any, path: str) -> None:
    with open(path, 'w') as f:
        json.dump(document, f, indent=2)
        f.write('\n')


def read_graph(path: str) -> GraphSpec:
    return GraphSpec.from_dict(read_json(path))


def read_law(path: str) -> MisclassLaw:
    return MisclassLaw.from_dict(read_json(path))


def read_fit(path: str) -> RwlFit:
    return RwlFit.from_dict(read_json(path))
