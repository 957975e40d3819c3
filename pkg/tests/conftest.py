"""Shared helpers for the test suite."""

from pathlib import Path

import numpy as np
import pytest

from amsom.core import MapState
from amsom.datasets import load_csv

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
IRIS_CSV = DATA_DIR / "iris.csv"


def make_map(weights, positions=None, edges=(), win_count=None):
    """Build a MapState from plain lists.

    ``edges`` holds (i, j) or (i, j, age) tuples. Positions default to a line
    so tests that only care about weights or the graph stay short.
    """
    w = np.asarray(weights, dtype=np.float64)
    m = w.shape[0]
    if positions is None:
        positions = np.stack([np.arange(m, dtype=np.float64), np.zeros(m)], axis=1)
    r = np.asarray(positions, dtype=np.float64)
    e = np.zeros((m, m), dtype=bool)
    a = np.zeros((m, m), dtype=np.int64)
    for spec in edges:
        i, j = spec[0], spec[1]
        e[i, j] = e[j, i] = True
        if len(spec) > 2:
            a[i, j] = a[j, i] = spec[2]
    wc = np.zeros(m, dtype=np.int64) if win_count is None else np.asarray(win_count, dtype=np.int64)
    return MapState(w, r, e, a, wc)


@pytest.fixture(scope="session")
def iris():
    return load_csv(IRIS_CSV, label_column="species")
