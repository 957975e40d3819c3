"""Map quality measures: quantization error, topographic error, dead units,
majority-vote neuron labels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, MapState, assign_all, win_histogram
from .errors import DataError, MapStructureError


@dataclass
class QualityReport:
    """Bundle of the standard measures for one map on one dataset."""

    qe: float
    te: float
    dead_unit_count: int
    dead_unit_fraction: float
    neuron_labels: list | None = None


def quantization_error(data: Dataset, map_state: MapState) -> float:
    """Mean distance from each pattern to its winner's weight vector."""
    asg = assign_all(data, map_state)
    return float(np.mean(np.sqrt(asg.dist)))


def topographic_error(data: Dataset, map_state: MapState) -> float:
    """Fraction of patterns whose winner and runner-up are not connected."""
    if map_state.m < 2:
        raise MapStructureError("topographic error needs at least 2 neurons")
    asg = assign_all(data, map_state)
    connected = map_state.edges[asg.winner, asg.second]
    return float(np.mean(~connected))


def dead_units(data: Dataset, map_state: MapState) -> tuple[int, float]:
    """Count and fraction of neurons that win no pattern of ``data``."""
    wins = win_histogram(assign_all(data, map_state), map_state.m)
    count = int(np.sum(wins == 0))
    return count, count / map_state.m


def label_neurons(data: Dataset, map_state: MapState) -> list:
    """Majority-vote class label per neuron.

    Ties go to the lowest class id; neurons winning no pattern get None.
    """
    if data.labels is None:
        raise DataError("label_neurons needs a labeled dataset")
    if np.any(data.labels < 0):
        raise DataError("class ids must be non-negative")
    asg = assign_all(data, map_state)
    n_classes = int(data.labels.max()) + 1
    labels: list = []
    for i in range(map_state.m):
        won = data.labels[asg.winner == i]
        if won.size == 0:
            labels.append(None)
        else:
            counts = np.bincount(won, minlength=n_classes)
            labels.append(int(np.argmax(counts)))
    return labels


def quality_report(data: Dataset, map_state: MapState) -> QualityReport:
    """Compute all measures at once (labels only when the data has them)."""
    count, fraction = dead_units(data, map_state)
    return QualityReport(
        qe=quantization_error(data, map_state),
        te=topographic_error(data, map_state),
        dead_unit_count=count,
        dead_unit_fraction=fraction,
        neuron_labels=None if data.labels is None else label_neurons(data, map_state),
    )
