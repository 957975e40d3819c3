import numpy as np
import pytest

from amsom.core import Dataset, assign_all
from amsom.errors import DataError, MapStructureError
from amsom.metrics import (
    dead_units,
    label_neurons,
    quality_report,
    quantization_error,
    topographic_error,
)

from conftest import make_map


def test_quantization_error_matches_a_plain_loop():
    rng = np.random.default_rng(51)
    data = Dataset(rng.normal(size=(30, 3)))
    ms = make_map(rng.normal(size=(5, 3)))
    got = quantization_error(data, ms)
    total = 0.0
    for p in data.patterns:
        total += min(np.linalg.norm(p - w) for w in ms.weights)
    assert got == pytest.approx(total / 30, abs=1e-12)


def test_topographic_error_zero_when_fully_connected():
    rng = np.random.default_rng(52)
    data = Dataset(rng.normal(size=(20, 2)))
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    ms = make_map(rng.normal(size=(4, 2)), edges=edges)
    assert topographic_error(data, ms) == 0.0


def test_topographic_error_zero_when_winners_stay_adjacent():
    # prototypes on a 2x2 lattice, patterns nudged toward a lattice neighbor
    ms = make_map(
        [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
        positions=[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
        edges=[(0, 1), (0, 2), (1, 3), (2, 3)],
    )
    data = Dataset([[0.1, 0.0], [0.9, 0.0], [0.0, 0.9], [1.0, 0.9]])
    assert topographic_error(data, ms) == 0.0


def test_topographic_error_counts_disconnected_winner_pairs():
    # two connected pairs with a gap between them; one of the two patterns
    # picks its top two from different components
    ms = make_map(
        [[0.0, 0.0], [1.0, 0.0], [5.0, 0.0], [6.0, 0.0]],
        edges=[(0, 1), (2, 3)],
    )
    data = Dataset([[0.1, 0.0], [2.9, 0.0]])
    asg = assign_all(data, ms)
    assert (asg.winner[1], asg.second[1]) == (1, 2)  # bridges the gap
    assert topographic_error(data, ms) == pytest.approx(0.5)  # 1 of N=2


def test_topographic_error_needs_two_neurons():
    data = Dataset([[0.0]])
    with pytest.raises(MapStructureError):
        topographic_error(data, make_map([[0.0]], positions=[[0.0, 0.0]]))


def test_dead_units():
    ms = make_map([[0.0], [1.0], [10.0]])
    data = Dataset([[0.1], [0.9], [1.1]])
    count, fraction = dead_units(data, ms)
    assert count == 1
    assert fraction == pytest.approx(1.0 / 3.0)


def test_label_neurons_majority_vote():
    ms = make_map([[0.0], [1.0], [5.0]])
    data = Dataset([[0.0], [0.1], [0.9], [1.0], [1.1]], labels=[0, 0, 1, 1, 2])
    assert label_neurons(data, ms) == [0, 1, None]


def test_label_neurons_tie_goes_to_the_lowest_class():
    ms = make_map([[0.0], [9.0]])
    data = Dataset([[0.0], [0.1]], labels=[1, 0])
    assert label_neurons(data, ms) == [0, None]


def test_label_neurons_requires_usable_labels():
    ms = make_map([[0.0], [1.0]])
    with pytest.raises(DataError):
        label_neurons(Dataset([[0.0]]), ms)
    with pytest.raises(DataError):
        label_neurons(Dataset([[0.0]], labels=[-1]), ms)


def test_quality_report_bundles_the_measures():
    rng = np.random.default_rng(53)
    data = Dataset(rng.normal(size=(25, 2)), labels=rng.integers(0, 3, size=25))
    ms = make_map(rng.normal(size=(4, 2)), edges=[(0, 1), (1, 2), (2, 3)])
    report = quality_report(data, ms)
    assert report.qe == quantization_error(data, ms)
    assert report.te == topographic_error(data, ms)
    assert (report.dead_unit_count, report.dead_unit_fraction) == dead_units(data, ms)
    assert report.neuron_labels == label_neurons(data, ms)

    plain = quality_report(Dataset(data.patterns), ms)
    assert plain.neuron_labels is None
