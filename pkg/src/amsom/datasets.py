"""Dataset ingestion: CSV loading, the synthetic CLUSTER generator, and
shuffled train/test/validation splitting.
"""

from __future__ import annotations

import csv
import logging
from pathlib import Path

import numpy as np

from .core import Dataset
from .errors import ConfigError, DataError

log = logging.getLogger(__name__)

MISSING_TOKENS = {"", "na", "nan", "?"}


def _is_float(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def load_csv(path, label_column: int | str | None = None) -> Dataset:
    """Load a comma-separated numeric dataset.

    A header row is auto-detected when the first row is entirely non-numeric.
    ``label_column`` selects the class column by 0-based index (negative
    counts from the end) or by header name. Rows with missing values (empty
    cells, NA, ?) are skipped and counted; any other unparseable cell is a
    hard error reported with its line number. String class labels are mapped
    to integer ids by sorted value.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        rows = [(lineno, row) for lineno, row in enumerate(csv.reader(fh), start=1)]
    rows = [(lineno, row) for lineno, row in rows if any(cell.strip() for cell in row)]
    if not rows:
        raise DataError(f"{path}: no data rows")

    header = None
    first = [cell.strip() for cell in rows[0][1]]
    if not any(_is_float(cell) for cell in first):
        header = first
        rows = rows[1:]
        if not rows:
            raise DataError(f"{path}: header but no data rows")

    width = len(rows[0][1])
    if isinstance(label_column, str):
        if header is None:
            raise DataError(f"{path}: label column {label_column!r} needs a header row")
        try:
            label_idx = header.index(label_column)
        except ValueError:
            raise DataError(f"{path}: no column named {label_column!r}") from None
    elif label_column is None:
        label_idx = None
    else:
        label_idx = int(label_column)
        if label_idx < 0:
            label_idx += width
        if not 0 <= label_idx < width:
            raise ConfigError(f"label column {label_column} out of range for {width} columns")

    patterns = []
    raw_labels = []
    skipped = 0
    for lineno, row in rows:
        if len(row) != width:
            raise DataError(f"{path}: line {lineno}: expected {width} cells, got {len(row)}")
        cells = [cell.strip() for cell in row]
        if any(cell.lower() in MISSING_TOKENS for cell in cells):
            skipped += 1
            continue
        features = []
        for col, cell in enumerate(cells):
            if col == label_idx:
                continue
            try:
                features.append(float(cell))
            except ValueError:
                raise DataError(f"{path}: line {lineno}: unparseable value {cell!r}") from None
        patterns.append(features)
        if label_idx is not None:
            raw_labels.append(cells[label_idx])

    if skipped:
        log.warning("%s: skipped %d rows with missing values", path, skipped)
    if not patterns:
        raise DataError(f"{path}: all rows were skipped")

    labels = None
    if label_idx is not None:
        if all(_is_float(cell) and float(cell) == int(float(cell)) for cell in raw_labels):
            labels = np.array([int(float(cell)) for cell in raw_labels], dtype=np.int64)
        else:
            mapping = {value: i for i, value in enumerate(sorted(set(raw_labels)))}
            labels = np.array([mapping[cell] for cell in raw_labels], dtype=np.int64)

    return Dataset(np.asarray(patterns, dtype=np.float64), labels)


CLUSTER_CENTERS = np.array([[0.0, 0.0], [5.0, 0.0], [0.0, 5.0], [5.0, 5.0]])
CLUSTER_SD = 0.5
CLUSTER_PER_BLOB = 250


def generate_cluster_dataset(seed) -> Dataset:
    """Synthetic benchmark: 1000 2-D points in four well-separated blobs.

    Four Gaussian blobs of 250 points each (sd 0.5) centered on the corners
    of a 5 x 5 square; labels are the blob ids. Deterministic per seed.
    """
    rng = np.random.default_rng(seed)
    parts = [
        rng.normal(loc=center, scale=CLUSTER_SD, size=(CLUSTER_PER_BLOB, 2))
        for center in CLUSTER_CENTERS
    ]
    patterns = np.vstack(parts)
    labels = np.repeat(np.arange(len(CLUSTER_CENTERS)), CLUSTER_PER_BLOB)
    return Dataset(patterns, labels)


def split_dataset(data: Dataset, fractions, seed) -> tuple[Dataset, Dataset, Dataset]:
    """Shuffle and cut into train/test/validation parts.

    ``fractions`` are three positive numbers summing to one; sizes are the
    rounded first two fractions with the remainder going to validation. Any
    empty part is an error. No stratification: just a seeded permutation and
    contiguous slices.
    """
    fractions = tuple(float(f) for f in fractions)
    if len(fractions) != 3:
        raise ConfigError("need exactly three split fractions")
    if any(f <= 0.0 for f in fractions):
        raise ConfigError(f"split fractions must all be positive, got {fractions}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ConfigError(f"split fractions must sum to 1, got {sum(fractions)}")

    n = data.n
    n_train = int(round(fractions[0] * n))
    n_test = int(round(fractions[1] * n))
    n_val = n - n_train - n_test
    if min(n_train, n_test, n_val) < 1:
        raise ConfigError(
            f"split of {n} patterns at {fractions} leaves an empty part "
            f"({n_train}/{n_test}/{n_val})"
        )

    perm = np.random.default_rng(seed).permutation(n)
    train = data.subset(perm[:n_train])
    test = data.subset(perm[n_train : n_train + n_test])
    val = data.subset(perm[n_train + n_test :])
    return train, test, val
