"""Map persistence (versioned JSON snapshots) and SVG rendering.

Snapshots are dumped with a fixed key order and default float repr, so the
same map always serializes to the same bytes and round-trips losslessly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import MapState
from .errors import DataError

SNAPSHOT_VERSION = 1

# Fill colors for class ids (cycled); dead or unlabeled neurons stay hollow.
PALETTE = [
    "#4c72b0",
    "#dd8452",
    "#55a868",
    "#c44e52",
    "#8172b3",
    "#937860",
    "#da8bc3",
    "#8c8c8c",
    "#ccb974",
    "#64b5cd",
]


def snapshot_dict(
    map_state: MapState,
    labels=None,
    config: dict | None = None,
    metrics: dict | None = None,
) -> dict:
    """Plain-dict form of a map: weights, positions, edges as (i, j, age)
    triples with i < j, plus optional labels, config echo and metrics."""
    i, j = np.nonzero(np.triu(map_state.edges, 1))
    edges = [[int(a), int(b), int(map_state.ages[a, b])] for a, b in zip(i, j)]
    return {
        "format_version": SNAPSHOT_VERSION,
        "neuron_count": map_state.m,
        "weights": map_state.weights.tolist(),
        "positions": map_state.positions.tolist(),
        "edges": edges,
        "win_counts": map_state.win_count.tolist(),
        "neuron_labels": list(labels) if labels is not None else None,
        "config": config,
        "metrics": metrics,
    }


def export_snapshot_json(
    map_state: MapState,
    path,
    labels=None,
    config: dict | None = None,
    metrics: dict | None = None,
) -> None:
    payload = snapshot_dict(map_state, labels=labels, config=config, metrics=metrics)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def snapshot_to_map(payload: dict) -> MapState:
    """Rebuild a MapState from a snapshot dict."""
    if payload.get("format_version") != SNAPSHOT_VERSION:
        raise DataError(f"unsupported snapshot version {payload.get('format_version')!r}")
    m = int(payload["neuron_count"])
    weights = np.asarray(payload["weights"], dtype=np.float64).reshape(m, -1)
    positions = np.asarray(payload["positions"], dtype=np.float64).reshape(m, 2)
    edges = np.zeros((m, m), dtype=bool)
    ages = np.zeros((m, m), dtype=np.int64)
    for a, b, age in payload["edges"]:
        edges[a, b] = edges[b, a] = True
        ages[a, b] = ages[b, a] = age
    win_count = np.asarray(payload["win_counts"], dtype=np.int64)
    return MapState(weights, positions, edges, ages, win_count)


def load_snapshot(path) -> tuple[MapState, dict]:
    """Read a snapshot file; returns the map and the full payload dict."""
    with open(path) as fh:
        payload = json.load(fh)
    return snapshot_to_map(payload), payload


def render_svg(map_state: MapState, path, labels=None, size: int = 640, margin: int = 40) -> None:
    """Draw the map: one line per edge, one circle per neuron.

    Neurons are placed at their positions scaled into the canvas (y flipped so
    "up" stays up). Circles are filled by class color when ``labels`` gives a
    class id, hollow for None/unlabeled neurons.
    """
    pos = map_state.positions
    lo = pos.min(axis=0)
    span = pos.max(axis=0) - lo
    scale = (size - 2 * margin) / max(float(span.max()), 1e-12)

    def to_canvas(p):
        x = margin + (p[0] - lo[0]) * scale
        y = size - margin - (p[1] - lo[1]) * scale
        return x, y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    i, j = np.nonzero(np.triu(map_state.edges, 1))
    for a, b in zip(i, j):
        x1, y1 = to_canvas(pos[a])
        x2, y2 = to_canvas(pos[b])
        parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="#999999" stroke-width="1"/>'
        )
    for k in range(map_state.m):
        x, y = to_canvas(pos[k])
        label = None if labels is None else labels[k]
        fill = "none" if label is None else PALETTE[int(label) % len(PALETTE)]
        parts.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="6" fill="{fill}" '
            f'stroke="#333333" stroke-width="1.5"/>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
