"""Classic batch SOM on a fixed lattice, used as the comparison baseline.

Same assignment rule, same batch weight update, same sigma schedule and the
same termination test as the adaptive trainer, but the lattice never changes:
no position updates, no edge aging, no neuron addition or removal.
"""

from __future__ import annotations

import numpy as np

from .core import (
    Dataset,
    MapState,
    assign_all,
    mean_quantization_error,
    per_neuron_quantization,
    win_histogram,
)
from .engine import (
    EpochReport,
    TrainConfig,
    _resolve_sigma0,
    _SigmaSchedule,
    batch_weight_update,
)
from .errors import TrainingError


def train_batch_som(data: Dataset, map_state: MapState, config: TrainConfig, progress=None):
    """Train weights over a fixed lattice; returns ``(map_state, reports)``.

    Winners are found against the epoch-start weights, then every weight is
    replaced by its kernel-weighted average of winner means. R, E and A are
    left untouched; win counts accumulate for reporting. The sigma schedule
    is shared with the adaptive trainer; since this lattice never deforms,
    its cell width stays at one cell, so the schedule's late retargeting
    aims at sigma_final itself.
    """
    config.validate()
    if data.d != map_state.d:
        raise TrainingError(f"map d={map_state.d} does not match data d={data.d}")
    sigma0 = _resolve_sigma0(config, map_state)

    reports = []
    prev_mqe = None
    schedule = _SigmaSchedule(config, sigma0)
    for epoch in range(1, config.max_epochs + 1):
        sigma, _ = schedule.step(epoch, map_state)
        asg = assign_all(data, map_state)
        map_state.win_count += win_histogram(asg, map_state.m)
        map_state.weights = batch_weight_update(map_state, asg, data, sigma)

        eval_asg = assign_all(data, map_state)
        mqe = mean_quantization_error(eval_asg)
        if not np.isfinite(mqe):
            raise TrainingError(f"non-finite mqe at epoch {epoch}")

        report = EpochReport(epoch, mqe, per_neuron_quantization(eval_asg, map_state.m))
        reports.append(report)
        if progress is not None:
            progress(report)

        if prev_mqe is not None and abs(mqe - prev_mqe) < config.eps1:
            break
        prev_mqe = mqe

    return map_state, reports
