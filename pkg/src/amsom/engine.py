"""The adaptive trainer: neurons move, gain and lose edges, split and die.

Training runs in two phases. ``train`` performs the structural phase: each
epoch assigns all patterns, refreshes the edge graph from winner/runner-up
pairs, updates weights (batch rule) and positions (attraction between neurons
that are close in input space), prunes aged-out edges and isolated neurons,
possibly splits the worst neuron, and enforces the degree cap. ``smooth`` then
freezes the structure and fine-tunes weights and positions against the
immediate graph neighborhood only.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    Assignment,
    Dataset,
    MapState,
    assign_all,
    mean_quantization_error,
    per_neuron_quantization,
    win_histogram,
    winner_means,
)
from .errors import ConfigError, MapStructureError, TrainingError
from .grid import HEXAGONAL, RECTANGULAR, growing_threshold


@dataclass(frozen=True)
class TrainConfig:
    """All tunables of the trainer and the baseline.

    The defaults reproduce the reference setup: spread factor 0.5, gamma 4,
    position rate 0.01 (annealed with the neighborhood width), smoothing rate
    0.001, edge age cutoff 30, at least 30 epochs between splits, epoch caps
    1000 (training) and 500 (smoothing), termination thresholds 1e-6 and
    1e-10. sigma0=None resolves to max(rows, cols)/2 of the initial lattice;
    sigma decays exponentially over sigma_decay_epochs and is then held
    (max_epochs remains the hard stop). The decay aims at sigma_final; once
    the layout freezes, the remaining decay is retargeted at the map's own
    cell width, which on an undeformed lattice is sigma_final itself.
    """

    sf: float = 0.5
    gamma: float = 4.0
    alpha_train: float = 0.01
    alpha_smooth: float = 0.001
    age_max: int = 30
    t_add: int = 30
    max_epochs: int = 1000
    smooth_max_epochs: int = 500
    eps1: float = 1e-6
    eps2: float = 1e-10
    sigma0: float | None = None
    sigma_final: float = 1.0
    sigma_decay_epochs: int = 50
    topology: str = RECTANGULAR
    q_max: int | None = None
    beta_mode: str = "gaussian"
    seed: int = 0

    def validate(self) -> None:
        if not 0.0 < self.sf < 1.0:
            raise ConfigError(f"sf must be in (0, 1), got {self.sf}")
        if self.gamma <= 0.0:
            raise ConfigError("gamma must be positive")
        for name in ("alpha_train", "alpha_smooth"):
            a = getattr(self, name)
            if not 0.0 < a < 1.0:
                raise ConfigError(f"{name} must be in (0, 1), got {a}")
        if self.age_max < 1:
            raise ConfigError("age_max must be at least 1")
        if self.t_add < 1:
            raise ConfigError("t_add must be at least 1")
        if self.max_epochs < 1 or self.smooth_max_epochs < 1:
            raise ConfigError("epoch caps must be at least 1")
        if not 0.0 < self.eps2 < self.eps1:
            raise ConfigError("need 0 < eps2 < eps1")
        if self.sigma_final <= 0.0:
            raise ConfigError("sigma_final must be positive")
        if self.sigma0 is not None and self.sigma0 < self.sigma_final:
            raise ConfigError("sigma0 must be >= sigma_final")
        if self.sigma_decay_epochs < 1:
            raise ConfigError("sigma_decay_epochs must be at least 1")
        if self.topology not in (RECTANGULAR, HEXAGONAL):
            raise ConfigError(f"unknown topology {self.topology!r}")
        if self.q_max is not None and self.q_max < 1:
            raise ConfigError("q_max must be at least 1")
        if self.beta_mode not in ("gaussian", "zero"):
            raise ConfigError(f"unknown beta_mode {self.beta_mode!r}")
        if int(self.seed) < 0:
            raise ConfigError("seed must be non-negative")

    @property
    def effective_q(self) -> int:
        if self.q_max is not None:
            return self.q_max
        return 4 if self.topology == RECTANGULAR else 6


@dataclass
class EpochReport:
    """What one epoch did: error level and structural events.

    ``per_neuron_qe`` uses NaN as the marker for neurons that won nothing.
    Events are dicts with a ``kind`` key ("edge_aged_out", "edge_trimmed",
    "neuron_removed", "neuron_split", "removal_skipped"); indices refer to the
    map as it stood when the event happened.
    """

    epoch: int
    mqe: float
    per_neuron_qe: np.ndarray
    events: list = field(default_factory=list)


def neighborhood_output(r_j, r_i, sigma: float) -> float:
    """Output-space kernel exp(-|r_j - r_i|^2 / sigma^2)."""
    r_j = np.asarray(r_j, dtype=np.float64)
    r_i = np.asarray(r_i, dtype=np.float64)
    diff = r_j - r_i
    return float(np.exp(-(diff @ diff) / (sigma * sigma)))


def neighborhood_input(w_j, w_i, sigma: float, gamma: float) -> float:
    """Input-space kernel exp(-|w_j - w_i|^2 / (gamma * sigma^2))."""
    w_j = np.asarray(w_j, dtype=np.float64)
    w_i = np.asarray(w_i, dtype=np.float64)
    diff = w_j - w_i
    return float(np.exp(-(diff @ diff) / (gamma * sigma * sigma)))


def _pairwise_sq(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _output_kernel(positions: np.ndarray, sigma: float) -> np.ndarray:
    return np.exp(-_pairwise_sq(positions) / (sigma * sigma))


def _input_kernel(weights: np.ndarray, sigma: float, gamma: float) -> np.ndarray:
    return np.exp(-_pairwise_sq(weights) / (gamma * sigma * sigma))


def batch_weight_update(
    map_state: MapState,
    assignment: Assignment,
    data: Dataset,
    sigma: float,
    neighbor_mask: np.ndarray | None = None,
) -> np.ndarray:
    """One batch weight step: kernel-weighted average of winner means.

    Every neuron's new weight is sum_j n_j h_ji x_j / sum_j n_j h_ji over the
    neurons j that won patterns (x_j their mean pattern, h the output-space
    kernel at the current positions). Neurons whose denominator is zero keep
    their previous weight. Returns the new weight matrix without touching the
    map.
    """
    m = map_state.m
    n = win_histogram(assignment, m).astype(np.float64)
    xbar = winner_means(data, assignment, m)
    h = _output_kernel(map_state.positions, sigma)
    if neighbor_mask is not None:
        h = h * neighbor_mask
    k = n[:, None] * h
    den = k.sum(axis=0)
    num = k.T @ xbar
    new_w = map_state.weights.copy()
    ok = den > 0.0
    new_w[ok] = num[ok] / den[ok, None]
    return new_w


def position_update(
    map_state: MapState,
    assignment: Assignment,
    sigma: float,
    alpha: float,
    gamma: float,
    neighbor_mask: np.ndarray | None = None,
) -> np.ndarray:
    """One position step: move each neuron toward winners it resembles.

    The displacement of neuron i is alpha times the weighted average of
    (r_j - r_i) over the other neurons j with wins, weighted by n_j and the
    input-space kernel of the current weights. The self term is excluded; a
    zero denominator means no movement. All displacements are computed from
    the positions as they stand, then applied together. Returns the new
    position matrix.
    """
    m = map_state.m
    n = win_histogram(assignment, m).astype(np.float64)
    delta = _input_kernel(map_state.weights, sigma, gamma)
    if neighbor_mask is not None:
        delta = delta * neighbor_mask
    k = n[:, None] * delta
    np.fill_diagonal(k, 0.0)
    den = k.sum(axis=0)
    num = k.T @ map_state.positions - den[:, None] * map_state.positions
    new_r = map_state.positions.copy()
    ok = den > 0.0
    new_r[ok] += alpha * num[ok] / den[ok, None]
    return new_r


def process_pattern_edges(map_state: MapState, winner: int, second: int) -> None:
    """Apply one pattern presentation to the edge graph.

    Counts the win, ages every edge of the winner by one, then connects
    winner and runner-up with a fresh age of zero.
    """
    if winner == second:
        raise MapStructureError("winner and runner-up must differ")
    map_state.win_count[winner] += 1
    nb = map_state.edges[winner]
    map_state.ages[winner, nb] += 1
    map_state.ages[nb, winner] += 1
    map_state.edges[winner, second] = map_state.edges[second, winner] = True
    map_state.ages[winner, second] = map_state.ages[second, winner] = 0


def _apply_epoch_edges(map_state: MapState, winners: np.ndarray, seconds: np.ndarray) -> None:
    """Batched equivalent of process_pattern_edges over a whole epoch.

    Exactly reproduces the sequential presentation-order result: an edge that
    is never refreshed ages by the total wins of its endpoints; a refreshed
    edge ends with the wins of its endpoints after its last refresh.
    """
    m = map_state.m
    wins = np.bincount(winners, minlength=m).astype(np.int64)

    last_reset: dict[tuple[int, int], int] = {}
    for idx, (w, s) in enumerate(zip(winners.tolist(), seconds.tolist())):
        pair = (w, s) if w < s else (s, w)
        last_reset[pair] = idx

    start_edges = map_state.edges.copy()
    inc = wins[:, None] + wins[None, :]
    map_state.ages[start_edges] += inc[start_edges]

    if last_reset:
        pairs = np.array(list(last_reset.keys()), dtype=np.int64)
        when = np.array(list(last_reset.values()), dtype=np.int64)
        onehot = np.zeros((len(winners), m), dtype=np.int64)
        onehot[np.arange(len(winners)), winners] = 1
        cum = onehot.cumsum(axis=0)  # wins among patterns 0..idx inclusive
        a, b = pairs[:, 0], pairs[:, 1]
        after = (wins[a] - cum[when, a]) + (wins[b] - cum[when, b])
        map_state.edges[a, b] = map_state.edges[b, a] = True
        map_state.ages[a, b] = after
        map_state.ages[b, a] = after

    map_state.win_count += wins


def _remove_isolated(map_state: MapState) -> list:
    """Drop neurons with no edges, in ascending index order, keeping m >= 2."""
    events = []
    isolated = np.flatnonzero(map_state.degrees() == 0)
    if isolated.size == 0:
        return events
    allowed = max(0, map_state.m - 2)
    removable = isolated[:allowed]
    skipped = isolated[allowed:]
    for i in removable:
        events.append({"kind": "neuron_removed", "neuron": int(i)})
    if skipped.size > 0:
        events.append(
            {"kind": "removal_skipped", "neurons": [int(i) for i in skipped]}
        )
    map_state.delete_neurons(removable)
    return events


def prune_edges_and_neurons(map_state: MapState, age_max: int) -> list:
    """Cut edges at or past the age cutoff, then drop isolated neurons."""
    events = []
    aged = map_state.edges & (map_state.ages >= age_max)
    for a, b in np.argwhere(np.triu(aged, 1)):
        events.append(
            {"kind": "edge_aged_out", "edge": (int(a), int(b)), "age": int(map_state.ages[a, b])}
        )
    map_state.edges[aged] = False
    map_state.ages[aged] = 0
    events += _remove_isolated(map_state)
    return events


def maybe_add_neuron(
    map_state: MapState,
    per_neuron_qe: np.ndarray,
    gt: float,
    epochs_since_add: int,
    t_add: int,
    rng: np.random.Generator,
    beta_mode: str = "gaussian",
) -> list:
    """Split the worst neuron if its error exceeds the growing threshold.

    Eligible only when at least t_add epochs passed since the last split. The
    split replaces neuron u (largest per-neuron error, NaN = empty neurons
    never split) with two offspring: weights (1+beta)*w_u and -beta*w_u, the
    first keeping u's position, the second placed halfway toward the worst
    neighbor v. Both inherit u's edges, gain a mutual edge, and start with all
    incident ages and win counts at zero. beta is a clamped standard normal
    draw (or 0 in "zero" mode). At most one split per call.
    """
    if epochs_since_add < t_add:
        return []
    finite = np.isfinite(per_neuron_qe)
    if not finite.any():
        return []
    qe = np.where(finite, per_neuron_qe, -np.inf)
    u = int(np.argmax(qe))
    if qe[u] <= gt:
        return []
    nbrs = np.flatnonzero(map_state.edges[u])
    if nbrs.size == 0:
        return []
    v = int(nbrs[np.argmax(qe[nbrs])])

    if beta_mode == "zero":
        beta = 0.0
    else:
        beta = float(np.clip(rng.standard_normal(), -0.5, 0.5))

    m = map_state.m
    w_u = map_state.weights[u].copy()
    r_u = map_state.positions[u].copy()
    r_v = map_state.positions[v]

    map_state.weights[u] = (1.0 + beta) * w_u
    map_state.weights = np.vstack([map_state.weights, -beta * w_u])
    map_state.positions = np.vstack([map_state.positions, (r_u + r_v) / 2.0])

    edges = np.zeros((m + 1, m + 1), dtype=bool)
    edges[:m, :m] = map_state.edges
    col_u = map_state.edges[u].copy()
    edges[m, :m] = col_u
    edges[:m, m] = col_u
    edges[u, m] = edges[m, u] = True
    map_state.edges = edges

    ages = np.zeros((m + 1, m + 1), dtype=np.int64)
    ages[:m, :m] = map_state.ages
    ages[u, :] = 0
    ages[:, u] = 0
    map_state.ages = ages

    map_state.win_count = np.append(map_state.win_count, 0)
    map_state.win_count[u] = 0

    return [
        {"kind": "neuron_split", "parent": u, "neighbor": v, "new_neuron": m, "beta": beta}
    ]


def enforce_degree(map_state: MapState, q: int) -> list:
    """Trim each neuron down to its q lowest-age edges, then drop isolates.

    Neurons are processed in ascending index order; within a neuron, edges
    are ranked by age then peer index, and everything past the q best is cut.
    """
    events = []
    for i in range(map_state.m):
        nbrs = np.flatnonzero(map_state.edges[i])
        if nbrs.size <= q:
            continue
        order = np.lexsort((nbrs, map_state.ages[i, nbrs]))
        drop = nbrs[order[q:]]
        for j in drop:
            a, b = (i, int(j)) if i < j else (int(j), i)
            events.append({"kind": "edge_trimmed", "edge": (a, b), "neuron": i})
        map_state.edges[i, drop] = False
        map_state.edges[drop, i] = False
        map_state.ages[i, drop] = 0
        map_state.ages[drop, i] = 0
    events += _remove_isolated(map_state)
    return events


def _resolve_sigma0(config: TrainConfig, map_state: MapState) -> float:
    if config.sigma0 is not None:
        return float(config.sigma0)
    span = float(np.ptp(map_state.positions, axis=0).max())
    return max((span + 1.0) / 2.0, config.sigma_final)


def _sigma_at(config: TrainConfig, sigma0: float, epoch: int) -> float:
    h = config.sigma_decay_epochs
    u = min(epoch, h) / h
    return sigma0 * (config.sigma_final / sigma0) ** u


# Positions stop moving once sigma falls to this multiple of sigma_final.
# Moving neurons while the neighborhood is already narrow buys no further
# reorganisation but keeps perturbing the weight fixed point, which delays
# the eps1 cutoff.  Freezing the layout for the tail of the annealing lets
# the weights settle under fixed geometry, like the baseline does.
POSITION_FREEZE_FACTOR = 2.0


def _alpha_at(config: TrainConfig, sigma0: float, sigma: float) -> float:
    freeze_at = POSITION_FREEZE_FACTOR * config.sigma_final
    if sigma0 > freeze_at:
        return config.alpha_train * max(0.0, sigma - freeze_at) / (sigma0 - freeze_at)
    if sigma0 > config.sigma_final:
        return (
            config.alpha_train
            * (sigma - config.sigma_final)
            / (sigma0 - config.sigma_final)
        )
    return 0.0


def _cell_width_sigma(map_state: MapState, config: TrainConfig) -> float:
    """Kernel width matched to the map's own cell size.

    The configured sigma_final means "one cell" on an undeformed unit
    lattice. Position updates only ever pull neurons toward each other, so a
    trained layout is somewhat contracted and its actual cell width is the
    median edge length. Returns that width capped at sigma_final; on a rigid
    unit lattice this is sigma_final exactly.
    """
    i, j = np.nonzero(np.triu(map_state.edges, 1))
    if i.size == 0:
        return float(config.sigma_final)
    gaps = map_state.positions[i] - map_state.positions[j]
    width = float(np.median(np.sqrt(np.einsum("ed,ed->e", gaps, gaps))))
    if width <= 0.0:
        return float(config.sigma_final)
    return min(float(config.sigma_final), width)


class _SigmaSchedule:
    """Per-epoch sigma and position rate for one training run.

    While the layout can still move, sigma follows the plain exponential
    decay toward sigma_final. The epoch the position rate reaches zero, the
    remaining decay is retargeted at the frozen map's measured cell width
    and eased so the per-epoch sigma change vanishes at the decay horizon.
    A map that never moved (the baseline lattice) has cell width exactly
    sigma_final, so both trainers run the same shape of schedule and land
    on the same final sigma.
    """

    def __init__(self, config: TrainConfig, sigma0: float):
        self.config = config
        self.sigma0 = sigma0
        self.tail_start = None
        self.tail_sigma = None
        self.target = None

    def step(self, epoch: int, map_state: MapState):
        cfg = self.config
        if self.tail_start is None:
            sigma = _sigma_at(cfg, self.sigma0, epoch)
            alpha = _alpha_at(cfg, self.sigma0, sigma)
            if alpha == 0.0:
                self.tail_start = epoch
                self.tail_sigma = sigma
                self.target = _cell_width_sigma(map_state, cfg)
            return sigma, alpha
        horizon = cfg.sigma_decay_epochs
        if horizon > self.tail_start:
            u = (min(epoch, horizon) - self.tail_start) / (horizon - self.tail_start)
            # Smoothstep easing makes the per-epoch sigma steps vanish as the
            # horizon nears, so the weights are already settled when the decay
            # stops and the eps1 cutoff fires without trailing flips.
            u = u * u * (3.0 - 2.0 * u)
            sigma = self.tail_sigma * (self.target / self.tail_sigma) ** u
        else:
            sigma = self.tail_sigma
        return sigma, 0.0


def train(data: Dataset, map_state: MapState, config: TrainConfig, progress=None):
    """Run the structural training phase until the error settles.

    Mutates ``map_state`` in place and returns ``(map_state, reports)``. Each
    epoch ends by measuring the mean quantization error against the map as it
    then stands; training stops early when the epoch-to-epoch change drops
    under eps1, and always at max_epochs. ``progress`` (if given) receives
    every EpochReport as it is produced.
    """
    config.validate()
    if map_state.m < 2:
        raise MapStructureError("training needs at least 2 neurons")
    if data.d != map_state.d:
        raise MapStructureError(f"map d={map_state.d} does not match data d={data.d}")
    gt = growing_threshold(data.d, config.sf)
    q = config.effective_q
    sigma0 = _resolve_sigma0(config, map_state)
    rng = np.random.default_rng(np.random.SeedSequence([int(config.seed), 1]))

    reports = []
    prev_mqe = None
    epochs_since_add = 0
    schedule = _SigmaSchedule(config, sigma0)
    for epoch in range(1, config.max_epochs + 1):
        sigma, alpha = schedule.step(epoch, map_state)

        asg = assign_all(data, map_state)
        _apply_epoch_edges(map_state, asg.winner, asg.second)
        map_state.weights = batch_weight_update(map_state, asg, data, sigma)
        if alpha > 0.0:
            map_state.positions = position_update(
                map_state, asg, sigma, alpha, config.gamma
            )

        events = prune_edges_and_neurons(map_state, config.age_max)
        epochs_since_add += 1

        eval_asg = assign_all(data, map_state)
        pnqe = per_neuron_quantization(eval_asg, map_state.m)

        split_events = maybe_add_neuron(
            map_state, pnqe, gt, epochs_since_add, config.t_add, rng, config.beta_mode
        )
        if split_events:
            epochs_since_add = 0
        events += split_events

        degree_events = enforce_degree(map_state, q)
        events += degree_events

        if split_events or any(e["kind"] == "neuron_removed" for e in degree_events):
            eval_asg = assign_all(data, map_state)
            pnqe = per_neuron_quantization(eval_asg, map_state.m)

        mqe = mean_quantization_error(eval_asg)
        if not np.isfinite(mqe):
            raise TrainingError(f"non-finite mqe at epoch {epoch}")

        report = EpochReport(epoch, mqe, pnqe, events)
        reports.append(report)
        if progress is not None:
            progress(report)

        if prev_mqe is not None and abs(mqe - prev_mqe) < config.eps1:
            break
        prev_mqe = mqe

    return map_state, reports


def smooth(data: Dataset, map_state: MapState, config: TrainConfig, progress=None):
    """Fine-tune weights and positions with the structure frozen.

    The neighborhood is restricted to each neuron's direct graph neighbors
    (plus itself for the weight step) and the kernel width is held fixed.
    Adaptation continues at the low rate alpha_smooth, for positions and
    weights alike: each epoch the weights move a step of that size toward
    the masked batch target rather than jumping onto it, so the error is
    polished without reshuffling which neurons are closest to which
    patterns. No edges or neurons change. Stops when the epoch-to-epoch
    error change drops under eps2, or after smooth_max_epochs. Returns
    ``(map_state, reports)``.
    """
    config.validate()
    if map_state.m < 2:
        raise MapStructureError("smoothing needs at least 2 neurons")
    if data.d != map_state.d:
        raise MapStructureError(f"map d={map_state.d} does not match data d={data.d}")

    mask = map_state.edges | np.eye(map_state.m, dtype=bool)
    sigma = _cell_width_sigma(map_state, config)

    reports = []
    prev_mqe = None
    for epoch in range(1, config.smooth_max_epochs + 1):
        asg = assign_all(data, map_state)
        target = batch_weight_update(
            map_state, asg, data, sigma, neighbor_mask=mask
        )
        map_state.weights = map_state.weights + config.alpha_smooth * (
            target - map_state.weights
        )
        map_state.positions = position_update(
            map_state, asg, sigma, config.alpha_smooth, config.gamma, neighbor_mask=mask
        )

        eval_asg = assign_all(data, map_state)
        mqe = mean_quantization_error(eval_asg)
        if not np.isfinite(mqe):
            raise TrainingError(f"non-finite mqe at smoothing epoch {epoch}")

        report = EpochReport(epoch, mqe, per_neuron_quantization(eval_asg, map_state.m))
        reports.append(report)
        if progress is not None:
            progress(report)

        if prev_mqe is not None and abs(mqe - prev_mqe) < config.eps2:
            break
        prev_mqe = mqe

    return map_state, reports
