"""The benchmark protocol: repeated paired runs of the adaptive trainer and
the fixed-lattice baseline, with deterministic derived seeds and file outputs
(per-run snapshots plus a summary table in CSV and text form).
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .baseline import train_batch_som
from .core import Dataset
from .datasets import generate_cluster_dataset, load_csv, split_dataset
from .engine import TrainConfig, smooth, train
from .errors import ConfigError, DataError
from .grid import create_initial_map
from .metrics import label_neurons, quality_report
from .snapshot import export_snapshot_json

SUMMARY_METRICS = [
    "qe_train",
    "te_train",
    "qe_test",
    "te_test",
    "neurons",
    "train_epochs",
    "smooth_epochs",
    "dead_fraction_train",
]


@dataclass
class ExperimentSpec:
    """One benchmark definition: dataset, split protocol, repetitions, config.

    ``dataset`` is a CSV path or the generator id "cluster". Features are
    used raw unless ``normalize`` turns on per-feature min-max scaling
    (fitted on each run's training split).
    """

    dataset: str
    runs: int = 20
    train_frac: float = 0.6
    test_frac: float = 0.2
    val_frac: float = 0.2
    label_column: int | str | None = None
    normalize: bool = False
    output_dir: str = "bench-out"
    config: TrainConfig = field(default_factory=TrainConfig)

    def validate(self) -> None:
        if not self.dataset:
            raise ConfigError("experiment needs a dataset path or generator id")
        if self.runs < 1:
            raise ConfigError("runs must be at least 1")
        fracs = (self.train_frac, self.test_frac, self.val_frac)
        if any(f <= 0.0 for f in fracs):
            raise ConfigError(f"split fractions must all be positive, got {fracs}")
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise ConfigError(f"split fractions must sum to 1, got {sum(fracs)}")
        self.config.validate()


def load_dataset(name: str, label_column=None, seed: int = 0) -> Dataset:
    """Resolve a dataset reference: the "cluster" generator id or a CSV path."""
    if name == "cluster":
        return generate_cluster_dataset(seed)
    return load_csv(name, label_column=label_column)


def _parse_scalar(raw: str, type_hint: str):
    raw = raw.strip()
    if "None" in type_hint and raw.lower() in ("none", "null"):
        return None
    if "bool" in type_hint:
        if raw.lower() in ("true", "yes", "1"):
            return True
        if raw.lower() in ("false", "no", "0"):
            return False
        raise ConfigError(f"expected a boolean, got {raw!r}")
    if "int" in type_hint and "str" not in type_hint:
        return int(raw)
    if "float" in type_hint:
        return float(raw)
    return raw


def read_config_file(path) -> dict:
    """Parse a flat key = value file (# starts a comment) into a dict of
    strings."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}: line {lineno}: expected key = value")
        key, raw = line.split("=", 1)
        values[key.strip()] = raw.strip()
    return values


_SPEC_FIELDS = {f.name: f for f in dataclasses.fields(ExperimentSpec) if f.name != "config"}
_CONFIG_FIELDS = {f.name: f for f in dataclasses.fields(TrainConfig)}


def apply_config_values(values: dict, config: TrainConfig) -> TrainConfig:
    """Overlay flat key/value pairs (TrainConfig field names) onto a config."""
    updates = {}
    for key, raw in values.items():
        if key not in _CONFIG_FIELDS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            updates[key] = _parse_scalar(raw, str(_CONFIG_FIELDS[key].type))
        except ValueError:
            raise ConfigError(f"bad value for {key}: {raw!r}") from None
    return replace(config, **updates)


def experiment_spec_from_file(path) -> ExperimentSpec:
    """Build an ExperimentSpec from a flat key = value file.

    Keys are ExperimentSpec field names plus TrainConfig field names; unknown
    keys are rejected.
    """
    values = read_config_file(path)
    if "dataset" not in values:
        raise ConfigError(f"{path}: missing required key 'dataset'")
    spec_kwargs = {}
    config_values = {}
    for key, raw in values.items():
        if key == "label_column":
            try:
                spec_kwargs[key] = int(raw)
            except ValueError:
                spec_kwargs[key] = None if raw.lower() in ("none", "null") else raw
        elif key in _SPEC_FIELDS:
            try:
                spec_kwargs[key] = _parse_scalar(raw, str(_SPEC_FIELDS[key].type))
            except ValueError:
                raise ConfigError(f"bad value for {key}: {raw!r}") from None
        elif key in _CONFIG_FIELDS:
            config_values[key] = raw
        else:
            raise ConfigError(f"{path}: unknown key {key!r}")
    spec = ExperimentSpec(config=apply_config_values(config_values, TrainConfig()), **spec_kwargs)
    spec.validate()
    return spec


def _derived_seeds(base_seed: int, run: int) -> tuple[int, int]:
    state = np.random.SeedSequence([int(base_seed), int(run)]).generate_state(2)
    return int(state[0]), int(state[1])


def _minmax_scaled(reference: Dataset, targets: list) -> list:
    lo = reference.patterns.min(axis=0)
    span = reference.patterns.max(axis=0) - lo
    span = np.where(span > 0.0, span, 1.0)
    return [Dataset((ds.patterns - lo) / span, ds.labels) for ds in targets]


def run_single(
    train_data: Dataset,
    test_data: Dataset,
    config: TrainConfig,
    sizing: Dataset | None = None,
    epoch_hook=None,
) -> dict:
    """One paired run: adaptive map and baseline from the same initial map.

    Returns a dict with both trained maps, their reports and QualityReports
    on the train and test splits.
    """
    amsom_map, cfg = create_initial_map(train_data, config, sizing=sizing)
    som_map = amsom_map.copy()

    def hook(phase):
        if epoch_hook is None:
            return None
        mapping = {"train": amsom_map, "smooth": amsom_map, "baseline": som_map}
        return lambda report: epoch_hook(mapping[phase], report, phase)

    _, train_reports = train(train_data, amsom_map, cfg, progress=hook("train"))
    _, smooth_reports = smooth(train_data, amsom_map, cfg, progress=hook("smooth"))
    _, som_reports = train_batch_som(train_data, som_map, cfg, progress=hook("baseline"))

    return {
        "config": cfg,
        "amsom_map": amsom_map,
        "som_map": som_map,
        "amsom": {
            "train_epochs": len(train_reports),
            "smooth_epochs": len(smooth_reports),
            "quality_train": quality_report(train_data, amsom_map),
            "quality_test": quality_report(test_data, amsom_map),
        },
        "som": {
            "train_epochs": len(som_reports),
            "smooth_epochs": 0,
            "quality_train": quality_report(train_data, som_map),
            "quality_test": quality_report(test_data, som_map),
        },
    }


def _run_record(algorithm: str, run: int, result: dict) -> dict:
    part = result[algorithm]
    qt = part["quality_train"]
    qtest = part["quality_test"]
    map_key = f"{algorithm}_map"
    return {
        "algorithm": algorithm,
        "run": run,
        "qe_train": qt.qe,
        "te_train": qt.te,
        "qe_test": qtest.qe,
        "te_test": qtest.te,
        "neurons": result[map_key].m,
        "train_epochs": part["train_epochs"],
        "smooth_epochs": part["smooth_epochs"],
        "dead_fraction_train": qt.dead_unit_fraction,
    }


def _aggregate(records: list) -> dict:
    summary = {}
    for algorithm in ("amsom", "som"):
        rows = [r for r in records if r["algorithm"] == algorithm]
        stats = {}
        for metric in SUMMARY_METRICS:
            values = np.array([r[metric] for r in rows], dtype=np.float64)
            stats[metric] = {"mean": float(values.mean()), "std": float(values.std())}
        summary[algorithm] = stats
    return summary


def _write_summary(out: Path, summary: dict, runs_done: int, failed: str | None) -> None:
    with open(out / "summary.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["algorithm", "metric", "mean", "std"])
        for algorithm in ("amsom", "som"):
            for metric in SUMMARY_METRICS:
                stat = summary[algorithm][metric]
                writer.writerow([algorithm, metric, repr(stat["mean"]), repr(stat["std"])])

    lines = [f"runs: {runs_done}"]
    if failed:
        lines.append(f"FAILED: {failed} (partial results)")
    header = f"{'metric':<22}{'amsom mean':>14}{'amsom std':>12}{'som mean':>14}{'som std':>12}"
    lines += [header, "-" * len(header)]
    for metric in SUMMARY_METRICS:
        a = summary["amsom"][metric]
        s = summary["som"][metric]
        lines.append(
            f"{metric:<22}{a['mean']:>14.6f}{a['std']:>12.6f}{s['mean']:>14.6f}{s['std']:>12.6f}"
        )
    (out / "summary.txt").write_text("\n".join(lines) + "\n")


def _write_runs_csv(out: Path, records: list) -> None:
    columns = ["algorithm", "run"] + SUMMARY_METRICS
    with open(out / "runs.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for record in records:
            writer.writerow([record[c] if c in ("algorithm", "run") else repr(float(record[c])) for c in columns])


def run_experiment(spec: ExperimentSpec, epoch_hook=None) -> dict:
    """Execute all runs of an experiment and write the output files.

    Each run derives its own seeds from (config.seed, run index), re-shuffles
    the split, and trains the adaptive map and the baseline from the same
    initial map on the same training split. Outputs under spec.output_dir:
    run_XX_amsom.json / run_XX_som.json snapshots, runs.csv, summary.csv and
    summary.txt. Two invocations with the same spec produce identical bytes.

    A failing run aborts the experiment: partial aggregates are written with
    a FAILED marker and the error re-raised.
    """
    spec.validate()
    full = load_dataset(spec.dataset, spec.label_column, seed=spec.config.seed)
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    fractions = (spec.train_frac, spec.test_frac, spec.val_frac)

    records: list = []
    failed = None
    try:
        for run in range(spec.runs):
            split_seed, model_seed = _derived_seeds(spec.config.seed, run)
            train_data, test_data, _ = split_dataset(full, fractions, split_seed)
            sizing = full
            if spec.normalize:
                train_data, test_data, sizing = _minmax_scaled(
                    train_data, [train_data, test_data, full]
                )
            run_cfg = replace(spec.config, seed=model_seed)
            result = run_single(
                train_data, test_data, run_cfg, sizing=sizing, epoch_hook=epoch_hook
            )

            for algorithm in ("amsom", "som"):
                records.append(_run_record(algorithm, run, result))
                map_state = result[f"{algorithm}_map"]
                labels = (
                    label_neurons(train_data, map_state)
                    if train_data.labels is not None
                    else None
                )
                part = result[algorithm]
                export_snapshot_json(
                    map_state,
                    out / f"run_{run:02d}_{algorithm}.json",
                    labels=labels,
                    config=dataclasses.asdict(result["config"]),
                    metrics={
                        "qe_train": part["quality_train"].qe,
                        "te_train": part["quality_train"].te,
                        "qe_test": part["quality_test"].qe,
                        "te_test": part["quality_test"].te,
                        "neurons": map_state.m,
                        "train_epochs": part["train_epochs"],
                        "smooth_epochs": part["smooth_epochs"],
                    },
                )
    except Exception as exc:
        failed = f"run {len(records) // 2}: {exc}"
        if records:
            summary = _aggregate(records)
            _write_runs_csv(out, records)
            _write_summary(out, summary, len(records) // 2, failed)
        raise

    summary = _aggregate(records)
    _write_runs_csv(out, records)
    _write_summary(out, summary, spec.runs, None)
    return summary
