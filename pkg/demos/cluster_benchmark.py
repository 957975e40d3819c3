"""
Paired benchmark on a synthetic four-blob dataset
=================================================

Runs the seeded experiment protocol: each run splits the data, trains the
moving map and a fixed-lattice map from the same starting point, and scores
both on the held-out test split. Everything lands in an output directory as
CSV and JSON so a rerun with the same spec is byte for byte identical.
"""

from pathlib import Path

from amsom import ExperimentSpec, TrainConfig, run_experiment

HERE = Path(__file__).resolve().parent
OUT = HERE / "out" / "cluster-bench"

# --- Describe the experiment ---
# Three runs keep this quick; the shipped acceptance protocol uses twenty.
spec = ExperimentSpec(
    dataset="cluster",
    runs=3,
    output_dir=str(OUT),
    config=TrainConfig(seed=0),
)

# --- Run it ---
summary = run_experiment(spec)

# --- Compare the two algorithms ---
print()
print(f"{'metric':<20}{'moving map':>14}{'fixed lattice':>16}")
for metric in ("qe_test", "te_test", "neurons", "train_epochs"):
    a = summary["amsom"][metric]["mean"]
    s = summary["som"][metric]["mean"]
    print(f"{metric:<20}{a:>14.4f}{s:>16.4f}")
print()
print(f"per-run table: {OUT / 'runs.csv'}")
print(f"aggregates:    {OUT / 'summary.csv'}")
