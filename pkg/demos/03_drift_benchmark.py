#!/usr/bin/env python3
"""Desk-scale benchmark: five learners on the four synthetic drift
streams, mean cumulative loss over 10 seeds.

Writes benchmark_summary.csv and benchmark_curves.gp (a gnuplot script;
run `gnuplot -p benchmark_curves.gp` if you want the picture). The
full-scale version of this experiment lives in the acceptance suite and
behind `driftlearn run --full`.
"""

from driftlearn import harness
from driftlearn.cli import _plot_script
from driftlearn.datagen import DatasetSpec

T, D, SEEDS = 200, 4, list(range(10))
ALGOS = [
    ("laser", {"b": 1.0, "c": 100.0}),
    ("aar", {"b": 1.0}),
    ("nlms", {"eta": 0.5, "eps": 1e-6}),
    ("crrls", {"reset_period": 50, "b_reset": 1.0}),
    ("hinf", {"a": 8.0, "b": 500.0, "c": 500.0}),
]

all_rows = []
for kind in "ABCD":
    dataset = DatasetSpec(kind=kind, T=T, d=D, seed=0)
    reports = harness.experiment(dataset, ALGOS, seeds=SEEDS)
    rows = harness.aggregate(reports)
    finals = {r.algo_id: r for r in rows if r.t == T}
    print(f"kind {kind}  (T={T}, d={D}, {len(SEEDS)} seeds)")
    for algo, row in sorted(finals.items(), key=lambda kv: kv[1].mean_cumloss):
        print(f"  {algo:<6} final mean cumloss {row.mean_cumloss:10.1f}  "
              f"(stderr {row.stderr:7.1f})")
    if kind == "A":
        all_rows = rows

harness.write_summary_csv(all_rows, "benchmark_summary.csv")
with open("benchmark_curves.gp", "w") as fh:
    fh.write(_plot_script("benchmark_summary.csv", sorted({r.algo_id for r in all_rows})))
print("\nwrote benchmark_summary.csv and benchmark_curves.gp (kind A curves)")
