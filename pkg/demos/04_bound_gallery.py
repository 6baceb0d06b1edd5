#!/usr/bin/env python3
"""Every guarantee evaluated on live runs, with its measured slack.

Four exhibits:
  1. the drift-aware learner's comparator bound, log-det control, and
     eigenvalue cap on a noisy switching stream;
  2. the same learner with c tuned from the measured drift (low regime),
     which activates the closed-form loss ceiling;
  3. the high-drift tuning on a deliberately violent stream;
  4. the robust filter's guarantee plus its prediction-loss ceilings.
"""

import math

from driftlearn import harness
from driftlearn.datagen import DatasetSpec, gen_stream


def show(title, report):
    print(f"\n== {title} ==  (final cumloss {report.L_T:.1f})")
    for b in report.bound_checks:
        flag = "ok " if b.holds else "BAD"
        print(f"  [{flag}] {b.name:<28} lhs={b.lhs:12.3f}  rhs={b.rhs:12.3f}  "
              f"slack={b.slack:12.3f}")


stream = gen_stream(DatasetSpec(kind="D", T=200, d=4, seed=1))
show("drift learner, fixed c", harness.run_learner(
    "laser", {"b": 1.0, "c": 100.0}, stream))

stream = gen_stream(DatasetSpec(kind="A", T=200, d=4, seed=1))
show("drift learner, low-regime tuned c", harness.run_learner(
    "laser", {"tuned_regime": "low", "eps_ratio": 0.1}, stream))

violent = gen_stream(DatasetSpec(kind="A", T=200, d=2, seed=1, rotation_rate=math.pi))
show("drift learner, high-regime tuned c", harness.run_learner(
    "laser", {"tuned_regime": "high", "eps_ratio": 0.1}, violent))

stream = gen_stream(DatasetSpec(kind="C", T=200, d=4, seed=1))
show("robust filter", harness.run_learner(
    "hinf", {"a": 8.0, "b": 500.0, "c": 500.0}, stream))

print("\nEvery slack above must be non-negative; the verify suites check "
      "this over kinds A-D and 20 seeds.")
