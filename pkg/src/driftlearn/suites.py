"""Numerical certification suites.

Each suite hammers one recursion or inequality with randomized or
exhaustive cases and reports the worst margin observed. They are run by
``driftlearn verify`` and by the test suite; a positive ``worst`` beyond
the tolerance means a genuine violation.

Desk-scale defaults (T=200, d=4, 20 seeds) keep every suite in CI
territory; the certification hyperparameters below are documented
defaults under which every inequality is expected to hold on the
synthetic benchmarks.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import harness, laser, linalg, oracle
from .datagen import DatasetSpec, gen_stream

DESK_T = 200
DESK_D = 4
DESK_SEEDS = tuple(range(20))

# documented certification hyperparameters (see README)
LASER_CERT = {"b": 1.0, "c": 100.0, "track_f": True}
HINF_CERT = {"a": 8.0, "b": 500.0, "c": 500.0}
TUNED_EPS = 0.1
HIGH_DRIFT_SPEC = dict(kind="A", T=DESK_T, d=2, rotation_rate=math.pi)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    worst: float  # worst margin observed; > tol means violation
    tol: float
    ok: bool
    note: str = ""

    def line(self) -> str:
        status = "ok" if self.ok else "VIOLATION"
        out = (
            f"[{status}] {self.name}: {self.cases} cases, "
            f"worst={self.worst:.3e} (tol {self.tol:.1e})"
        )
        if self.note:
            out += f" [{self.note}]"
        return out


def _result(name, cases, worst, tol, note=""):
    return SuiteResult(name, cases, worst, tol, worst <= tol, note)


def oracle_equivalence_suite(trials: int = 500, seed: int = 0) -> SuiteResult:
    """Recursive offline optimum vs the brute-force stacked solve.

    Random streams with T <= 20, d <= 5, 0.1 <= b < c <= 10, standard
    normal inputs and labels; reports the max relative gap."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        T = int(rng.integers(1, 21))
        d = int(rng.integers(1, 6))
        lo, hi = np.sort(rng.uniform(0.1, 10.0, size=2))
        if hi - lo < 1e-6:
            hi = lo + 1e-3
        xs = rng.standard_normal((T, d))
        ys = rng.standard_normal(T)
        params = laser.LaserParams(b=float(lo), c=float(hi), track_f=True)
        state = laser.laser_init(params, d)
        for t in range(T):
            state = laser.laser_update(state, xs[t], ys[t])
        value, _ = oracle.brute_min_cost(xs, ys, float(lo), float(hi))
        gap = abs(laser.laser_min_cost(state) - value) / (1.0 + abs(value))
        worst = max(worst, gap)
    return _result("offline-optimum oracle equivalence", trials, worst, 1e-8)


def certificate_suite(draws: int = 1000, seed: int = 0, d_max: int = 6) -> SuiteResult:
    """Max eigenvalue of the per-step regret remainder matrix over random
    (D, x, c) draws; must stay at or below zero."""
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for _ in range(draws):
        d = int(rng.integers(1, d_max + 1))
        M = rng.standard_normal((d, d))
        D = M @ M.T + rng.uniform(0.05, 2.0) * np.eye(d)
        x = rng.standard_normal(d) * rng.uniform(0.1, 3.0)
        c = float(np.exp(rng.uniform(np.log(0.1), np.log(100.0))))
        worst = max(worst, oracle.regret_certificate_gap(D, x, c))
    return _result("per-step regret certificate", draws, worst, 1e-10)


def scalar_map_suite(n_lam: int = 25, n_beta: int = 25, n_xsq: int = 6) -> SuiteResult:
    """Grid check of the three ceilings on the scalar eigenvalue map."""
    worst = -math.inf
    cases = 0
    for gammasq in (0.5, 1.0, 4.0):
        for lam in np.linspace(0.0, 100.0, n_lam):
            for beta in np.linspace(0.0, 100.0, n_beta):
                for xsq in np.linspace(0.0, gammasq, n_xsq):
                    f = oracle.eigenvalue_step_map(lam, beta, xsq, gammasq)
                    cap3 = max(
                        lam, 0.5 * (3.0 * gammasq + math.sqrt(gammasq**2 + 4.0 * gammasq * beta))
                    )
                    worst = max(
                        worst,
                        f - (beta + gammasq),
                        f - (lam + gammasq),
                        f - cap3,
                    )
                    cases += 1
    return _result("scalar eigenvalue-map ceilings", cases, worst, 1e-12)


def _desk_specs(kinds="ABCD", T=DESK_T, d=DESK_D, seeds=DESK_SEEDS):
    return [DatasetSpec(kind=k, T=T, d=d, seed=s) for k in kinds for s in seeds]


def _laser_trajectory(stream, params: dict):
    lp = laser.LaserParams(
        b=float(params["b"]), c=float(params["c"]), track_f=bool(params.get("track_f", False))
    )
    state = laser.laser_init(lp, stream.dim)
    D_traj = [state.D]
    quads = np.empty(stream.T)
    yhats = np.empty(stream.T)
    for t in range(stream.T):
        yhat, next_D = laser.laser_predict(state, stream.xs[t])
        state = laser.laser_update(state, stream.xs[t], stream.ys[t], next_D=next_D)
        yhats[t] = yhat
        quads[t] = state.last_x_quad
        D_traj.append(state.D)
    return lp, yhats, quads, D_traj


def logdet_trajectory_suite(
    kinds="ABCD", T=DESK_T, d=DESK_D, seeds=DESK_SEEDS, params=LASER_CERT
) -> SuiteResult:
    """Prefix log-det inequality at every step of every desk trajectory."""
    worst = -math.inf
    cases = 0
    for spec in _desk_specs(kinds, T, d, seeds):
        stream = gen_stream(spec)
        lp, _, quads, D_traj = _laser_trajectory(stream, params)
        lhs = 0.0
        trace_sum = 0.0
        for t in range(stream.T):
            lhs += quads[t]
            trace_sum += float(np.trace(D_traj[t]))
            rhs = linalg.logdet(D_traj[t + 1]) - stream.dim * math.log(lp.b) + trace_sum / lp.c
            worst = max(worst, lhs - rhs)
            cases += 1
    return _result("log-det quad-sum inequality", cases, worst, 1e-9)


def eig_cap_suite(
    kinds="ABCD", T=DESK_T, d=DESK_D, seeds=DESK_SEEDS, params=LASER_CERT
) -> SuiteResult:
    """Per-step eigenvalue ceiling with the running input-norm bound."""
    worst = -math.inf
    cases = 0
    for spec in _desk_specs(kinds, T, d, seeds):
        stream = gen_stream(spec)
        lp, _, _, D_traj = _laser_trajectory(stream, params)
        x_sq_max = 0.0
        for t in range(stream.T):
            x_sq_max = max(x_sq_max, float(stream.xs[t] @ stream.xs[t]))
            lam = linalg.eig_extremes(D_traj[t + 1])[1]
            cap = oracle.eig_cap(x_sq_max, lp.b, lp.c)
            worst = max(worst, lam - cap)
            cases += 1
    return _result("covariance eigenvalue cap", cases, worst, 1e-9)


def comparator_bound_suite(
    kinds="ABCD",
    T=DESK_T,
    d=DESK_D,
    seeds=DESK_SEEDS,
    params=LASER_CERT,
    brute_prefix: int = 20,
) -> SuiteResult:
    """Cumulative-loss bound against both the generating comparator (full
    desk runs) and the brute-force-optimal comparator (short prefixes)."""
    worst = -math.inf
    cases = 0
    for spec in _desk_specs(kinds, T, d, seeds):
        stream = gen_stream(spec)
        lp, yhats, quads, _ = _laser_trajectory(stream, params)
        L_T = float(np.sum((stream.ys - yhats) ** 2))
        rhs = oracle.cumloss_bound(
            stream.truth, stream.xs, stream.ys, lp.b, lp.c, stream.Y_bound, quads
        )
        worst = max(worst, L_T - rhs)
        cases += 1

        # tightest comparator on a short prefix
        n = min(brute_prefix, stream.T)
        xs_p, ys_p = stream.xs[:n], stream.ys[:n]
        _, best = oracle.brute_min_cost(xs_p, ys_p, lp.b, lp.c)
        L_p = float(np.sum((ys_p - yhats[:n]) ** 2))
        Y_p = float(np.max(np.abs(ys_p)))
        rhs_p = oracle.cumloss_bound(best, xs_p, ys_p, lp.b, lp.c, Y_p, quads[:n])
        worst = max(worst, L_p - rhs_p)
        cases += 1
    return _result("comparator cumulative-loss bound", cases, worst, 1e-6)


def tuned_bound_suite(seeds=DESK_SEEDS) -> SuiteResult:
    """Drift-tuned closed-form bounds, low regime (constant-rate stream at
    the desk default rate) and high regime (two-dimensional stream at the
    maximal rotation rate)."""
    worst = -math.inf
    cases = 0
    for seed in seeds:
        spec = DatasetSpec(kind="A", T=DESK_T, d=DESK_D, seed=seed)
        stream = gen_stream(spec)
        report = harness.run_learner(
            "laser", {"tuned_regime": "low", "eps_ratio": TUNED_EPS}, stream
        )
        chk = [b for b in report.bound_checks if b.name == "tuned_low_drift_bound"]
        worst = max(worst, chk[0].lhs - chk[0].rhs)
        cases += 1

        spec = DatasetSpec(seed=seed, **HIGH_DRIFT_SPEC)
        stream = gen_stream(spec)
        report = harness.run_learner(
            "laser", {"tuned_regime": "high", "eps_ratio": TUNED_EPS}, stream
        )
        chk = [b for b in report.bound_checks if b.name == "tuned_high_drift_bound"]
        worst = max(worst, chk[0].lhs - chk[0].rhs)
        cases += 1
    return _result("drift-tuned closed-form bounds", cases, worst, 1e-6)


def hinf_bound_suite(
    kinds="ABCD", T=DESK_T, d=DESK_D, seeds=DESK_SEEDS, params=HINF_CERT
) -> SuiteResult:
    """Robust-filter guarantee and prediction-loss ceilings (alpha grid
    plus the optimized alpha where defined) on every desk run."""
    worst = -math.inf
    cases = 0
    for spec in _desk_specs(kinds, T, d, seeds):
        stream = gen_stream(spec)
        report = harness.run_learner("hinf", dict(params), stream)
        for b in report.bound_checks:
            worst = max(worst, b.lhs - b.rhs)
            cases += 1
    return _result("robust-filter loss bounds", cases, worst, 1e-6)


def bounds_suite(seeds=DESK_SEEDS) -> list[SuiteResult]:
    return [
        comparator_bound_suite(seeds=seeds),
        tuned_bound_suite(seeds=seeds),
        hinf_bound_suite(seeds=seeds),
    ]


SUITE_KEYS = ("oracle", "lemma3", "lemma5", "lemma6", "lemma7", "bounds", "all")


def run_suites(which: str, trials: int | None = None, seed: int = 0) -> list[SuiteResult]:
    """Dispatch for the verify command; `which` is one of SUITE_KEYS."""
    results: list[SuiteResult] = []
    if which in ("oracle", "all"):
        results.append(oracle_equivalence_suite(trials or 500, seed))
    if which in ("lemma3", "all"):
        results.append(certificate_suite(trials or 1000, seed))
    if which in ("lemma5", "all"):
        results.append(logdet_trajectory_suite())
    if which in ("lemma6", "all"):
        results.append(scalar_map_suite())
    if which in ("lemma7", "all"):
        results.append(eig_cap_suite())
    if which in ("bounds", "all"):
        results.extend(bounds_suite())
    if not results:
        raise ValueError(f"unknown suite {which!r}; choose from {SUITE_KEYS}")
    return results
