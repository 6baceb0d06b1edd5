"""Independent brute-force and analytic verifiers.

Everything in this module is deliberately boring: the brute-force
minimizer assembles the full stacked normal equations and solves them
densely, the certificate evaluators build the exact matrices and take
eigenvalues. These are the trusted references against which the fast
recursions are certified.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import linalg
from .errors import (
    DomainError,
    LengthMismatch,
    RegimeViolation,
    SingularSystem,
    TooLarge,
)

BRUTE_BUDGET = 2000  # max T*d stacked variables for the dense solve


@dataclass(frozen=True)
class ComparatorSequence:
    """A reference sequence u_1..u_T with its total squared drift.

    V = sum_{t<T} ||u_{t+1} - u_t||^2 and nu = V/T. Stored values must
    match a recomputation from us; see `drift_of`.
    """

    us: np.ndarray  # (T, d)
    V: float
    nu: float

    def __post_init__(self):
        us = np.asarray(self.us, dtype=float)
        if us.ndim != 2:
            raise ValueError(f"us must be (T, d), got shape {us.shape}")
        object.__setattr__(self, "us", us)

    @property
    def T(self) -> int:
        return self.us.shape[0]

    @property
    def dim(self) -> int:
        return self.us.shape[1]

    def check(self, tol: float = 1e-12) -> None:
        """Assert the stored drift matches a recomputation."""
        v = drift_of(self.us)
        if abs(v - self.V) > tol * max(1.0, abs(v)):
            raise ValueError(f"stored V={self.V} but recomputed {v}")


def drift_of(us: np.ndarray) -> float:
    """Total squared drift of a (T, d) sequence."""
    us = np.asarray(us, dtype=float)
    if us.shape[0] < 2:
        return 0.0
    return float(np.sum((us[1:] - us[:-1]) ** 2))


def comparator_from_us(us) -> ComparatorSequence:
    us = np.asarray(us, dtype=float)
    V = drift_of(us)
    return ComparatorSequence(us=us, V=V, nu=V / us.shape[0])


def comparator_loss(comp: ComparatorSequence, xs, ys) -> float:
    """Cumulative squared loss of the reference sequence on the stream."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) != comp.T or len(ys) != comp.T:
        raise LengthMismatch("stream and comparator lengths differ")
    preds = np.einsum("td,td->t", xs, comp.us)
    return float(np.sum((ys - preds) ** 2))


def tracking_cost(us, xs, ys, b: float, c: float) -> float:
    """Direct evaluation of the penalized offline objective

        b ||u_1||^2 + c sum ||u_{s+1} - u_s||^2 + sum (y_s - u_s . x_s)^2
    """
    us = np.asarray(us, dtype=float)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    preds = np.einsum("td,td->t", xs, us)
    return float(
        b * us[0] @ us[0] + c * drift_of(us) + np.sum((ys - preds) ** 2)
    )


def brute_min_cost(xs, ys, b: float, c: float) -> tuple[float, ComparatorSequence]:
    """Exact minimum of the tracking cost over all sequences (u_1..u_T).

    Assembles the block-tridiagonal normal equations of the strictly
    convex stacked quadratic and solves them with a dense Cholesky
    factorization. Returns (optimal value, argmin).
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 2 or len(xs) != len(ys):
        raise LengthMismatch("xs must be (T, d) aligned with ys")
    T, d = xs.shape
    if T * d > BRUTE_BUDGET:
        raise TooLarge(f"T*d = {T * d} exceeds dense budget {BRUTE_BUDGET}")
    if not (b > 0 and c > 0 and math.isfinite(c)):
        raise ValueError(f"need finite b, c > 0, got b={b}, c={c}")

    n = T * d
    H = np.zeros((n, n))
    g = np.zeros(n)
    I = np.eye(d)
    for s in range(T):
        blk = slice(s * d, (s + 1) * d)
        H[blk, blk] += np.outer(xs[s], xs[s])
        g[blk] = ys[s] * xs[s]
    H[0:d, 0:d] += b * I
    for s in range(T - 1):
        lo = slice(s * d, (s + 1) * d)
        hi = slice((s + 1) * d, (s + 2) * d)
        H[lo, lo] += c * I
        H[hi, hi] += c * I
        H[lo, hi] -= c * I
        H[hi, lo] -= c * I

    try:
        u = scipy.linalg.cho_solve(
            scipy.linalg.cho_factor(H, lower=True, check_finite=False), g
        )
    except scipy.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    value = float(ys @ ys - g @ u)
    return value, comparator_from_us(u.reshape(T, d))


def tracking_cost_gradient(us, xs, ys, b: float, c: float) -> np.ndarray:
    """Gradient of the tracking cost at a stacked candidate (T, d)."""
    us = np.asarray(us, dtype=float)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    T, d = us.shape
    grad = np.zeros((T, d))
    preds = np.einsum("td,td->t", xs, us)
    grad += 2.0 * (preds - ys)[:, None] * xs
    grad[0] += 2.0 * b * us[0]
    diffs = us[1:] - us[:-1]
    grad[:-1] += -2.0 * c * diffs
    grad[1:] += 2.0 * c * diffs
    return grad.reshape(-1)


# ---------------------------------------------------------------------------
# Per-step regret certificate
# ---------------------------------------------------------------------------

def regret_certificate_gap(D_prev: np.ndarray, x, c: float) -> float:
    """lambda_max of the per-step remainder matrix

        D' Dn^{-1} x x^T Dn^{-1} D'  -  D_prev^{-1}
          +  D' (Dn^{-1} D' + c^{-1} I)

    with D' = (I + c^{-1} D_prev)^{-1} and Dn the propagated matrix plus
    x x^T. Negative semidefiniteness of this matrix is what collapses
    each round's regret increment to y^2 x^T Dn^{-1} x, so the returned
    value must never exceed ~0.
    """
    D_prev = linalg.as_matrix(D_prev)
    d = D_prev.shape[0]
    x = linalg.as_vector(x, d)
    I = np.eye(d)
    Dp = linalg.symmetrize(linalg.spd_solve_matrix(I + D_prev / c, I))  # (I + c^{-1}D)^{-1}
    Dn = linalg.rank_one_update(
        linalg.symmetrize(linalg.spd_solve_matrix(I + D_prev / c, D_prev)), x
    )
    Dn_inv = linalg.spd_inverse(Dn)
    D_prev_inv = linalg.spd_inverse(D_prev)
    M = (
        Dp @ Dn_inv @ np.outer(x, x) @ Dn_inv @ Dp
        - D_prev_inv
        + Dp @ (Dn_inv @ Dp + I / c)
    )
    return linalg.eig_extremes(linalg.symmetrize(M))[1]


def regret_certificate_exact(D_prev: np.ndarray, x, c: float) -> np.ndarray:
    """Closed form of the same remainder matrix:

        -q * (D_prev^{-1} x)(D_prev^{-1} x)^T / (1 + q)^2,
        q = x^T (D_prev^{-1} + c^{-1} I) x

    a manifestly negative-semidefinite rank-one matrix. Used as a second,
    independent route to the certificate.
    """
    D_prev = linalg.as_matrix(D_prev)
    d = D_prev.shape[0]
    x = linalg.as_vector(x, d)
    Dinv_x = linalg.spd_solve(D_prev, x)
    q = float(x @ Dinv_x + (x @ x) / c)
    return -q * np.outer(Dinv_x, Dinv_x) / (1.0 + q) ** 2


# ---------------------------------------------------------------------------
# Cumulative-loss bound vs a comparator
# ---------------------------------------------------------------------------

def cumloss_bound(
    comparator: ComparatorSequence,
    xs,
    ys,
    b: float,
    c: float,
    Y: float,
    quad_trace,
) -> float:
    """RHS of the learner's cumulative-loss bound against a comparator:

        b ||u_1||^2 + c V + L_T({u_t}) + Y^2 sum_t x_t^T D_t^{-1} x_t

    quad_trace is the per-step x_t^T D_t^{-1} x_t recorded by the run.
    Valid whenever every |y_t| <= Y.
    """
    quad_trace = np.asarray(quad_trace, dtype=float)
    if len(quad_trace) != comparator.T:
        raise LengthMismatch("quad_trace length differs from comparator")
    u1 = comparator.us[0]
    # c*V reads 0 at V=0 even for the stationary sentinel c = inf
    drift_term = c * comparator.V if comparator.V > 0.0 else 0.0
    return float(
        b * (u1 @ u1)
        + drift_term
        + comparator_loss(comparator, xs, ys)
        + Y * Y * np.sum(quad_trace)
    )


def logdet_bound_sides(quad_trace, D_traj, b: float, c: float) -> tuple[float, float]:
    """Both sides of the log-det inequality

        sum_t x_t^T D_t^{-1} x_t  <=  ln|D_T / b| + c^{-1} sum_t Tr(D_{t-1})

    D_traj must be the full trajectory [D_0, D_1, ..., D_T].
    """
    quad_trace = np.asarray(quad_trace, dtype=float)
    T = len(quad_trace)
    if len(D_traj) != T + 1:
        raise LengthMismatch(f"need T+1 = {T + 1} matrices, got {len(D_traj)}")
    d = np.asarray(D_traj[0]).shape[0]
    lhs = float(np.sum(quad_trace))
    rhs = linalg.logdet(np.asarray(D_traj[-1])) - d * math.log(b)
    if math.isfinite(c):
        rhs += sum(float(np.trace(np.asarray(D_traj[t]))) for t in range(T)) / c
    return lhs, float(rhs)


# ---------------------------------------------------------------------------
# Eigenvalue growth control
# ---------------------------------------------------------------------------

def eigenvalue_step_map(lam: float, beta: float, xsq: float, gammasq: float) -> float:
    """One step of the scalar eigenvalue recursion:

        f(lam) = lam * beta / (lam + beta) + xsq

    for lam, beta >= 0 and 0 <= xsq <= gammasq. The suite checks
      (1) f <= beta + gammasq
      (2) f <= lam + gammasq
      (3) f <= max(lam, (3 gammasq + sqrt(gammasq^2 + 4 gammasq beta)) / 2)
    """
    if lam < 0 or beta < 0 or xsq < 0 or gammasq < 0:
        raise DomainError("all inputs must be non-negative")
    if xsq > gammasq:
        raise DomainError(f"xsq={xsq} exceeds gammasq={gammasq}")
    if lam + beta == 0.0:
        return float(xsq)
    return float(lam * beta / (lam + beta) + xsq)


def eig_cap(x_norm_sq_bound: float, b: float, c: float) -> float:
    """Ceiling on every eigenvalue of D_t (t >= 1) when ||x_s||^2 <= X^2:

        max{ (3X^2 + sqrt(X^4 + 4X^2 c)) / 2,  b + X^2 }

    Infinite for the stationary sentinel c = inf (D then grows without
    a uniform cap).
    """
    Xsq = x_norm_sq_bound
    if math.isinf(c):
        return math.inf
    return max(0.5 * (3.0 * Xsq + math.sqrt(Xsq * Xsq + 4.0 * Xsq * c)), b + Xsq)


# ---------------------------------------------------------------------------
# Drift-tuned c and the corresponding closed-form bounds
# ---------------------------------------------------------------------------

class DriftRegime(enum.Enum):
    LOW = "low"
    HIGH = "high"


@dataclass(frozen=True)
class BoundInputs:
    """Scalars feeding the tuned-c formulas and closed-form bounds.

    Y bounds |y_t|, X bounds ||x_t||. mu, M and eps_ratio are always
    derived from (b, c, X), never stored, so they cannot drift out of
    sync with the primal parameters.
    """

    Y: float
    X: float
    b: float
    c: float
    d: int
    T: int

    def __post_init__(self):
        if self.Y <= 0 or self.X <= 0:
            raise DomainError("Y and X must be positive")
        if self.b <= 0 or self.c <= 0:
            raise DomainError("b and c must be positive")
        if self.d < 1 or self.T < 1:
            raise DomainError("d and T must be positive integers")

    @property
    def eps_ratio(self) -> float:
        """epsilon with b = epsilon * c."""
        return self.b / self.c

    @property
    def mu(self) -> float:
        Xsq = self.X * self.X
        return max(9.0 / 8.0 * Xsq, (self.b + Xsq) ** 2 / (8.0 * Xsq))

    @property
    def M(self) -> float:
        Xsq = self.X * self.X
        return max(3.0 * Xsq, self.b + Xsq)


def low_drift_threshold(inputs: BoundInputs) -> float:
    """Drift must stay below T * sqrt(2) Y^2 d X / mu^{3/2} for the
    low-drift tuning."""
    return inputs.T * math.sqrt(2.0) * inputs.Y**2 * inputs.d * inputs.X / inputs.mu**1.5


def high_drift_threshold(inputs: BoundInputs) -> float:
    """Drift must exceed T Y^2 d M / mu^2 for the high-drift tuning."""
    return inputs.T * inputs.Y**2 * inputs.d * inputs.M / inputs.mu**2


def tuned_c(regime: DriftRegime, inputs: BoundInputs, V: float) -> float:
    """Drift-tuned value of c.

    LOW:  c = (sqrt(2) T Y^2 d X / V)^{2/3}, valid when V <= low threshold.
    HIGH: c = sqrt(Y^2 d M T / V),           valid when V >= high threshold.

    V = 0 has no finite tuning; use the stationary sentinel c = inf.
    """
    low_thr = low_drift_threshold(inputs)
    high_thr = high_drift_threshold(inputs)
    if V <= 0:
        raise RegimeViolation(
            "V = 0 admits no finite tuning; use c = inf (stationary learner). "
            f"Thresholds: low <= {low_thr:.6g}, high >= {high_thr:.6g}"
        )
    if regime is DriftRegime.LOW:
        if V > low_thr:
            raise RegimeViolation(
                f"V = {V:.6g} exceeds low-drift threshold {low_thr:.6g} "
                f"(high-drift threshold is {high_thr:.6g})"
            )
        return (math.sqrt(2.0) * inputs.T * inputs.Y**2 * inputs.d * inputs.X / V) ** (2.0 / 3.0)
    if regime is DriftRegime.HIGH:
        if V < high_thr:
            raise RegimeViolation(
                f"V = {V:.6g} below high-drift threshold {high_thr:.6g} "
                f"(low-drift threshold is {low_thr:.6g})"
            )
        return math.sqrt(inputs.Y**2 * inputs.d * inputs.M * inputs.T / V)
    raise ValueError(f"unknown regime {regime!r}")


def tuned_params(
    regime: DriftRegime, T: int, d: int, Y: float, X: float, V: float, eps_ratio: float
) -> BoundInputs:
    """Self-consistent (b, c) for a tuned run: compute c from the regime
    formula (which needs no b), set b = eps_ratio * c, then validate the
    regime precondition with the resulting mu/M.
    """
    if not 0.0 < eps_ratio < 1.0:
        raise DomainError(f"eps_ratio must lie in (0, 1), got {eps_ratio}")
    if V <= 0:
        raise RegimeViolation("V = 0 admits no finite tuning; use c = inf")
    if regime is DriftRegime.LOW:
        c = (math.sqrt(2.0) * T * Y**2 * d * X / V) ** (2.0 / 3.0)
    elif regime is DriftRegime.HIGH:
        # M depends on b = eps * c: iterate the scalar fixed point.
        c = math.sqrt(Y**2 * d * max(3.0 * X * X, X * X) * T / V)
        for _ in range(100):
            M = max(3.0 * X * X, eps_ratio * c + X * X)
            c_next = math.sqrt(Y**2 * d * M * T / V)
            if abs(c_next - c) <= 1e-13 * max(1.0, c):
                c = c_next
                break
            c = c_next
    else:
        raise ValueError(f"unknown regime {regime!r}")
    inputs = BoundInputs(Y=Y, X=X, b=eps_ratio * c, c=c, d=d, T=T)
    tuned = tuned_c(regime, inputs, V)  # re-validates the precondition
    if abs(tuned - c) > 1e-9 * max(1.0, c):
        raise RegimeViolation(
            f"tuning did not reach a fixed point: c={c:.6g} vs {tuned:.6g}"
        )
    return inputs


def drift_tuned_bound(
    regime: DriftRegime,
    inputs: BoundInputs,
    V: float,
    u1_norm_sq: float,
    comparator_loss_value: float,
    logdet_DT_over_b: float,
) -> float:
    """Closed-form cumulative-loss ceiling for a tuned run.

    LOW:  b||u_1||^2 + 3 (sqrt(2) Y^2 d X)^{2/3} T^{2/3} V^{1/3}
          + eps/(1-eps) Y^2 d + L_T({u_t}) + Y^2 ln|D_T / b|
    HIGH: same with the drift term replaced by 2 sqrt(Y^2 d T M V).
    """
    eps = inputs.eps_ratio
    if not 0.0 < eps < 1.0:
        raise RegimeViolation(f"requires b = eps*c with eps in (0,1), got {eps}")
    base = (
        inputs.b * u1_norm_sq
        + eps / (1.0 - eps) * inputs.Y**2 * inputs.d
        + comparator_loss_value
        + inputs.Y**2 * logdet_DT_over_b
    )
    if regime is DriftRegime.LOW:
        if V > low_drift_threshold(inputs):
            raise RegimeViolation("low-drift bound requested outside its regime")
        drift_term = (
            3.0
            * (math.sqrt(2.0) * inputs.Y**2 * inputs.d * inputs.X) ** (2.0 / 3.0)
            * inputs.T ** (2.0 / 3.0)
            * V ** (1.0 / 3.0)
        )
    elif regime is DriftRegime.HIGH:
        if V < high_drift_threshold(inputs):
            raise RegimeViolation("high-drift bound requested outside its regime")
        drift_term = 2.0 * math.sqrt(inputs.Y**2 * inputs.d * inputs.T * inputs.M * V)
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return float(base + drift_term)
