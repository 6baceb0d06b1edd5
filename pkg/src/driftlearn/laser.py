"""Last-step min-max regressor for drifting linear targets (LASER).

The learner keeps sufficient statistics (D_t, e_t, optional f_t) of the
penalized offline tracking cost

    cost_t(u_1..u_t) = b ||u_1||^2 + c sum_s ||u_{s+1} - u_s||^2
                       + sum_s (y_s - u_s . x_s)^2

and predicts with the last-step min-max optimum. The recursions:

    D_0 = (bc/(c-b)) I,  D_t = (D_{t-1}^{-1} + c^{-1} I)^{-1} + x_t x_t^T
    e_0 = 0,             e_t = (I + c^{-1} D_{t-1})^{-1} e_{t-1} + y_t x_t
    f_0 = 0,             f_t = f_{t-1} - e_{t-1}^T (cI + D_{t-1})^{-1} e_{t-1} + y_t^2

    yhat_t = x_t^T D_t^{-1} (I + c^{-1} D_{t-1})^{-1} e_{t-1}

c = math.inf is a first-class stationary sentinel: every c^{-1} term
vanishes exactly and the learner coincides with the forward ridge
(AAR) recursion, D_0 = b I and D_t = D_{t-1} + x_t x_t^T.

D is propagated by plain SPD solves, one per step: the code is a direct
transcription of the recursions, no Sherman-Morrison shortcuts.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .errors import FNotTracked, InvalidParams


@dataclass(frozen=True)
class LaserParams:
    """Learner hyperparameters: 0 < b < c, with c = math.inf allowed."""

    b: float
    c: float = math.inf
    track_f: bool = False
    clip_bound: float | None = None

    def __post_init__(self):
        if not (self.b > 0 and math.isfinite(self.b)):
            raise InvalidParams(f"b must be a positive finite real, got {self.b}")
        if not self.b < self.c:
            raise InvalidParams(f"requires 0 < b < c, got b={self.b}, c={self.c}")
        if self.clip_bound is not None and not self.clip_bound > 0:
            raise InvalidParams(f"clip_bound must be positive, got {self.clip_bound}")

    @property
    def stationary(self) -> bool:
        return math.isinf(self.c)


@dataclass
class LaserState:
    """Sufficient statistics after t observed rounds.

    last_x_quad records the most recent x_t^T D_t^{-1} x_t for bound
    diagnostics; f is meaningful only when params.track_f is set.
    """

    params: LaserParams
    D: np.ndarray
    e: np.ndarray
    f: float
    t: int
    last_x_quad: float = 0.0

    @property
    def dim(self) -> int:
        return self.e.shape[0]


def clip(x: float, y: float) -> float:
    """sign(x) * min(|x|, y)."""
    return math.copysign(min(abs(x), y), x)


def laser_init(params: LaserParams, d: int) -> LaserState:
    """Fresh state: D = (bc/(c-b)) I (b I when c is infinite), e = 0."""
    if d < 1:
        raise InvalidParams(f"d must be >= 1, got {d}")
    if params.stationary:
        d0 = params.b
    else:
        d0 = params.b * params.c / (params.c - params.b)
    return LaserState(
        params=params,
        D=d0 * np.eye(d),
        e=np.zeros(d),
        f=0.0,
        t=0,
    )


def _blend_with_cap(D: np.ndarray, c: float) -> np.ndarray:
    """(D^{-1} + c^{-1} I)^{-1} = (I + c^{-1} D)^{-1} D, one SPD solve.

    Harmonic blend of D with the cap c*I (eigenvalues map to
    lam*c/(lam+c)); exactly D when c is infinite.
    """
    if math.isinf(c):
        return D.copy()
    d = D.shape[0]
    return linalg.symmetrize(linalg.spd_solve_matrix(np.eye(d) + D / c, D))


def _decay(D: np.ndarray, c: float, e: np.ndarray) -> np.ndarray:
    """(I + c^{-1} D)^{-1} e; exactly e when c is infinite."""
    if math.isinf(c):
        return e.copy()
    d = D.shape[0]
    return linalg.spd_solve(np.eye(d) + D / c, e)


def propagate_D(state: LaserState, x: np.ndarray) -> np.ndarray:
    """Next covariance-like matrix: (D^{-1} + c^{-1} I)^{-1} + x x^T."""
    x = linalg.as_vector(x, state.dim)
    return linalg.rank_one_update(_blend_with_cap(state.D, state.params.c), x)


def laser_predict(state: LaserState, x) -> tuple[float, np.ndarray]:
    """Last-step min-max prediction for input x.

    Returns (yhat, next_D) where next_D is the propagated matrix the
    prediction was computed with; pass it to laser_update to avoid
    recomputing the propagation.
    """
    x = linalg.as_vector(x, state.dim)
    next_D = propagate_D(state, x)
    inner = _decay(state.D, state.params.c, state.e)
    yhat = float(linalg.spd_solve(next_D, x) @ inner)
    if state.params.clip_bound is not None:
        yhat = clip(yhat, state.params.clip_bound)
    return yhat, next_D


def laser_update(state: LaserState, x, y: float, next_D: np.ndarray | None = None) -> LaserState:
    """Commit the round: fold (x, y) into the statistics.

    next_D, if given, must be the matrix returned by laser_predict for
    this same x; when omitted it is recomputed.
    """
    x = linalg.as_vector(x, state.dim)
    if next_D is None:
        next_D = propagate_D(state, x)
    c = state.params.c
    e_next = _decay(state.D, c, state.e) + y * x
    if state.params.track_f:
        if math.isinf(c):
            shrink = 0.0
        else:
            shrink = float(state.e @ linalg.spd_solve(c * np.eye(state.dim) + state.D, state.e))
        f_next = state.f - shrink + y * y
    else:
        f_next = 0.0
    quad = float(x @ linalg.spd_solve(next_D, x))
    return replace(
        state,
        D=next_D,
        e=e_next,
        f=f_next,
        t=state.t + 1,
        last_x_quad=quad,
    )


def laser_min_cost(state: LaserState) -> float:
    """Minimum of the offline tracking cost over all comparator sequences
    for the observed prefix: f_t - e_t^T D_t^{-1} e_t.

    Requires track_f and at least one committed round.
    """
    if not state.params.track_f:
        raise FNotTracked("enable track_f to evaluate the offline optimum")
    if state.t < 1:
        raise ValueError("no rounds committed yet")
    return state.f - float(state.e @ linalg.spd_solve(state.D, state.e))
