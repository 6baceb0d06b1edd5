"""Robust min-max (H-infinity) filter adapted to online regression.

Per round: predict yhat_t = x_t . w_{t-1}, observe y_t, then

    Ptilde_t = (P_{t-1}^{-1} + (a-1) x_t x_t^T)^{-1}
    w_t      = w_{t-1} + a Ptilde_t (y_t - yhat_t) x_t
    P_t      = Ptilde_t + c^{-1} I

starting from w_0 = 0, P_0 = b^{-1} I, with robustness level a > 1 and
penalties b, c > 0. The c^{-1} I refresh keeps P_t bounded away from
zero, which is what lets the filter track a moving target.

The filtering guarantee bounds the error of the post-update weights
(the w_t above), while the prediction-loss ceiling bounds the loss of
the pre-update predictions; callers that certify both must keep both
weight sequences, see `harness.RunReport`.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .errors import InvalidParams, LengthMismatch
from .oracle import ComparatorSequence, comparator_loss


@dataclass(frozen=True)
class HInfParams:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not self.a > 1:
            raise InvalidParams(f"a must exceed 1, got {self.a}")
        if not (self.b > 0 and self.c > 0):
            raise InvalidParams(f"b and c must be positive, got b={self.b}, c={self.c}")


@dataclass
class HInfState:
    params: HInfParams
    w: np.ndarray
    P: np.ndarray
    t: int

    @property
    def dim(self) -> int:
        return self.w.shape[0]


def hinf_init(params: HInfParams, d: int) -> HInfState:
    """w = 0, P = b^{-1} I."""
    if d < 1:
        raise InvalidParams(f"d must be >= 1, got {d}")
    return HInfState(params=params, w=np.zeros(d), P=np.eye(d) / params.b, t=0)


def hinf_step(state: HInfState, x, y: float) -> tuple[float, HInfState]:
    """One round: returns (yhat, new state). yhat uses the pre-update w."""
    x = linalg.as_vector(x, state.dim)
    p = state.params
    yhat = float(x @ state.w)
    P_inv = linalg.spd_inverse(state.P)
    P_tilde = linalg.spd_inverse(P_inv + (p.a - 1.0) * np.outer(x, x))
    w_new = state.w + p.a * (y - yhat) * (P_tilde @ x)
    P_new = linalg.symmetrize(P_tilde + np.eye(state.dim) / p.c)
    return yhat, replace(state, w=w_new, P=P_new, t=state.t + 1)


def hinf_filter_loss(post_update_ws, xs, comparator: ComparatorSequence) -> float:
    """Cumulative filtering error sum_t (x_t . w_t - x_t . u_t)^2.

    post_update_ws must hold the weight of round t AFTER its update (the
    quantity the filtering guarantee bounds), aligned with xs and the
    comparator.
    """
    ws = np.asarray(post_update_ws, dtype=float)
    xs = np.asarray(xs, dtype=float)
    if len(ws) != len(xs) or len(ws) != comparator.T:
        raise LengthMismatch("weights, inputs, and comparator must be aligned")
    gaps = np.einsum("td,td->t", xs, ws) - np.einsum("td,td->t", xs, comparator.us)
    return float(np.sum(gaps * gaps))


def filter_bound_rhs(params: HInfParams, comparator: ComparatorSequence, xs, ys) -> float:
    """RHS of the filtering guarantee: a L_T({u_t}) + b ||u_1||^2 + c V."""
    u1 = comparator.us[0]
    return float(
        params.a * comparator_loss(comparator, xs, ys)
        + params.b * (u1 @ u1)
        + params.c * comparator.V
    )


def regret_bound_rhs(
    params: HInfParams, alpha: float, comparator_loss_value: float, u1_norm_sq: float, V: float
) -> float:
    """Prediction-loss ceiling for a chosen alpha > 0:

        (1 + 1/alpha + (1+alpha) a) L_T({u_t})
          + (1+alpha) b ||u_1||^2 + (1+alpha) c V
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return float(
        (1.0 + 1.0 / alpha + (1.0 + alpha) * params.a) * comparator_loss_value
        + (1.0 + alpha) * params.b * u1_norm_sq
        + (1.0 + alpha) * params.c * V
    )


def optimized_alpha(
    params: HInfParams, comparator_loss_value: float, u1_norm_sq: float, V: float
) -> float | None:
    """alpha = sqrt(L_T({u}) / (a L_T({u}) + c V + b ||u_1||^2)).

    None when the comparator loss is zero (noise-free realizable data)
    or the denominator vanishes; only the fixed grid applies then.
    """
    denom = params.a * comparator_loss_value + params.c * V + params.b * u1_norm_sq
    if comparator_loss_value <= 0 or denom <= 0:
        return None
    return float(np.sqrt(comparator_loss_value / denom))
