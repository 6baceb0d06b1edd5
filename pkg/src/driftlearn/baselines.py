"""Comparison learners: forward ridge (AAR), NLMS, and covariance-reset RLS.

AAR is the stationary limit of the drift-aware learner: it keeps
A_t = b I + sum x_s x_s^T and r_t = sum y_s x_s and predicts with the
new input already folded in, yhat = x^T (A + x x^T)^{-1} r.

NLMS and CR-RLS use their canonical textbook updates; only their names
and roles are fixed by the comparison, so the exact forms below are
artifact-defined:

    NLMS:   yhat = x . w;  w += eta (y - yhat) x / (eps + ||x||^2)
    CR-RLS: yhat = x . w;  P -= (P x x^T P) / (1 + x^T P x);
            w += P x (y - yhat)   [updated P]
            and P resets to b_reset^{-1} I every N steps.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .errors import InvalidParams


@dataclass
class AarState:
    A: np.ndarray  # b I + sum of x x^T
    r: np.ndarray  # sum of y x
    t: int

    @property
    def dim(self) -> int:
        return self.r.shape[0]


def aar_init(b: float, d: int) -> AarState:
    if not b > 0:
        raise InvalidParams(f"b must be positive, got {b}")
    if d < 1:
        raise InvalidParams(f"d must be >= 1, got {d}")
    return AarState(A=b * np.eye(d), r=np.zeros(d), t=0)


def aar_step(state: AarState, x, y: float) -> tuple[float, AarState]:
    """Forward ridge prediction, then fold (x, y) into the statistics."""
    x = linalg.as_vector(x, state.dim)
    A_next = linalg.rank_one_update(state.A, x)
    yhat = float(x @ linalg.spd_solve(A_next, state.r))
    return yhat, replace(state, A=A_next, r=state.r + y * x, t=state.t + 1)


@dataclass
class NlmsState:
    w: np.ndarray
    eta: float
    eps: float

    @property
    def dim(self) -> int:
        return self.w.shape[0]


def nlms_init(d: int, eta: float, eps: float = 0.0) -> NlmsState:
    if not eta > 0:
        raise InvalidParams(f"eta must be positive, got {eta}")
    if eps < 0:
        raise InvalidParams(f"eps must be non-negative, got {eps}")
    return NlmsState(w=np.zeros(d), eta=eta, eps=eps)


def nlms_step(state: NlmsState, x, y: float) -> tuple[float, NlmsState]:
    x = linalg.as_vector(x, state.dim)
    yhat = float(x @ state.w)
    denom = state.eps + float(x @ x)
    if denom > 0.0:
        w_new = state.w + state.eta * (y - yhat) * x / denom
    else:
        w_new = state.w.copy()  # zero input with eps = 0: nothing to normalize
    return yhat, replace(state, w=w_new)


@dataclass
class CrRlsState:
    w: np.ndarray
    P: np.ndarray
    reset_period: int
    t: int
    b_reset: float

    @property
    def dim(self) -> int:
        return self.w.shape[0]


def crrls_init(d: int, reset_period: int, b_reset: float) -> CrRlsState:
    if not reset_period >= 1:
        raise InvalidParams(f"reset_period must be >= 1, got {reset_period}")
    if not b_reset > 0:
        raise InvalidParams(f"b_reset must be positive, got {b_reset}")
    return CrRlsState(
        w=np.zeros(d), P=np.eye(d) / b_reset, reset_period=reset_period, t=0, b_reset=b_reset
    )


def crrls_step(state: CrRlsState, x, y: float) -> tuple[float, CrRlsState]:
    """RLS step with the pre-update P used for nothing but its own update;
    the covariance resets to b_reset^{-1} I whenever the new step count
    hits a multiple of the reset period."""
    x = linalg.as_vector(x, state.dim)
    yhat = float(x @ state.w)
    Px = state.P @ x
    P_new = linalg.symmetrize(state.P - np.outer(Px, Px) / (1.0 + float(x @ Px)))
    w_new = state.w + (P_new @ x) * (y - yhat)
    t_new = state.t + 1
    if t_new % state.reset_period == 0:
        P_new = np.eye(state.dim) / state.b_reset
    return yhat, replace(state, w=w_new, P=P_new, t=t_new)
