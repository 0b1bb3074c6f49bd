"""Elementary symmetric sums of exponential weights, exact and asymptotic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import gammaln

LOG_SPACE_THRESHOLD = 300


@dataclass(frozen=True)
class WeightVector:
    beta: np.ndarray

    def __init__(self, beta: Sequence[float]):
        object.__setattr__(self, "beta", np.asarray(beta, dtype=float).reshape(-1))

    @property
    def n(self) -> int:
        return len(self.beta)

    @property
    def bar_beta(self) -> float:
        return float(self.beta.mean()) if self.n else 0.0


def _as_weights(w) -> WeightVector:
    return w if isinstance(w, WeightVector) else WeightVector(w)


def _check_ell(n: int, ell: int) -> None:
    if not 0 <= ell <= n:
        raise ValueError(f"ell={ell} outside [0, {n}]")


def u_row(w) -> np.ndarray:
    """All of U_0..U_n at once by folding in one weight at a time."""
    w = _as_weights(w)
    x = np.exp(w.beta)
    row = np.zeros(w.n + 1)
    row[0] = 1.0
    for k, xj in enumerate(x, start=1):
        row[1:k + 1] = row[1:k + 1] + xj * row[:k]
    return row


def log_u_row(w) -> np.ndarray:
    """log U_0..log U_n by the same recurrence carried in log space."""
    w = _as_weights(w)
    row = np.full(w.n + 1, -np.inf)
    row[0] = 0.0
    for k, b in enumerate(w.beta, start=1):
        row[1:k + 1] = np.logaddexp(row[1:k + 1], b + row[:k])
    return row


def log_u_exact(w, ell: int) -> float:
    w = _as_weights(w)
    _check_ell(w.n, ell)
    if w.n > LOG_SPACE_THRESHOLD:
        return float(log_u_row(w)[ell])
    return math.log(u_row(w)[ell])


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def u_exact(w, ell: int) -> float:
    """U_ell(beta) = e_ell(exp(beta_1), ..., exp(beta_n)).

    Values beyond double range come back as inf; use :func:`log_u_exact`.
    """
    w = _as_weights(w)
    _check_ell(w.n, ell)
    if w.n > LOG_SPACE_THRESHOLD:
        return _exp(log_u_row(w)[ell])
    return float(u_row(w)[ell])


def log_u_asymptotic(w, ell: int) -> float:
    w = _as_weights(w)
    n = w.n
    _check_ell(n, ell)
    if n == 0:
        return 0.0
    bb = w.bar_beta
    spread = float(np.sum((w.beta - bb) ** 2))
    log_binom = float(gammaln(n + 1) - gammaln(ell + 1) - gammaln(n - ell + 1))
    return log_binom + ell * bb + ell * (n - ell) / (2 * n * n) * spread


def u_asymptotic(w, ell: int) -> float:
    """binom(n, ell) exp(ell*bar_beta + ell(n-ell)/(2n^2) * sum (beta_j - bar_beta)^2)."""
    return _exp(log_u_asymptotic(w, ell))
