"""Poisson binomial machinery and the trace law of random loopy matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import stirling2

from . import exact
from .core import DegreeSequence, DensityError, ParityError, check_model, lbar

CLAMP_TOLERANCE = 1e-9


@dataclass(frozen=True)
class TraceLaw:
    """Probability mass function over traces 0..n."""

    pmf: np.ndarray
    support_parity: int | None = None

    @property
    def n(self) -> int:
        return len(self.pmf) - 1

    def mean(self) -> float:
        return float(np.dot(np.arange(len(self.pmf)), self.pmf))

    def variance(self) -> float:
        ell = np.arange(len(self.pmf))
        m = self.mean()
        return float(np.dot((ell - m) ** 2, self.pmf))

    def variance_pairwise(self) -> float:
        """Cancellation-free variance: sum over k < l of P(k) P(l) (k - l)^2."""
        p = self.pmf
        ell = np.arange(len(p))
        diff2 = (ell[:, None] - ell[None, :]) ** 2
        return float(np.sum(np.triu(np.outer(p, p) * diff2, k=1)))

    def tv(self, other: "TraceLaw") -> float:
        """Total-variation distance."""
        if len(other.pmf) != len(self.pmf):
            raise ValueError("trace laws have different supports")
        return 0.5 * float(np.abs(self.pmf - other.pmf).sum())


def _probabilities(p: Sequence[float]) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if np.any((p < 0) | (p > 1)) or np.any(np.isnan(p)):
        raise ValueError("probabilities must lie in [0, 1]")
    return p


def pb_pmf(p: Sequence[float]) -> TraceLaw:
    """Exact PMF of a sum of independent Bernoulli(p_j) by the convolution recurrence."""
    p = _probabilities(p)
    return TraceLaw(_pgf_coefficients(p))


def _pgf_coefficients(q: np.ndarray) -> np.ndarray:
    # coefficients of prod_j (1 - q_j + q_j w); valid for any real q_j
    coef = np.zeros(len(q) + 1)
    coef[0] = 1.0
    for k, qj in enumerate(q, start=1):
        coef[1:k + 1] = coef[1:k + 1] * (1 - qj) + coef[:k] * qj
        coef[0] *= 1 - qj
    return coef


def _elementary_symmetric(q: np.ndarray, kmax: int) -> np.ndarray:
    e = np.zeros(kmax + 1)
    e[0] = 1.0
    for qj in q:
        e[1:] = e[1:] + qj * e[:-1]
    return e


def formal_moment_poly(q: Sequence[float], coeffs: Sequence[float]) -> float:
    """sum_t f(t) [w^t] prod_j (1 - q_j + q_j w) for a polynomial f.

    Uses E[X^k] = sum_j S(k, j) j! e_j(q), a polynomial identity in q, so the
    value is defined for every real q (negative entries included).
    """
    q = np.asarray(q, dtype=float).reshape(-1)
    deg = len(coeffs) - 1
    e = _elementary_symmetric(q, deg)
    total = 0.0
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mk = sum(stirling2(k, j, exact=True) * math.factorial(j) * e[j] for j in range(k + 1))
        total += c * mk
    return float(total)


def pb_parity_split(p: Sequence[float], coeffs: Sequence[float], rho: int) -> float:
    """sum over t with t = rho (mod 2) of f(t) P(X = t), X ~ PB(p).

    ``coeffs`` lists the coefficients of f from the constant term up (degree
    at most 8).  Evaluated as f^(p)/2 + (-1)^rho Z f^(r)/2 with
    r_j = -p_j/(1 - 2 p_j) and Z = prod (1 - 2 p_j).
    """
    p = _probabilities(p)
    if rho not in (0, 1):
        raise ValueError("rho must be 0 or 1")
    if len(coeffs) > 9:
        raise ValueError("polynomial degree must be at most 8")
    if np.any(p == 0.5):
        raise ValueError("parity split needs every p_j != 1/2")
    r = -p / (1 - 2 * p)
    Z = float(np.prod(1 - 2 * p))
    sign = -1.0 if rho else 1.0
    return 0.5 * formal_moment_poly(p, coeffs) + sign * 0.5 * Z * formal_moment_poly(r, coeffs)


def _phi(x: float) -> float:
    return (1 + x) * math.log1p(x) - x


def chernoff_tails(p: Sequence[float], s: float) -> tuple[float, float]:
    """Bounds on P(X - mean <= -s) and P(X - mean >= s)."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    mean = float(np.sum(_probabilities(p)))
    if mean == 0:
        return (1.0, 1.0) if s == 0 else (0.0, 0.0)
    return math.exp(-s * s / (2 * mean)), math.exp(-mean * _phi(s / mean))


def _power_sums(p: np.ndarray) -> tuple[float, float, float, float]:
    return tuple(float(np.sum(p ** k)) for k in (1, 2, 3, 4))


def pb_moments(p: Sequence[float], k: int) -> float:
    """Raw moment E(X^k), k = 1..4, from the power sums of p."""
    P1, P2, P3, P4 = _power_sums(np.asarray(p, dtype=float))
    k1 = P1
    k2 = P1 - P2
    k3 = P1 - 3 * P2 + 2 * P3
    k4 = P1 - 7 * P2 + 12 * P3 - 6 * P4
    if k == 1:
        return k1
    if k == 2:
        return k2 + k1 ** 2
    if k == 3:
        return k3 + 3 * k2 * k1 + k1 ** 3
    if k == 4:
        return k4 + 4 * k3 * k1 + 3 * k2 ** 2 + 6 * k2 * k1 ** 2 + k1 ** 4
    raise ValueError("pb_moments supports k = 1..4")


def pb_central_moments(p: Sequence[float], k: int) -> float:
    p = np.asarray(p, dtype=float)
    v = p * (1 - p)
    if k == 2:
        return float(v.sum())
    if k == 4:
        return float(3 * v.sum() ** 2 + np.sum(v * (1 - 6 * p + 6 * p ** 2)))
    raise ValueError("pb_central_moments supports k in {2, 4}")


# Bernoulli cumulants kappa_m(p) as polynomials in p, via kappa_{m+1} = p(1-p) d kappa_m / dp.
def _bernoulli_cumulant_polys(mmax: int) -> list[np.polynomial.Polynomial]:
    P = np.polynomial.Polynomial
    polys = [P([0.0]), P([0.0, 1.0])]
    w = P([0.0, 1.0, -1.0])
    while len(polys) <= mmax:
        polys.append(w * polys[-1].deriv())
    return polys


def pb_cumulants(p: Sequence[float], mmax: int = 6) -> list[float]:
    """Cumulants kappa_1..kappa_mmax of PB(p) (index 0 unused, set to 0)."""
    p = np.asarray(p, dtype=float)
    polys = _bernoulli_cumulant_polys(mmax)
    return [0.0] + [float(np.sum(polys[m](p))) for m in range(1, mmax + 1)]


# -- trace laws ----------------------------------------------------------------

def _as_seq(seq) -> DegreeSequence:
    return seq if isinstance(seq, DegreeSequence) else DegreeSequence(seq)


def trace_law_exact(seq, D: int, counter: exact.Counter | None = None) -> TraceLaw:
    """Law of the trace of a uniformly random member of G_D(d)."""
    check_model(D)
    seq = _as_seq(seq)
    profile = exact.trace_profile(seq, D, counter)
    total = sum(profile)
    if total == 0:
        raise ValueError("no matrices with this degree sequence")
    pmf = np.array([float(Fraction(c, total)) for c in profile])
    parity = seq.stats.S % 2 if D == 1 else None
    return TraceLaw(pmf, parity)


def _restrict_parity(pmf: np.ndarray, parity: int) -> np.ndarray:
    out = pmf.copy()
    out[(np.arange(len(out)) % 2) != parity] = 0.0
    total = out.sum()
    if total == 0:
        raise ValueError("parity class carries no mass")
    return out / total


def _binomial_pmf(n: int, q: float) -> np.ndarray:
    from scipy.stats import binom

    return binom.pmf(np.arange(n + 1), n, q)


def _check_loopy_parity(seq: DegreeSequence, D: int) -> None:
    if D == 2 and seq.stats.S % 2:
        raise ParityError("with D=2 the degree sum must be even")


def trace_law_dense(seq, D: int) -> TraceLaw:
    """Binomial approximation Bin(n, lbar_D/n); D=1 is restricted to the parity of S."""
    check_model(D)
    seq = _as_seq(seq)
    st = seq.stats
    if not 0 < st.d < st.n:
        raise DensityError("dense trace law needs 0 < d < n")
    _check_loopy_parity(seq, D)
    pmf = _binomial_pmf(st.n, float(lbar(seq, D)) / st.n)
    if D == 1:
        return TraceLaw(_restrict_parity(pmf, st.S % 2), st.S % 2)
    return TraceLaw(pmf)


def dense_trace_mean_var(seq, D: int) -> tuple[float, float]:
    seq = _as_seq(seq)
    lb = float(lbar(seq, D))
    return lb, lb * (1 - lb / seq.n)


@dataclass(frozen=True)
class SparseTraceParams:
    p_prime: np.ndarray
    p_dprime: np.ndarray


def sparse_params(seq) -> SparseTraceParams:
    seq = _as_seq(seq)
    st = seq.stats
    if st.S <= 0:
        raise ValueError("sparse trace parameters need S > 0")
    d = np.asarray(seq.degrees, dtype=float)
    S, S2 = float(st.S), float(st.S2)
    rS = math.sqrt(S)
    p1 = (d / rS - d * (2 * d - 1) / (2 * S) + d ** 3 / S ** 1.5
          + d * (d - 2) * S2 / S ** 2.5 - d * S2 ** 2 / (2 * S ** 3.5))
    p2 = d * (d - 1) / S
    return SparseTraceParams(p1, p2)


def _clamp(p: np.ndarray) -> np.ndarray:
    if np.any(p < -CLAMP_TOLERANCE) or np.any(p > 1 + CLAMP_TOLERANCE):
        raise ValueError("sparse trace parameters leave [0, 1]; sequence is outside the sparse regime")
    return np.clip(p, 0.0, 1.0)


def trace_law_sparse(seq, D: int) -> TraceLaw:
    """Poisson binomial approximation: PB(p') for D=1 (parity-restricted), PB(p'') for D=2."""
    check_model(D)
    seq = _as_seq(seq)
    _check_loopy_parity(seq, D)
    params = sparse_params(seq)
    if D == 1:
        parity = seq.stats.S % 2
        return TraceLaw(_restrict_parity(pb_pmf(_clamp(params.p_prime)).pmf, parity), parity)
    return pb_pmf(_clamp(params.p_dprime))


def sparse_trace_mean(seq, D: int) -> float:
    st = _as_seq(seq).stats
    if D == 1:
        return math.sqrt(st.S) - st.S2 / st.S - 0.5
    check_model(D)
    return st.S2 / st.S


def sparse_trace_var(seq, D: int) -> float:
    st = _as_seq(seq).stats
    if D == 1:
        return math.sqrt(st.S) - 2 * st.S2 / st.S - 1
    check_model(D)
    return st.S2 / st.S
