"""Log-space evaluators for the closed-form asymptotic counts.

Every evaluator returns a :class:`LogEstimate` holding the natural log of the
main term (error term dropped) at 40 significant digits, tagged with the
order of the neglected error.  Applicability conditions such as
``d_max = o(S^{1/3})`` are asymptotic and are not enforced; only the hard
preconditions (parity, densities strictly inside (0, 1), positive degrees)
are.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .core import (DegreeSequence, DensityError, ParityError, check_model, lbar, mp, mu,
                   q_dense, to_mp)

EXACT_BINOMIAL_MAX = 64


class ErrorOrder(str, enum.Enum):
    SPARSE = "O(d_max^3/S)"
    DENSE = "O(n^-b)"
    SPARSE_REGULAR = "O(d^2/n)"
    CONJECTURE = "O(n^-2)"
    HEURISTIC = "heuristic"


@dataclass(frozen=True)
class LogEstimate:
    log_value: mpmath.mpf
    error_order: ErrorOrder
    formula_id: str

    @property
    def value(self) -> mpmath.mpf:
        return mp.exp(self.log_value)

    def log_ratio(self, exact: int) -> mpmath.mpf:
        """log(exact / estimate); ``exact`` must be positive."""
        if exact <= 0:
            raise ValueError("log ratio needs a positive exact count")
        return mp.log(mp.mpf(exact)) - self.log_value


def log_factorial(k: int) -> mpmath.mpf:
    if k <= EXACT_BINOMIAL_MAX:
        return mp.log(math.factorial(k))
    return mp.loggamma(k + 1)


def log_binomial(a: int, b: int) -> mpmath.mpf:
    if not 0 <= b <= a:
        raise ValueError(f"binomial({a}, {b}) is zero")
    if a <= EXACT_BINOMIAL_MAX:
        return mp.log(math.comb(a, b))
    return mp.loggamma(a + 1) - mp.loggamma(b + 1) - mp.loggamma(a - b + 1)


def _log_sum(terms) -> mpmath.mpf:
    return mp.fsum(terms)


def _entropy(m) -> mpmath.mpf:
    """log(m^m (1-m)^(1-m)) for 0 < m < 1."""
    return m * mp.log(m) + (1 - m) * mp.log(1 - m)


def _positive_degrees(seq: DegreeSequence) -> DegreeSequence:
    if any(x == 0 for x in seq.degrees):
        raise ValueError("sparse formulas need positive degrees; strip zeros first")
    if not seq.degrees:
        raise ValueError("empty degree sequence")
    return seq


def _sparse_tail(S, S2, S3):
    """The four S2/S3 corrections shared by the loopless and loopy sparse formulas."""
    return -S2 ** 2 / (4 * S ** 2) - S2 ** 2 * S3 / (2 * S ** 4) + S2 ** 4 / (4 * S ** 5) + S3 ** 2 / (6 * S ** 3)


def _as_seq(seq) -> DegreeSequence:
    return seq if isinstance(seq, DegreeSequence) else DegreeSequence(seq)


# -- loopless baselines --------------------------------------------------------

def sparse_G(seq) -> LogEstimate:
    """Loopless count, sparse regime: S!/((S/2)! 2^(S/2) prod d_j!) times corrections."""
    seq = _positive_degrees(_as_seq(seq))
    st = seq.stats
    if st.S % 2:
        raise ParityError("loopless counts need an even degree sum")
    S, S2, S3 = (mp.mpf(x) for x in (st.S, st.S2, st.S3))
    main = _log_sum([log_factorial(st.S), -log_factorial(st.S // 2), -(st.S // 2) * mp.log(2)]
                    + [-log_factorial(x) for x in seq.degrees])
    corr = -S2 / (2 * S) + _sparse_tail(S, S2, S3)
    return LogEstimate(main + corr, ErrorOrder.SPARSE, "loopless-sparse")


def dense_G(seq) -> LogEstimate:
    """Loopless count, dense regime, with the 1/4 and R^2 corrections."""
    seq = _as_seq(seq)
    st = seq.stats
    if st.lam is None or not 0 < st.lam < 1:
        raise DensityError("dense loopless formula needs 0 < lambda < 1")
    if st.S % 2:
        raise ParityError("loopless counts need an even degree sum")
    n = st.n
    lam, R = to_mp(st.lam), to_mp(st.R)
    terms = [mp.log(2) / 2, math.comb(n, 2) * _entropy(lam),
             mp.mpf(1) / 4 - R ** 2 / (4 * lam ** 2 * (1 - lam) ** 2 * n ** 4)]
    terms += [log_binomial(n - 1, x) for x in seq.degrees]
    return LogEstimate(_log_sum(terms), ErrorOrder.DENSE, "loopless-dense")


# -- dense loopy counts --------------------------------------------------------

def _dense_setup(seq, D):
    check_model(D)
    st = seq.stats
    m = mu(seq, D)
    if not 0 < m < 1 or not 0 < st.d < st.n:
        raise DensityError("dense formulas need 0 < d < n")
    return st, to_mp(m)


def _entropy_exponent(n: int, D: int):
    return mp.mpf(n) ** 2 / 2 if D == 1 else mp.mpf(math.comb(n + 1, 2))


def dense_GD_by_trace(seq, D: int, ell: int) -> LogEstimate:
    """Dense estimate of the number of matrices with exactly ``ell`` loops."""
    seq = _as_seq(seq)
    st, m = _dense_setup(seq, D)
    n = st.n
    if not 0 <= ell <= n:
        raise ValueError(f"trace {ell} outside 0..{n}")
    if D == 1 and (st.S - ell) % 2:
        raise ParityError("with D=1 the trace must have the parity of S")
    if D == 2 and st.S % 2:
        raise ParityError("with D=2 the degree sum must be even")
    half = mp.mpf(D) / 2
    terms = [mp.log(2) / 2, _entropy_exponent(n, D) * _entropy(m), log_binomial(n, ell),
             half * ell * mp.log(m), half * (n - ell) * mp.log(1 - m), q_dense(seq, D, ell)]
    terms += [log_binomial(n + D - 1, x) for x in seq.degrees]
    return LogEstimate(_log_sum(terms), ErrorOrder.DENSE, f"dense-G{D}-trace")


def dense_GD_total(seq, D: int) -> LogEstimate:
    """Dense estimate of the total count, Q_D taken at the concentration point."""
    seq = _as_seq(seq)
    st, m = _dense_setup(seq, D)
    n = st.n
    if D == 2 and st.S % 2:
        raise ParityError("with D=2 the degree sum must be even")
    terms = [_entropy_exponent(n, D) * _entropy(m), q_dense(seq, D, lbar(seq, D))]
    if D == 1:
        terms += [-mp.log(2) / 2, n * mp.log(mp.sqrt(m) + mp.sqrt(1 - m))]
    else:
        terms += [mp.log(2) / 2]
    terms += [log_binomial(n + D - 1, x) for x in seq.degrees]
    return LogEstimate(_log_sum(terms), ErrorOrder.DENSE, f"dense-G{D}")


# -- sparse loopy counts -------------------------------------------------------

def log_double_factorial_form(S: int) -> mpmath.mpf:
    """log(S! / ((S/2)! 2^(S/2))) for even S."""
    if S % 2:
        raise ParityError("factorial form needs even S")
    return log_factorial(S) - log_factorial(S // 2) - (S // 2) * mp.log(2)


def log_stirling_form(S: int) -> mpmath.mpf:
    """log(sqrt(2) (S/e)^(S/2))."""
    return mp.log(2) / 2 + mp.mpf(S) / 2 * (mp.log(S) - 1)


def sparse_GD(seq, D: int, factorial_form: bool = False) -> LogEstimate:
    """Sparse-regime estimate of |G_D(d)|.

    With ``factorial_form`` the factor sqrt(2) (S/e)^(S/2) is replaced by
    S!/((S/2)! 2^(S/2)), which needs S even.
    """
    check_model(D)
    seq = _positive_degrees(_as_seq(seq))
    st = seq.stats
    if D == 2 and st.S % 2:
        raise ParityError("with D=2 the degree sum must be even")
    S, S2, S3 = (mp.mpf(x) for x in (st.S, st.S2, st.S3))
    head = log_double_factorial_form(st.S) if factorial_form else log_stirling_form(st.S)
    terms = [head] + [-log_factorial(x) for x in seq.degrees]
    if D == 1:
        rS = mp.sqrt(S)
        terms += [-mp.log(2),  # 1/sqrt(2) = sqrt(2)/2 against the sqrt(2) in the head
                  rS - mp.mpf(1) / 4 - S2 / S + 7 / (24 * rS) + S2 / S ** mp.mpf(1.5)
                  + S3 / (3 * S ** mp.mpf(1.5)) + S2 ** 2 / (2 * S ** mp.mpf(2.5))]
    else:
        terms += [S2 / (2 * S)]
    terms.append(_sparse_tail(S, S2, S3))
    return LogEstimate(_log_sum(terms), ErrorOrder.SPARSE, f"sparse-G{D}")


def sparse_regular(n: int, d: int, D: int) -> LogEstimate:
    """Regular-case specialisation of the sparse loopy formulas."""
    check_model(D)
    if d < 1 or n < 1:
        raise ValueError("need n >= 1 and d >= 1")
    if D == 2 and (n * d) % 2:
        raise ParityError("with D=2, nd must be even")
    nd = mp.mpf(n * d)
    d_ = mp.mpf(d)
    terms = [nd / 2 * (mp.log(nd) - 1), -n * log_factorial(d), -d_ ** 3 / (12 * n)]
    if D == 1:
        terms += [-mp.log(2) / 2, (2 - 2 * d_ - d_ ** 2) / 4,
                  (24 * (n - 1) * d_ + 20 * d_ ** 2 + 11) / (24 * mp.sqrt(nd))]
    else:
        terms += [mp.log(2) / 2, -(d_ - 1) * (d_ - 3) / 4]
    return LogEstimate(_log_sum(terms), ErrorOrder.SPARSE_REGULAR, f"sparse-regular-G{D}")


# -- unconditioned ensembles ---------------------------------------------------

def loop_count_A(n: int, S: int, ell: int) -> int:
    """Symmetric 0-1 n x n matrices with S ones, exactly ``ell`` of them diagonal."""
    if not 0 <= ell <= n:
        raise ValueError(f"trace {ell} outside 0..{n}")
    if (S - ell) % 2 or S < ell:
        return 0
    return math.comb(n, ell) * math.comb(n * (n - 1) // 2, (S - ell) // 2)


def loop_count_B(n: int, S: int, ell: int) -> int:
    """Graphs with loops on n vertices, S/2 edges (loops counted twice), ``ell`` loops."""
    if S % 2:
        raise ParityError("loopy graphs have even degree sum")
    if not 0 <= ell <= n:
        raise ValueError(f"trace {ell} outside 0..{n}")
    if S // 2 < ell:
        return 0
    return math.comb(n, ell) * math.comb(n * (n - 1) // 2, S // 2 - ell)


def mean_loops_A(n: int, S: int) -> Fraction:
    """Exact mean number of loops over all symmetric 0-1 matrices with S ones."""
    counts = [loop_count_A(n, S, ell) for ell in range(n + 1)]
    total = sum(counts)
    if total == 0:
        raise ValueError(f"no {n}x{n} symmetric 0-1 matrix has {S} ones")
    return Fraction(sum(ell * c for ell, c in enumerate(counts)), total)


def lbar1_compare(x: Fraction, n: int, d: Fraction) -> int:
    """Sign of x - lbar_1(n, d), decided in exact rational arithmetic.

    lbar_1 = n / (1 + sqrt(t)) with t = (n - d)/d, so x < lbar_1 iff
    sqrt(t) < n/x - 1, which squares cleanly once signs are settled.
    """
    x, d = Fraction(x), Fraction(d)
    if not 0 < d <= n:
        raise ValueError("comparison needs 0 < d <= n")
    if x <= 0:
        return -1
    t = (n - d) / d
    rhs = Fraction(n) / x - 1
    if rhs < 0:  # x > n >= lbar_1
        return 1
    lhs2, rhs2 = t, rhs * rhs
    if lhs2 < rhs2:
        return -1
    if lhs2 > rhs2:
        return 1
    return 0


def mode_candidates_A(n: int, S: int) -> tuple[int, ...]:
    """lbar_1 (d = S/n) rounded down and up to integers with the parity of S."""
    d = Fraction(S, n)
    lo = None
    for ell in range(S % 2, n + 2, 2):
        if lbar1_compare(Fraction(ell), n, d) <= 0:
            lo = ell
    hi = None
    for ell in range(S % 2, n + 3, 2):
        if lbar1_compare(Fraction(ell), n, d) >= 0:
            hi = ell
            break
    return tuple(sorted({c for c in (lo, hi) if c is not None}))


# -- regular loopy graphs: heuristic and conjectured formulas ------------------

def _regular_setup(n: int, d: int):
    if (n * d) % 2:
        raise ParityError("nd must be even")
    if not 1 <= d <= n:
        raise DensityError("need 1 <= d <= n")
    m = mp.mpf(d) / (n + 1)
    return m, n * log_binomial(n + 1, d) + math.comb(n + 1, 2) * _entropy(m)


def naive_G2(n: int, d: int) -> LogEstimate:
    """Independent-degrees heuristic for the number of d-regular loopy graphs."""
    _, core = _regular_setup(n, d)
    return LogEstimate(core - 1, ErrorOrder.HEURISTIC, "naive-G2")


def conjecture_G2(n: int, d: int) -> LogEstimate:
    """Conjectured formula for d-regular loopy graphs, without its O(n^-2) term."""
    m, core = _regular_setup(n, d)
    c = m * (1 - m) * (n + 1)
    log_value = core + mp.log(2) / 2 - mp.mpf(3) / 4 + (3 * c + 1) / (12 * c * n)
    return LogEstimate(log_value, ErrorOrder.CONJECTURE, "conjecture-G2")
