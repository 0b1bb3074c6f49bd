"""Degree sequences, their summary statistics and the dense-regime scalars."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import mpmath

# Private context so callers' global mpmath precision is left alone.
mp = mpmath.MPContext()
mp.dps = 40

LOOP_MODELS = (1, 2)


class ParityError(ValueError):
    """A formula or count was requested for an impossible parity class."""


class DensityError(ValueError):
    """A density parameter sits on the boundary where a formula is undefined."""


def check_model(D: int) -> int:
    if D not in LOOP_MODELS:
        raise ValueError(f"loop model must be 1 or 2, got {D!r}")
    return D


@dataclass(frozen=True)
class SequenceStats:
    n: int
    S: int
    d: Fraction
    lam: Fraction | None  # undefined for n == 1
    d_max: int
    R: Fraction
    S2: int
    S3: int


@dataclass(frozen=True)
class DegreeSequence:
    """Immutable vector of nonnegative integer degrees."""

    degrees: tuple[int, ...]

    def __init__(self, degrees: Iterable[int]):
        degs = tuple(int(x) for x in degrees)
        if any(x < 0 for x in degs):
            raise ValueError("degrees must be nonnegative")
        object.__setattr__(self, "degrees", degs)

    @classmethod
    def regular(cls, n: int, d: int) -> "DegreeSequence":
        return cls([d] * n)

    @property
    def n(self) -> int:
        return len(self.degrees)

    def __len__(self) -> int:
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)

    @cached_property
    def stats(self) -> SequenceStats:
        return compute_stats(self)

    @property
    def is_regular(self) -> bool:
        return len(set(self.degrees)) <= 1

    def strip_zeros(self) -> "DegreeSequence":
        return DegreeSequence(x for x in self.degrees if x)

    def admissible(self, D: int = 0) -> bool:
        """True when no row asks for more than n - 1 + D ones."""
        return all(x <= self.n - 1 + D for x in self.degrees)

    def canonical(self) -> tuple[int, ...]:
        """Nonincreasing tuple of the nonzero degrees (the memo key)."""
        return tuple(sorted((x for x in self.degrees if x), reverse=True))


def compute_stats(seq: DegreeSequence) -> SequenceStats:
    degs = seq.degrees
    n = len(degs)
    if n < 1:
        raise ValueError("statistics need at least one vertex")
    S = sum(degs)
    d = Fraction(S, n)
    lam = d / (n - 1) if n > 1 else None
    R = sum((Fraction(x) - d) ** 2 for x in degs)
    S2 = sum(x * (x - 1) for x in degs)
    S3 = sum(x * (x - 1) * (x - 2) for x in degs)
    return SequenceStats(n=n, S=S, d=d, lam=lam, d_max=max(degs), R=R, S2=S2, S3=S3)


def to_mp(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


@dataclass(frozen=True)
class LoopModelParams:
    D: int
    mu_D: Fraction
    lbar_D: mpmath.mpf


def mu(seq: DegreeSequence, D: int) -> Fraction:
    """Overall density d / (n + D - 1)."""
    check_model(D)
    return seq.stats.d / (seq.n + D - 1)


def lbar(seq: DegreeSequence, D: int):
    """Concentration point of the trace: the centre of the loop-count law."""
    check_model(D)
    n, d = seq.n, seq.stats.d
    if not 0 <= d <= n:
        raise ValueError(f"average degree {d} outside [0, n]")
    if D == 2:
        return mp.mpf(d.numerator * n) / (d.denominator * (n + 1))
    return lbar1(n, d)


def lbar1(n: int, d) -> mpmath.mpf:
    # continuous limits at d = 0 and d = n fall out of the formula directly
    d = to_mp(d)
    sd, sr = mp.sqrt(d), mp.sqrt(n - d)
    return sd * n / (sd + sr)


def loop_model_params(seq: DegreeSequence, D: int) -> LoopModelParams:
    return LoopModelParams(D=D, mu_D=mu(seq, D), lbar_D=lbar(seq, D))


def q_dense(seq: DegreeSequence, D: int, ell) -> mpmath.mpf:
    """Second-order exponent Q_D(d, ell) of the dense trace-refined counts.

    ``ell`` may be any real in [0, n]; it is typically an integer trace or the
    concentration point returned by :func:`lbar`.
    """
    check_model(D)
    st = seq.stats
    n = st.n
    if not 0 < st.d < n:
        raise DensityError("Q_D needs 0 < d < n")
    ell = to_mp(ell)
    R = to_mp(st.R)
    if D == 1:
        d = to_mp(st.d)
        a = d * (n - d)
        return (mp.mpf(1) / 4 + (ell - d) ** 2 / (4 * a)
                - (ell - d) ** 2 * R / (2 * a ** 2) - R ** 2 / (4 * a ** 2))
    m = to_mp(mu(seq, 2))
    v = m * (1 - m)
    x = ell - m * n
    return (mp.mpf(1) / 4 - ell * (n - ell) / (v * n ** 2)
            - R ** 2 / (4 * v ** 2 * n ** 4) + R / (v * n ** 2)
            + (1 - 2 * m) * x * R / (v ** 2 * n ** 3)
            - 2 * x ** 2 * R / (v ** 2 * n ** 4))


def q2_at_lbar_factored(seq: DegreeSequence) -> mpmath.mpf:
    """Closed form of Q_2 at its concentration point."""
    st = seq.stats
    if not 0 < st.d < st.n:
        raise DensityError("Q_D needs 0 < d < n")
    m = to_mp(mu(seq, 2))
    x = to_mp(st.R) / (m * (1 - m) * st.n ** 2)
    return -(1 - x) * (3 - x) / 4
