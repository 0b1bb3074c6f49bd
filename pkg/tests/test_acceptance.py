"""Acceptance criteria, one test each, with the tolerances pinned below."""

import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest

import oracles
from loopcount import asymptotics as asy
from loopcount import cli, dist, exact, saddle
from loopcount.core import DegreeSequence, lbar, q2_at_lbar_factored, q_dense
from loopcount.exact import Counter

G2_22_10 = "7789744323722189254716829156528211234980743220762340514888"

SPARSE_NS = (50, 100, 200, 400)
SPARSE_FINAL_TOL = 0.05
IDENTITY_TOL = 1e-10
TRACE_SUM_TOL = 0.01


def test_c1_exact_value(capsys, report):
    status = cli.main(["exact", "--regular", "22", "10", "--model", "2", "--no-cache"])
    out = capsys.readouterr().out
    ok = status == 0 and out == G2_22_10 + "\n"
    assert report(1, ok, f"exact --regular 22 10 --model 2 -> {out.strip()}")


def test_c2_brute_force_oracle(report):
    counter = Counter()
    checked = mismatches = 0
    for n in range(1, 6):
        for D in (1, 2):
            for degs in oracles.all_sequences(n, n + D - 1):
                want = oracles.brute_loopy_by_trace(degs, D)
                got = counter.trace_profile(degs, D)
                mismatches += got != want or counter.count_loopy(degs, D) != sum(want)
                mismatches += any(counter.count_loopy_by_trace(degs, D, ell) != want[ell]
                                  for ell in range(n + 1))
                checked += 1
        for degs in oracles.all_sequences(n, n):
            mismatches += counter.count_simple(degs) != oracles.brute_simple(degs)
            checked += 1
    rnd = random.Random(2024)
    for _ in range(100):
        degs = tuple(rnd.randint(0, 6) for _ in range(6))
        D = rnd.choice((1, 2))
        mismatches += counter.count_simple(degs) != oracles.brute_simple(degs)
        mismatches += counter.trace_profile(degs, D) != oracles.brute_loopy_by_trace(degs, D)
        checked += 1
    assert report(2, mismatches == 0, f"{checked} sequences vs enumeration, {mismatches} mismatches")


def test_c3_bijection(report):
    counter = Counter()
    rnd = random.Random(33)
    failures = 0
    for _ in range(200):
        n = rnd.randint(1, 8)
        degs = tuple(rnd.randint(0, n) for _ in range(n))
        ell = rnd.randint(0, n + 1)
        failures += not exact.check_loop_bijection(degs, ell, counter)
    assert report(3, failures == 0, f"200 random (sequence, trace) pairs, {failures} failures")


def test_c4_conjecture_interval(report):
    counter = Counter()
    scaled_all = []
    violations = []
    pairs = 0
    for n in range(4, 25):
        for d in range(1, n + 1):
            if n * d % 2:
                continue
            r = asy.conjecture_G2(n, d).log_ratio(counter.count_loopy([d] * n, 2))
            pairs += 1
            if not -2 / mpmath.mpf(n) ** 2 < r < 0:
                violations.append((n, d, float(r)))
            scaled_all.append(float(r * n * n))
    ok = not violations
    assert report(4, ok, f"{pairs} pairs 4<=n<=24, residual*n^2 in [{min(scaled_all):.4f}, "
                         f"{max(scaled_all):.4f}], violations {violations}")


def _sparse_ratio(counter, n, D):
    d = 1 if D == 1 else 2
    return abs(float(asy.sparse_GD([d] * n, D).log_ratio(counter.count_loopy([d] * n, D))))


def test_c5_sparse_convergence(report):
    counter = Counter()
    ok = True
    parts = []
    for D in (1, 2):
        ratios = [_sparse_ratio(counter, n, D) for n in SPARSE_NS]
        ok &= all(a > b for a, b in zip(ratios, ratios[1:])) and ratios[-1] < SPARSE_FINAL_TOL
        parts.append(f"D={D}: " + ", ".join(f"{r:.5f}" for r in ratios))
    assert report(5, ok, "; ".join(parts))


def test_c6_trace_convergence(report):
    counter = Counter()
    sparse_tv = [dist.trace_law_exact([4] * n, 2, counter).tv(dist.trace_law_sparse([4] * n, 2))
                 for n in (9, 15, 21)]
    dense_tv = [dist.trace_law_exact([d] * n, 2, counter).tv(dist.trace_law_dense([d] * n, 2))
                for n, d in ((10, 5), (14, 7), (18, 9))]
    ok = all(a > b for a, b in zip(sparse_tv, sparse_tv[1:])) and all(
        a > b for a, b in zip(dense_tv, dense_tv[1:]))
    assert report(6, ok, "TV sparse d=4 n=9,15,21: " + ", ".join(f"{t:.4f}" for t in sparse_tv)
                  + "; TV dense (10,5),(14,7),(18,9): " + ", ".join(f"{t:.4f}" for t in dense_tv))


def test_c7_mean_loops(report):
    half = Fraction(1, 2)
    mean_bad, mode_bad, cases = [], [], 0
    for n in range(2, 31):
        for S in range(1, n * n):
            d = Fraction(S, n)
            m = asy.mean_loops_A(n, S)
            if not (asy.lbar1_compare(m - half, n, d) < 0 < asy.lbar1_compare(m + half, n, d)):
                mean_bad.append((n, S))
            counts = [asy.loop_count_A(n, S, ell) for ell in range(n + 1)]
            top = max(counts)
            modes = {ell for ell, c in enumerate(counts) if c == top}
            if not modes <= set(asy.mode_candidates_A(n, S)):
                mode_bad.append((n, S))
            cases += 1
    ok = not mean_bad and not mode_bad
    assert report(7, ok, f"{cases} (n,S) cases, mean misses {mean_bad[:5]}, mode misses {mode_bad[:5]}")


def _parity_direct(p, coeffs, rho):
    pmf = dist.pb_pmf(p).pmf
    return sum(np.polyval(coeffs[::-1], t) * pmf[t] for t in range(len(pmf)) if t % 2 == rho)


def test_c8_identities(report):
    rng = np.random.default_rng(808)
    problems = []

    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(0, 13))
        p = rng.random(n)
        p[np.abs(p - 0.5) < 1e-3] = 0.25
        coeffs = rng.uniform(-2, 2, int(rng.integers(1, 6)))
        rho = int(rng.integers(0, 2))
        want = _parity_direct(p, coeffs, rho)
        got = dist.pb_parity_split(p, coeffs, rho)
        err = abs(got - want) / max(1.0, abs(want))
        worst = max(worst, err)
    if worst > IDENTITY_TOL:
        problems.append(f"parity split {worst:.2e}")

    worst = 0.0
    for _ in range(200):
        p = rng.random(int(rng.integers(1, 40)))
        pmf = dist.pb_pmf(p).pmf
        t = np.arange(len(pmf))
        mean = t @ pmf
        for k in (1, 2, 3, 4):
            want = (t ** k) @ pmf
            worst = max(worst, abs(dist.pb_moments(p, k) - want) / max(1.0, abs(want)))
        for k in (2, 4):
            want = ((t - mean) ** k) @ pmf
            worst = max(worst, abs(dist.pb_central_moments(p, k) - want) / max(1.0, abs(want)))
    if worst > IDENTITY_TOL:
        problems.append(f"moments {worst:.2e}")

    violations = 0
    for _ in range(1000):
        n = int(rng.integers(1, 201))
        p = rng.random(n) ** rng.uniform(0.2, 4)
        pmf = dist.pb_pmf(p).pmf
        t = np.arange(n + 1)
        mean = p.sum()
        for s in np.linspace(0, max(2.0, n / 4), 8):
            lo_bound, hi_bound = dist.chernoff_tails(p, s)
            violations += pmf[t - mean <= -s].sum() > lo_bound * (1 + 1e-12)
            violations += pmf[t - mean >= s].sum() > hi_bound * (1 + 1e-12)
    if violations:
        problems.append(f"chernoff violations {violations}")

    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 40))
        seq = DegreeSequence(rng.integers(0, n + 2, n).tolist())
        if not 0 < seq.stats.d < n:
            continue
        a, b = q_dense(seq, 2, lbar(seq, 2)), q2_at_lbar_factored(seq)
        worst = max(worst, float(abs(a - b) / max(1, abs(b))))
    if worst > IDENTITY_TOL:
        problems.append(f"Q2 factored {worst:.2e}")

    worst = 0.0
    for _ in range(100):
        beta = rng.normal(size=int(rng.integers(1, 30)))
        n = len(beta)
        worst = max(worst, abs(saddle.u_exact(beta, 0) - 1), abs(saddle.log_u_exact(beta, n) - beta.sum()))
        for ell in range(n + 1):
            lhs = saddle.log_u_exact(beta, ell)
            rhs = beta.sum() + saddle.log_u_exact(-beta, n - ell)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
        total = sum(saddle.u_exact(beta, ell) for ell in range(n + 1))
        worst = max(worst, abs(total / np.prod(1 + np.exp(beta)) - 1))
    if worst > IDENTITY_TOL:
        problems.append(f"U identities {worst:.2e}")

    errs = []
    for n in (50, 100, 200, 400):
        c = rng.uniform(-1, 1, n)
        c -= c.mean()
        c /= max(1.0, np.abs(c).max())
        w = saddle.WeightVector(c / math.sqrt(n))
        logs = saddle.log_u_row(w)
        lo, hi = math.ceil(n ** 0.45), math.floor(n - n ** 0.45)
        errs.append(max(abs(logs[ell] - saddle.log_u_asymptotic(w, ell)) for ell in range(lo, hi + 1)))
    if not all(a > b for a, b in zip(errs, errs[1:])):
        problems.append(f"U asymptotic not improving {errs}")

    assert report(8, not problems, "all identity suites within tolerance" if not problems
                  else "; ".join(problems))


def test_c9_trace_sum(report):
    n, d = 200, 100
    gaps = []
    for D in (1, 2):
        ells = [ell for ell in range(n + 1) if D == 2 or (n * d - ell) % 2 == 0]
        total = mpmath.fsum(asy.dense_GD_by_trace([d] * n, D, ell).value for ell in ells)
        gaps.append(abs(float(total / asy.dense_GD_total([d] * n, D).value) - 1))
    ok = all(g < TRACE_SUM_TOL for g in gaps)
    assert report(9, ok, f"relative gaps D=1 {gaps[0]:.5f}, D=2 {gaps[1]:.5f}")
