import math
import random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from loopcount import exact
from loopcount.exact import (CountCache, Counter, ResourceLimitError, check_loop_bijection,
                             log_big, memo_key)

G2_22_10 = 7789744323722189254716829156528211234980743220762340514888


def test_memo_key_canonical():
    assert memo_key([1, 0, 3, 1]) == (3, 1, 1)
    assert memo_key([1, 3, 1]) == memo_key([3, 1, 1, 0, 0])


@pytest.mark.parametrize("degs,want", [((1, 1), 1), ((2, 2, 2), 1), ((2, 2, 2, 2), 3), ((), 1),
                                       ((1,), 0), ((1, 1, 1), 0), ((3, 1, 1, 1), 1)])
def test_count_simple_examples(counter, degs, want):
    assert counter.count_simple(degs) == want
    if degs:
        assert oracles.brute_simple(degs) == want


def test_count_loopy_examples(counter):
    assert counter.count_loopy((1, 1), 1) == 2
    assert counter.count_loopy((2, 2), 2) == 1
    assert counter.count_loopy_by_trace((1, 1), 1, 2) == 1
    assert counter.count_loopy_by_trace((2, 2, 2), 1, 2) == 3
    assert counter.count_loopy_by_trace((2, 2), 2, 0) == 0


def test_trace_examples_match_brute_force():
    assert oracles.brute_loopy_by_trace((2, 2, 2), 1)[2] == 3
    assert oracles.brute_loopy_by_trace((2, 2), 2) == [0, 0, 1]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("D", [1, 2])
def test_oracle_small_all_sorted(counter, n, D):
    for degs in oracles.all_sequences(n, n + D - 1):
        if list(degs) != sorted(degs, reverse=True):
            continue
        assert counter.trace_profile(degs, D) == oracles.brute_loopy_by_trace(degs, D), degs
        if max(degs) <= n - 1:
            assert counter.count_simple(degs) == oracles.brute_simple(degs), degs


def test_oracle_n6_sample(counter):
    rnd = random.Random(6)
    for _ in range(40):
        D = rnd.choice((1, 2))
        degs = tuple(rnd.randint(0, 6 + D - 1) for _ in range(6))
        assert counter.count_loopy(degs, D) == oracles.brute_loopy(degs, D)
        degs = tuple(rnd.randint(0, 5) for _ in range(6))
        assert counter.count_simple(degs) == oracles.brute_simple(degs)


def test_backends_agree():
    if not exact.native_available():
        pytest.skip("native kernel not built")
    py, nat = Counter(backend="python"), Counter(backend="native")
    rnd = random.Random(3)
    for _ in range(30):
        n = rnd.randint(1, 11)
        degs = [rnd.randint(0, n - 1) for _ in range(n)]
        assert py.count_simple(degs) == nat.count_simple(degs)
    assert py.count_loopy([4] * 10, 2) == nat.count_loopy([4] * 10, 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 8), min_size=1, max_size=8), st.sampled_from([1, 2]))
def test_trace_partition_and_parity(degs, D):
    counter = exact.default_counter()
    profile = counter.trace_profile(degs, D)
    assert sum(profile) == counter.count_loopy(degs, D)
    S = sum(degs)
    for ell, c in enumerate(profile):
        assert c == counter.count_loopy_by_trace(degs, D, ell)
        if D == 1 and (S - ell) % 2:
            assert c == 0
    if D == 2 and S % 2:
        assert sum(profile) == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 7), min_size=1, max_size=8), st.integers(1, 3), st.sampled_from([1, 2]),
       st.randoms(use_true_random=False))
def test_zero_deletion_and_permutation(degs, zeros, D, rnd):
    counter = exact.default_counter()
    base = counter.count_loopy(degs, D)
    assert counter.count_loopy(list(degs) + [0] * zeros, D) == base
    shuffled = list(degs)
    rnd.shuffle(shuffled)
    assert counter.count_loopy(shuffled, D) == base
    assert counter.count_simple(shuffled) == counter.count_simple(degs)


@pytest.mark.parametrize("degs,ell,sides", [((2, 2, 2), 2, 3), ((1, 1), 0, 1), ((2, 2, 2), 1, 0)])
def test_bijection_examples(counter, degs, ell, sides):
    assert check_loop_bijection(degs, ell, counter)
    assert counter.count_simple(degs + (ell,)) == sides


def test_bijection_trace_beyond_n(counter):
    assert check_loop_bijection((1, 1), 3, counter)


def test_symmetry_n_plus_one_minus_d(counter):
    for n in range(2, 11):
        for d in range(1, n + 1):
            if n * d % 2 == 0:
                assert counter.count_loopy([d] * n, 2) == counter.count_loopy([n + 1 - d] * n, 2)


def test_threads_match_serial():
    serial = Counter().trace_profile([5] * 12, 2)
    assert Counter().trace_profile([5] * 12, 2, threads=2) == serial


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "memo.cache"
    c1 = Counter(cache=CountCache(path))
    value = c1.count_loopy([3] * 10, 2)
    c1.cache.flush()
    text = path.read_text(encoding="utf-8")
    assert text and all(";" in line for line in text.splitlines())
    c2 = Counter(cache=CountCache(path))
    assert len(c2.cache) == len(c1.cache)
    for key, v in c2.cache.items():
        assert Counter(backend="python").count_key(key) == v
    assert c2.count_loopy([3] * 10, 2) == value
    assert c2.memo_size() == 0


def test_cache_malformed_line(tmp_path):
    path = tmp_path / "bad.cache"
    path.write_text("3,3;x\n", encoding="utf-8")
    with pytest.raises(ValueError):
        CountCache(path)


def test_resource_limit():
    for backend in ("python", "native"):
        if backend == "native" and not exact.native_available():
            continue
        with pytest.raises(ResourceLimitError):
            Counter(backend=backend, entry_cap=5).count_simple([4] * 12)


def test_log_big_examples():
    assert log_big(1) == 0
    assert log_big(2 ** 100) == pytest.approx(100 * math.log(2), rel=1e-15)
    huge = 3 ** 5000 + 17
    assert log_big(huge) == pytest.approx(float(mpmath.log(huge)), rel=1e-15)
    with pytest.raises(ValueError):
        log_big(0)


def test_log_big_literal():
    value = log_big(G2_22_10)
    assert 133.2 <= value <= 133.5
    assert value == pytest.approx(float(mpmath.log(mpmath.mpf(str(G2_22_10)))), rel=1e-15)


def test_trace_pmf_exact_sums_to_one(counter):
    pmf = exact.trace_pmf_exact([2] * 8, 2, counter)
    assert sum(pmf) == 1
