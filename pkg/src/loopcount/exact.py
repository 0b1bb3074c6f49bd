"""Exact big-integer counts of symmetric 0-1 matrices with given row sums.

Loopless counts come from a memoized recursion on the residual degree
multiset: remove a vertex of minimum residual degree ``r``, choose how many
of its ``r`` neighbours come from each residual-degree class (weighted by
binomial coefficients) and recurse on the smaller multiset.  Loopy counts sum
loopless counts over all admissible diagonals, grouped by degree class.

A native extension evaluates the recursion modulo several 62-bit primes and
the exact integer is rebuilt by CRT; a pure Python engine is used when the
extension is unavailable or explicitly requested.
"""

from __future__ import annotations

import itertools
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .core import DegreeSequence, check_model

try:
    from . import _kernel
except ImportError:  # pragma: no cover - depends on the build
    _kernel = None

log = logging.getLogger(__name__)

DEFAULT_ENTRY_CAP = 50_000_000


class ResourceLimitError(RuntimeError):
    """The memo table grew past its configured entry cap."""


def memo_key(degrees: Iterable[int]) -> tuple[int, ...]:
    """Canonical key of a degree multiset: nonzero degrees, nonincreasing."""
    return tuple(sorted((int(x) for x in degrees if x), reverse=True))


def _class_counts(key: Sequence[int]) -> tuple[int, ...]:
    if not key:
        return ()
    counts = [0] * max(key)
    for x in key:
        counts[x - 1] += 1
    return tuple(counts)


class CountCache:
    """Content-addressed store of exact loopless counts.

    Snapshot format: one UTF-8 line per entry, ``key_csv;decimal_count``.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._data: dict[tuple[int, ...], int] = {}
        self._dirty = False
        if self.path is not None and self.path.exists():
            self.load(self.path)

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key) -> bool:
        return tuple(key) in self._data

    def get(self, key):
        return self._data.get(tuple(key))

    def put(self, key, value: int) -> None:
        key = tuple(key)
        if self._data.get(key) != value:
            self._data[key] = int(value)
            self._dirty = True

    def items(self):
        return sorted(self._data.items())

    def load(self, path: str | Path) -> None:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                try:
                    key_csv, value = line.split(";")
                    key = tuple(int(x) for x in key_csv.split(",")) if key_csv else ()
                    self._data[key] = int(value)
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: malformed cache line") from exc

    def save(self, path: str | Path | None = None) -> None:
        path = Path(path) if path is not None else self.path
        if path is None:
            raise ValueError("no snapshot path configured")
        tmp = path.with_name(path.name + ".tmp")
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            for key, value in self.items():
                fh.write(f"{','.join(map(str, key))};{value}\n")
        tmp.replace(path)
        self._dirty = False

    def flush(self) -> None:
        if self.path is not None and self._dirty:
            self.save()


@lru_cache(maxsize=None)
def _primes(count: int) -> tuple[int, ...]:
    from sympy import prevprime

    out, p = [], 1 << 62
    for _ in range(count):
        p = prevprime(p)
        out.append(p)
    return tuple(out)


def _upper_bound_bits(key: Sequence[int]) -> int:
    # a loopless graph with S/2 edges is one choice of S/2 pairs
    m = len(key)
    return math.comb(m * (m - 1) // 2, sum(key) // 2).bit_length()


class _PythonEngine:
    def __init__(self, entry_cap: int):
        self.entry_cap = entry_cap
        self.memo: dict[tuple[int, ...], int] = {(): 1}

    def __len__(self) -> int:
        return len(self.memo)

    def count(self, key: tuple[int, ...]) -> int:
        counts = _class_counts(key)
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(limit, 4 * len(key) + 1000))
        try:
            return self._count(counts)
        finally:
            sys.setrecursionlimit(limit)

    def _count(self, c: tuple[int, ...]) -> int:
        hit = self.memo.get(c)
        if hit is not None:
            return hit
        L = len(c)
        m = sum(c)
        stubs = sum((i + 1) * x for i, x in enumerate(c))
        total = 0
        if L <= m - 1 and stubs % 2 == 0:
            new = list(c)
            j = next(i for i, x in enumerate(new) if x)
            need = j + 1
            new[j] -= 1
            classes = [i for i in range(L) if new[i]]
            for ks in _compositions([new[i] for i in classes], need):
                w = 1
                nxt = new[:]
                for i, k in zip(classes, ks):
                    if k:
                        w *= _comb(new[i], k)
                        nxt[i] -= k
                        if i:
                            nxt[i - 1] += k
                while nxt and nxt[-1] == 0:
                    nxt.pop()
                total += w * self._count(tuple(nxt))
        if len(self.memo) >= self.entry_cap:
            raise ResourceLimitError(f"memo table exceeded {self.entry_cap} entries")
        self.memo[c] = total
        return total


@lru_cache(maxsize=65536)
def _comb(a: int, b: int) -> int:
    return math.comb(a, b)


def _compositions(caps: list[int], total: int) -> Iterator[tuple[int, ...]]:
    """All (k_1..k_K) with 0 <= k_i <= caps[i] and sum k_i == total."""
    K = len(caps)
    if K == 0:
        if total == 0:
            yield ()
        return
    suffix = [0] * (K + 1)
    for i in range(K - 1, -1, -1):
        suffix[i] = suffix[i + 1] + caps[i]
    if suffix[0] < total:
        return
    # odometer over positions; rem[i] is what positions i.. still have to supply
    ks = [0] * K
    hi = [0] * K
    rem = [0] * (K + 1)
    rem[0] = total
    i = 0
    ks[0] = max(0, total - suffix[1])
    hi[0] = min(caps[0], total)
    while i >= 0:
        if ks[i] > hi[i]:
            i -= 1
            if i >= 0:
                ks[i] += 1
            continue
        if i == K - 1:
            yield tuple(ks)
            ks[i] += 1
            continue
        rem[i + 1] = rem[i] - ks[i]
        i += 1
        ks[i] = max(0, rem[i] - suffix[i + 1])
        hi[i] = min(caps[i], rem[i])


class _NativeEngine:
    def __init__(self, entry_cap: int):
        self.entry_cap = entry_cap
        self._engine = None

    def __len__(self) -> int:
        return 0 if self._engine is None else len(self._engine)

    def count(self, key: tuple[int, ...]) -> int:
        if not key:
            return 1
        nres = _upper_bound_bits(key) // 61 + 2
        if self._engine is None or self._engine.residues < nres:
            # wider residue vectors invalidate the memo; grow generously
            nres = max(nres, 6, 0 if self._engine is None else 2 * self._engine.residues)
            self._engine = _kernel.Engine(list(_primes(nres)), self.entry_cap)
        primes = _primes(self._engine.residues)
        try:
            residues = self._engine.count(list(_class_counts(key)))
        except ValueError as exc:
            if "cap" in str(exc):
                raise ResourceLimitError(str(exc)) from exc
            raise
        from sympy.ntheory.modular import crt

        value, _ = crt(primes, residues, check=False)
        return int(value)


def native_available() -> bool:
    return _kernel is not None


class Counter:
    """Exact counting engine with a persistent result cache.

    ``backend`` is ``"native"``, ``"python"`` or ``"auto"`` (native when built).
    """

    def __init__(self, cache: CountCache | None = None, backend: str = "auto",
                 entry_cap: int = DEFAULT_ENTRY_CAP):
        if backend == "auto":
            backend = "native" if native_available() else "python"
        if backend == "native" and not native_available():
            raise RuntimeError("native kernel not built; install the package with its extension")
        if backend not in ("native", "python"):
            raise ValueError(f"unknown backend {backend!r}")
        self.backend = backend
        self.entry_cap = entry_cap
        self.cache = cache if cache is not None else CountCache()
        self._engine = _NativeEngine(entry_cap) if backend == "native" else _PythonEngine(entry_cap)

    # -- loopless -----------------------------------------------------------
    def count_key(self, key: tuple[int, ...]) -> int:
        """Count loopless graphs for a canonical key (see :func:`memo_key`)."""
        if not key:
            return 1
        m = len(key)
        if sum(key) % 2 or key[0] > m - 1:
            return 0
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        # complementing within the nonzero vertices keeps the count; work on the sparser side
        comp = memo_key(m - 1 - x for x in key)
        work = comp if sum(comp) < sum(key) else key
        value = self._engine.count(work)
        self.cache.put(key, value)
        return value

    def count_simple(self, seq) -> int:
        return self.count_key(memo_key(_degrees(seq)))

    # -- loops --------------------------------------------------------------
    def trace_profile(self, seq, D: int, threads: int = 1) -> list[int]:
        """Exact counts G_D(d, ell) for ell = 0..n."""
        check_model(D)
        degs = _degrees(seq)
        n = len(degs)
        profile = [0] * (n + 1)
        terms = list(_diagonal_classes(degs, D))
        keys = [key for _, _, key in terms]
        values = self._count_many(keys, threads)
        for (ell, weight, _), value in zip(terms, values):
            profile[ell] += weight * value
        return profile

    def count_loopy(self, seq, D: int, threads: int = 1) -> int:
        return sum(self.trace_profile(seq, D, threads))

    def count_loopy_by_trace(self, seq, D: int, ell: int) -> int:
        check_model(D)
        degs = _degrees(seq)
        if not 0 <= ell <= len(degs):
            raise ValueError(f"trace {ell} outside 0..{len(degs)}")
        S = sum(degs)
        if (D == 1 and (S - ell) % 2) or (D == 2 and S % 2):
            return 0
        return sum(w * self.count_key(key) for e, w, key in _diagonal_classes(degs, D) if e == ell)

    def _count_many(self, keys: list[tuple[int, ...]], threads: int) -> list[int]:
        todo = sorted({k for k in keys if k and self.cache.get(k) is None
                       and sum(k) % 2 == 0 and k[0] <= len(k) - 1})
        if threads > 1 and len(todo) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                for key, value in zip(todo, pool.map(_worker_count, todo,
                                                     itertools.repeat(self.backend),
                                                     itertools.repeat(self.entry_cap))):
                    self.cache.put(key, value)
        return [self.count_key(k) for k in keys]

    def memo_size(self) -> int:
        return len(self._engine)


_WORKER: Counter | None = None


def _worker_count(key, backend, entry_cap):
    # each worker process keeps its own memo shard
    global _WORKER
    if _WORKER is None or _WORKER.backend != backend:
        _WORKER = Counter(backend=backend, entry_cap=entry_cap)
    return _WORKER.count_key(key)


def _degrees(seq) -> tuple[int, ...]:
    if isinstance(seq, DegreeSequence):
        return seq.degrees
    degs = tuple(int(x) for x in seq)
    if any(x < 0 for x in degs):
        raise ValueError("degrees must be nonnegative")
    return degs


def _diagonal_classes(degs: Sequence[int], D: int):
    """Yield (trace, multiplicity, residual key) over grouped diagonals.

    Vertices of equal degree are interchangeable, so a diagonal is described
    by how many loops k_v sit on the m_v vertices of degree v.
    """
    groups: dict[int, int] = {}
    for x in degs:
        groups[x] = groups.get(x, 0) + 1
    values = sorted(groups)
    ranges = [range(groups[v] + 1) if v >= D else range(1) for v in values]
    for ks in itertools.product(*ranges):
        weight = 1
        residual: list[int] = []
        for v, k in zip(values, ks):
            m = groups[v]
            weight *= math.comb(m, k)
            residual.extend([v - D] * k)
            residual.extend([v] * (m - k))
        yield sum(ks), weight, memo_key(residual)


# -- module-level convenience API ---------------------------------------------

_DEFAULT: Counter | None = None


def default_counter() -> Counter:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Counter()
    return _DEFAULT


def count_simple(seq, counter: Counter | None = None) -> int:
    """Number of loopless simple graphs with the given degree sequence."""
    return (counter or default_counter()).count_simple(seq)


def count_loopy(seq, D: int, counter: Counter | None = None, threads: int = 1) -> int:
    """|G_D(d)|: symmetric 0-1 matrices whose row sums, diagonal weighted by D, equal d."""
    return (counter or default_counter()).count_loopy(seq, D, threads=threads)


def count_loopy_by_trace(seq, D: int, ell: int, counter: Counter | None = None) -> int:
    return (counter or default_counter()).count_loopy_by_trace(seq, D, ell)


def trace_profile(seq, D: int, counter: Counter | None = None, threads: int = 1) -> list[int]:
    return (counter or default_counter()).trace_profile(seq, D, threads=threads)


def check_loop_bijection(seq, ell: int, counter: Counter | None = None) -> bool:
    """Loops under D=1 become edges to one extra vertex of degree ``ell``."""
    if ell < 0:
        raise ValueError("trace must be nonnegative")
    counter = counter or default_counter()
    degs = _degrees(seq)
    lhs = counter.count_loopy_by_trace(degs, 1, ell) if ell <= len(degs) else 0
    rhs = counter.count_simple(degs + (ell,))
    return lhs == rhs


def log_big(count: int) -> float:
    """Natural log of a positive integer of any size."""
    count = int(count)
    if count <= 0:
        raise ValueError("log_big needs a positive integer")
    bits = count.bit_length()
    if bits <= 1000:
        return math.log(count)
    # keep the top 64 bits; the discarded tail changes the log by < 2**-63
    shift = bits - 64
    return math.log(count >> shift) + shift * math.log(2)


def trace_pmf_exact(seq, D: int, counter: Counter | None = None) -> list[Fraction]:
    profile = trace_profile(seq, D, counter)
    total = sum(profile)
    if total == 0:
        raise ValueError("no matrices with this degree sequence")
    return [Fraction(c, total) for c in profile]
