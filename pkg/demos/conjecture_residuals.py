"""
How good is the conjectured formula for loopy regular graphs?
=============================================================

The residual log(exact / conjecture) times n^2 should stay inside (-2, 0).
Odd n forces even d, which shows up as two interleaved bands.
"""

import mpmath

from loopcount import asymptotics as asy
from loopcount.exact import Counter

counter = Counter()

for n in range(4, 19):
    row = []
    for d in range(1, n + 1):
        if n * d % 2:
            row.append("      .")
            continue
        r = asy.conjecture_G2(n, d).log_ratio(counter.count_loopy([d] * n, 2))
        row.append(f"{float(r * n * n):7.3f}")
        assert -2 / mpmath.mpf(n) ** 2 < r < 0
    print(f"n={n:2d}", "".join(row))

###############################################################################
# The naive independent-row estimate misses by roughly sqrt(2) e^(1/4).

n, d = 18, 8
exact = counter.count_loopy([d] * n, 2)
print(float(asy.naive_G2(n, d).log_ratio(exact)), "vs", float(mpmath.log(2) / 2 + 0.25))
