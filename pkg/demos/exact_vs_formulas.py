"""
Exact counts against the closed formulas
========================================

Count loopy regular graphs exactly, then see how close each asymptotic
formula gets.  Sparse formulas should win at small degree, the dense ones
near half density.
"""

from loopcount import asymptotics as asy
from loopcount.exact import Counter

counter = Counter()

###############################################################################
# Two-regular graphs with loops counted twice: sparse territory.

print(f"{'n':>4} {'digits':>7} {'sparse':>10} {'dense':>10} {'conj':>10}")
for n in (10, 20, 40, 80):
    exact = counter.count_loopy([2] * n, 2)
    ratios = [float(f.log_ratio(exact)) for f in (asy.sparse_GD([2] * n, 2),
                                                  asy.dense_GD_total([2] * n, 2),
                                                  asy.conjecture_G2(n, 2))]
    print(f"{n:>4} {len(str(exact)):>7} " + " ".join(f"{r:>10.5f}" for r in ratios))

###############################################################################
# Half density: the dense formula and the conjecture take over.

for n in (10, 14, 18):
    d = n // 2
    exact = counter.count_loopy([d] * n, 2)
    print(n, d, float(asy.dense_GD_total([d] * n, 2).log_ratio(exact)),
          float(asy.conjecture_G2(n, d).log_ratio(exact)))

###############################################################################
# Loops counted once.  All-ones sequences are involutions.

for n in (20, 100, 400):
    exact = counter.count_loopy([1] * n, 1)
    print(n, len(str(exact)), "digits", float(asy.sparse_GD([1] * n, 1).log_ratio(exact)))
