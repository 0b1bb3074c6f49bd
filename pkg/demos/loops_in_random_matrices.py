"""
Loops in unconditioned random symmetric matrices
================================================

Among all symmetric 0-1 matrices with S ones, the mean number of diagonal
ones sits within 1/2 of lbar_1 with d = S/n.  The table also gives the
lbar_1/n against density curve, next to the mu_2 line for loops counted
twice.
"""

from fractions import Fraction

from loopcount import asymptotics as asy
from loopcount.core import DegreeSequence, lbar, lbar1

n = 20
print(f"{'S':>5} {'mean':>10} {'lbar1':>10} {'mode':>8}")
for S in range(20, n * n, 40):
    mean = asy.mean_loops_A(n, S)
    lb = float(lbar1(n, Fraction(S, n)))
    counts = [asy.loop_count_A(n, S, ell) for ell in range(n + 1)]
    mode = counts.index(max(counts))
    print(f"{S:>5} {float(mean):>10.4f} {lb:>10.4f} {mode:>8}")

###############################################################################
# The curves: lbar_1/n and mu_2 against density (n = 50).

n = 50
for d in range(0, n + 1, 5):
    print(d / n, float(lbar(DegreeSequence.regular(n, d), 1)) / n, d / (n + 1))
