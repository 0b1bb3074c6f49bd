"""
The number of loops in a random loopy graph
===========================================

Compare the exact law of the trace with the binomial (dense) and Poisson
binomial (sparse) approximations.
"""

import numpy as np

from loopcount import dist
from loopcount.exact import Counter

counter = Counter()

###############################################################################
# Dense: a 6-regular graph on 12 vertices, loops counted twice.

seq = [6] * 12
exact = dist.trace_law_exact(seq, 2, counter)
dense = dist.trace_law_dense(seq, 2)
np.set_printoptions(precision=4, suppress=True)
print(exact.pmf)
print(dense.pmf)
print("TV", exact.tv(dense), "means", exact.mean(), dense.mean())

###############################################################################
# Sparse: 4-regular with loops counted twice.  The TV distance shrinks with n.

for n in (9, 15, 21, 27):
    law = dist.trace_law_exact([4] * n, 2, counter)
    print(n, round(law.tv(dist.trace_law_sparse([4] * n, 2)), 4), round(law.mean(), 4),
          dist.sparse_trace_mean([4] * n, 2))

###############################################################################
# Loops counted once live on one parity class.

law = dist.trace_law_exact([3] * 10, 1, counter)
print(law.support_parity, law.pmf)
