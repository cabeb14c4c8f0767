"""Exact extremal numbers for small daisies by branch and bound.

The solver is seeded with the finite-field families, so it only has to
prove that nothing larger exists.
"""

import time

from daisyturan import max_daisy_free
from daisyturan.hypergraph import DaisyShape

for shape, ns in [(DaisyShape(2, 2, 3), range(3, 8)), (DaisyShape(3, 2, 4), range(5, 8)), (DaisyShape(3, 3, 4), range(4, 7))]:
    for n in ns:
        t0 = time.perf_counter()
        res = max_daisy_free(n, shape, time_budget=60)
        status = "optimal" if res.proved_optimal else "best found"
        print(f"(r,s,t)=({shape.r},{shape.s},{shape.t}) n={n}: {res.best_size} ({status}, "
              f"{res.nodes_explored} nodes, {time.perf_counter() - t0:.2f}s)")
