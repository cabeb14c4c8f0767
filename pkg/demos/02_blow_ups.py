"""Blow-ups keep daisy-freeness and keep most of the density.

Each vertex becomes a class; an edge becomes every transversal of its
classes. When the ground set size is not a multiple of the class count,
the padded variant distributes vertices as evenly as possible.
"""

from daisyturan import assert_daisy_free, blow_up, density, fano_complement
from daisyturan.bounds import blowup_density_bound
from daisyturan.constructions import padded_independent_family
from daisyturan.hypergraph import DaisyShape

shape = DaisyShape(3, 2, 4)
F = fano_complement()
for f in (1, 2, 3, 4):
    B = blow_up(F, f)
    cert = assert_daisy_free(B, shape)
    print(f"factor {f}: n={B.n}, {len(B)} edges, density {float(density(B)):.4f}, daisy-free {cert.passed}")
print("union-bound guarantee for q=2, r=3:", blowup_density_bound(2, 3))

for n in (10, 12, 16, 20):
    P = padded_independent_family(2, 3, 0, n)
    print(f"padded n={n}: density {float(density(P)):.4f}, daisy-free {assert_daisy_free(P, shape).passed}")
