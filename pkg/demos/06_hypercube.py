"""Sets of hypercube vertices meeting every d-dimensional subcube.

Every (d+1)-th layer hits all d-subcubes with density about 1/(d+1).
Placing complements of daisy-free families on every ceil(d/2)-th layer
does better once d >= 8.
"""

from daisyturan import bounds
from daisyturan.cube import (
    five_point_family,
    gamma_report,
    hits_every_subcube,
    layered_hitting_family,
    layers_mod_construction,
    max_count_per_subcube,
)

n = 12
for d in (2, 3, 4):
    F = layers_mod_construction(n, d + 1)
    print(f"every {d + 1}th layer, n={n}: density {float(F.density()):.4f}, hits all {d}-subcubes: "
          f"{hits_every_subcube(F, d).passed}")

for n, d in [(8, 6), (12, 8), (14, 9)]:
    F = layered_hitting_family(n, d)
    print(f"layered transversal n={n} d={d}: density {float(F.density()):.4f}, hits: {hits_every_subcube(F, d).passed}")

for d in (8, 9, 12, 20, 40):
    rep = gamma_report(d)
    print(f"d={d}: q={rep.q_of_d} limit bound {float(rep.gamma_upper):.5f} vs 1/(d+1) = {1 / (d + 1):.5f}")

F = five_point_family(12)
cert = max_count_per_subcube(F, 4, 5)
print(f"five-point family n=12: density {float(F.density()):.4f}, max per 4-subcube {cert.fields['max_count']}")
print(f"limit density beta_2 / 3 = {float(bounds.beta(2)) / 3:.4f}")
