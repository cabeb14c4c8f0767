"""Daisy-free families from linear independence over finite fields.

Vertices of [q^r - 1] are the nonzero vectors of F_q^r; keep the r-sets
that form a basis. Four petals over a fixed stem would give four pairwise
independent vectors in a 2-dimensional quotient, which F_2 cannot supply,
so the family has no (r,2,4)-daisy when q = 2.
"""

from daisyturan import assert_daisy_free, construct_independent_family, density, fano_complement, find_daisy
from daisyturan.constructions import independent_density_lower
from daisyturan.hypergraph import DaisyShape

F = construct_independent_family(2, 3)
print(f"bases of F_2^3: {len(F)} triples on [{F.n}], density {density(F)}")
print("same as the complement of the Fano lines:", F == fano_complement())
print(assert_daisy_free(F, DaisyShape(3, 2, 4)).to_json())

for q, r in [(2, 4), (2, 5), (3, 3)]:
    G = construct_independent_family(q, r)
    shape = DaisyShape(r, 2, q + 2)
    cert = assert_daisy_free(G, shape)
    print(f"q={q} r={r}: {len(G)} members, density {float(density(G)):.4f} "
          f"> {float(independent_density_lower(q, r)):.4f}, (r,2,{q + 2})-daisy-free: {cert.passed}")

# over F_3 two petals are not enough to force dependence: t must grow to q + 2
w = find_daisy(construct_independent_family(3, 3), DaisyShape(3, 2, 4))
print("F_3^3 bases contain a (3,2,4)-daisy:", w)
