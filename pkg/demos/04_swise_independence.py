"""s-wise independent sets and the counting bound.

The sums of s/2 scaled vectors from an s-wise independent set are all
distinct, so (q-1)^(s/2) C(|X|, s/2) <= q^d, which gives |X| <= s q^(2d/s - 1).
"""

from daisyturan.constructions import special_daisy_params
from daisyturan.swise import earnest_bound, max_swise_independent, verify_counting_inequality

print(" q  d  s  max  bound  certificate")
for q in (2, 3):
    for d in (2, 3, 4, 5):
        for s in (2, 4):
            if q**d > 256:
                continue
            inst = max_swise_independent(q, d, s)
            cert = verify_counting_inequality(q, s, inst)
            print(f"{q:2} {d:2} {s:2} {inst.max_found:4} {float(earnest_bound(q, s, d)):6.2f}  "
                  f"{'pass' if cert.passed else 'FAIL'}{'' if inst.proved_optimal else ' (not proved)'}")

print("petal counts that force dependence, s = k, q = 2, m = k:")
print([special_daisy_params(k, 2, k) for k in (2, 4, 6, 8)])
