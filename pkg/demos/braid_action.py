"""Braid group action on Borel pairs: the worked PGL3 pair and random SL3 pairs.

Run: python3 demos/braid_action.py
"""

import random

from clusterdual import borel as bm
from clusterdual.checks import example_pair

p = example_pair()
print("b1 =", bm.mat_str(p.b1))
print("b2 =", bm.mat_str(p.b2))
print("in dual group:", bm.in_dual_group(p))
for i in (1, 2):
    q = bm.braid_sigma(i, p)
    print(f"\nsigma_{i}:")
    print("  b1 ->", bm.mat_str(q.b1))
    print("  b2 ->", bm.mat_str(q.b2))

print("\nbraid relation on the symbolic pair:", bm.braid_word([1, 2, 1], p) == bm.braid_word([2, 1, 2], p))

rng = random.Random(1)
ok = 0
for _ in range(50):
    r = bm.random_borel_pair(rng, 3)
    swapped = bm.weyl_swap(bm.tau(r), 1)
    ok += bm.mat_eq(bm.tau(bm.braid_sigma(1, r)), swapped)
print(f"tau(sigma_1 p) = s_1 tau(p) on {ok}/50 random SL3 pairs")
