"""Maximal green sequences: exhaustive search on small quivers, BFS on punctured disks.

Run: python3 demos/green_sequences.py
"""

from clusterdual.green import enumerate_mgs, search_mgs, verify_mgs
from clusterdual.quiver import punctured_disk_quiver, quiver_to_seed
from clusterdual.seed import Seed

a3 = Seed.initial([[0, 1, 0], [-1, 0, 1], [0, -1, 0]])
found = sorted(enumerate_mgs(a3, 10), key=lambda s: (len(s), s))
print(f"linear A3: {len(found)} maximal green sequences")
for seq in found:
    print("  ", seq)

for r in (1, 2):
    q = punctured_disk_quiver(r)
    s = quiver_to_seed(q, track_variables=False)
    res = search_mgs(s, budget=10_000)
    print(f"\npunctured disk, rank {r}: {len(q.mutable)} mutable, {len(q.frozen)} frozen")
    print("  shortest MGS:", res.sequence, f"(explored {res.explored} states)")
    print("  independent re-check:", verify_mgs(s, res.sequence)[0])
