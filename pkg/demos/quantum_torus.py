"""Quantum torus of a B2 seed: twisted products, semiclassical limit, quantum mutation.

Run: python3 demos/quantum_torus.py
"""

from clusterdual.qtorus import QTorus, quantum_images, quantum_mutate_check, semiclassical_bracket
from clusterdual.seed import Seed, poisson_bracket

s = Seed.initial([[0, 1], [-1, 0]], multipliers=(1, 2))
t = QTorus(s)
x1, x2 = t.generator(1), t.generator(2)
print(f"d = {t.d} (coefficients live in Z[q^(1/{t.d})])")
print("X1 X2 =", x1 * x2)
print("X2 X1 =", x2 * x1)

f = x1 * x2 + x1
print("\n{X1 X2 + X1, X2} semiclassically:", semiclassical_bracket(f, x2))
print("classical bracket:               ", poisson_bracket(f.classical().to_ratfunc(), x2.classical().to_ratfunc(), s))

for k in (1, 2):
    imgs = quantum_images(t, k)
    print(f"\nmutation in direction {k}:")
    for i, img in enumerate(imgs, 1):
        print(f"  X'_{i} at q = 1: {img.classical()}")
    rep = quantum_mutate_check(t, k)
    print("  classical limit ok:", rep.classical_ok, " commutation relations ok:", rep.ok)
