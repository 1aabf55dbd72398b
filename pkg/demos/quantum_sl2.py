"""U_q(sl2): Casimir, theta basis expansions and the semiclassical Poisson brackets.

Run: python3 demos/quantum_sl2.py
"""

from clusterdual import uqsl2 as uq

C = uq.casimir()
print("C =", C)
print("C E - E C =", C * uq.E - uq.E * C)

for text in ("E*F", "F*E", "E*F*K^-1", "E^2*F^2"):
    x = uq.parse_expr(text)
    print(f"\n{text} = {x}")
    for idx, c in sorted(uq.expand_in_theta(x).items()):
        print(f"   {c}  theta[{idx}]")

a = uq.theta_element(uq.ThetaIndex("E", 1, 0, 1))
b = uq.theta_element(uq.ThetaIndex("F", 0, 1, 0))
print("\ntheta[E(1,0,1)] * theta[F(0,1,0)] =")
for idx, c in sorted(uq.expand_in_theta(a * b).items()):
    print(f"   {c}  theta[{idx}]")

for x, y, name in ((uq.K, uq.E, "{k, e}"), (uq.K, uq.F, "{k, f}"), (uq.E, uq.F, "{e, f}")):
    print(f"{name} = {uq.sl2_bracket(x, y)}")
