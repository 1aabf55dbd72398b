"""A2 walk-through: the five-periodic exchange graph and upper-bound membership.

Run: python3 demos/pentagon_and_upper_bound.py
"""

from clusterdual.exact import RatFunc
from clusterdual.seed import Seed, apply_sequence, mutate
from clusterdual.upper_bound import enumerate_charts, upper_bound_member

s = Seed.initial([[0, 1], [-1, 0]])
print("start:", [str(v) for v in s.variables])

# walk around the pentagon one mutation at a time
t = s
for step, k in enumerate((1, 2, 1, 2, 1), 1):
    t = mutate(t, k)
    eps = [[str(v) for v in row] for row in t.epsilon_hat]
    print(f"after mu_{k} (step {step}):", [str(v) for v in t.variables], "eps_hat", eps)
end = apply_sequence(s, (1, 2, 1, 2, 1))
print("five steps swap the coordinates:", end.variables == (s.variables[1], s.variables[0]))

charts = enumerate_charts(s)
print(f"\n{len(charts)} charts reached:", charts.paths)

x1, x2 = RatFunc.symbols(["x1", "x2"])
for f in [x1, x2, (1 + x2) / x1, x1 * x2 + x1 + 1]:
    cert = upper_bound_member(f, s)
    verdict = "member" if cert.member else f"fails in chart {cert.witness}"
    print(f"{str(f):>22}: {verdict}")
