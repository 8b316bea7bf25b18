# Maximal operators on the integers: variation with rigorous tails, Lipschitz bound, and
# an empirical scan of the conjectured constant below p = 1.
import numpy as np

from graphmax import (LatticeFunction, check_lipschitz_half, check_var_norm_bound, conjecture_scan,
                      cp_constant, delta, indicator, tent, z_variation)
from graphmax.zline import centered_maximal_z

print("M delta on -3..3:", centered_maximal_z(delta(), range(-3, 4)).round(4))

for p in (1.0, 0.9, 0.75):
    c = cp_constant(p)
    print(f"C_{p} = {c.value:.12f} +- {c.error:.1e}")

v = z_variation(delta(), 1.0, 1e-10)
print(f"Var_1(M delta) = {v.value:.12f} +- {v.error:.1e}")
print("var-norm ratio, delta    ", check_var_norm_bound(delta(), 1).ratio)
print("var-norm ratio, indicator", check_var_norm_bound(indicator(0, 2), 1).ratio)

print("Lipschitz, delta", check_lipschitz_half(delta()).ratio)
print("Lipschitz, tent ", check_lipschitz_half(tent(10)).ratio)
f = LatticeFunction(0, np.array([0.2, 0.0, 1.0, 0.4]))
print("Lipschitz, random", check_lipschitz_half(f).ratio)

# at p = 1 the delta is extremal; at p = 0.8 long indicators beat it
for p in (1.0, 0.8):
    rep = conjecture_scan(p, n_random=200)
    print(f"p={p}: max ratio {rep.max_ratio:.6f} ({rep.argmax_kind}), conjectured "
          f"{rep.conjectured_constant:.6f}, violations {len(rep.violations)}")
