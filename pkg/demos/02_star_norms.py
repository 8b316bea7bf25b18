# Norm of the maximal operator on stars: closed form, grid oracle, coordinate ascent.
import math

from graphmax import (SearchConfig, ascent_norm, build_named, grid_oracle_norm,
                      soria_tradacete_star_bounds, star_norm_formula, star_norm_structured)

res = star_norm_formula(3, 2)
print(f"S3, p=2 closed form: {res.value:.6f} at x* = {res.x_star:.6f}")
print(f"  root of 2x^2+5x-1: {(-5 + math.sqrt(33)) / 4:.6f}")

for n in (3, 4, 5):
    g = build_named("star", n)
    for p in (1.5, 2.0):
        grid = grid_oracle_norm(g, p, 0.01)
        print(f"n={n} p={p}: formula {star_norm_formula(n, p).value:.6f}  "
              f"grid(0.01) {grid.best_value:.6f}  argmax {grid.argmax.round(2)}")

# ascent finds the same shape: one big center, equal leaves
g = build_named("star", 6)
found = ascent_norm(g, 2, SearchConfig(seed=1, restarts=8))
print("S6 ascent", round(found.best_value, 6), found.argmax.round(4), found.structure_note)
print("S6 structured family", round(star_norm_structured(6, 2).best_value, 6))

# the p-th power always sits between the simple bounds
for p in (1.0, 1.5, 2.0, 3.0):
    lo, hi = soria_tradacete_star_bounds(6, p)
    print(f"p={p}: {lo:.4f} <= {star_norm_formula(6, p).value ** p:.4f} <= {hi:.4f}")
