# Closed-form variation constants and the p -> infinity limits.
from graphmax import (build_named, delta_variation_ratio, kn_limit, kn_var_constant,
                      star_limit, star_norm_star, star_var2_constant, star_var2_extremizer)
from graphmax.maximal import graph_maximal, p_variation

# Var_2 on stars: the extremizer attains sqrt(n^2-n-1)/n
for n in (3, 5, 10):
    g = build_named("star", n)
    f = star_var2_extremizer(n, 2.0, 1.0)
    ratio = p_variation(g, graph_maximal(g, f).values, 2) / p_variation(g, f, 2)
    print(f"S{n}: constant {star_var2_constant(n):.12f}  extremizer {ratio:.12f}")

# complete graphs: a delta gives 1 - 1/n
for n in (2, 5, 8):
    print(f"K{n}: delta ratio {delta_variation_ratio(build_named('complete', n), 1.0, 0):.6f}"
          f"  constant {kn_var_constant(n):.6f}")

# limits of ||M||_p^p
print("kn_limit(3)", kn_limit(3))
print("star_limit(25)", star_limit(25))
print("star_limit(9)", star_limit(9).value, "(numeric, flagged inexact)")
for p in (10, 100, 400):
    print(f"star_norm_star(25, {p})^p = {star_norm_star(25, p).ratio:.5f}")
