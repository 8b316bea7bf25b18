# Maximal function on a few small graphs, and the ratios that the searches maximize.
import numpy as np

from graphmax import build_named, graph_maximal, norm_ratio, p_variation, variation_ratio

s3 = build_named("star", 3)  # center is vertex 0
prof = graph_maximal(s3, [1, 2, 0.5])
print("star S3, f = (1, 2, 0.5)")
print("  Mf          ", prof.values)
print("  best radius ", prof.best_radius)

# on K_n a delta spreads evenly: Mf = max(f, mean f)
k4 = build_named("complete", 4)
print("K4 delta     ", graph_maximal(k4, [1, 0, 0, 0]).values)

# ratios used by the extremizer searches
f = np.array([0.0, 1.0, 0.3, 0.3, 0.3])
s5 = build_named("star", 5)
print("S5 norm ratio p=2      ", norm_ratio(s5, f, 2))
print("S5 variation ratio p=1 ", variation_ratio(s5, f, 1))
print("Var_1 f on S5          ", p_variation(s5, f, 1))

# a cycle: every vertex sees the whole graph at radius 3
c6 = build_named("cycle", 6)
print("C6 delta     ", graph_maximal(c6, np.eye(6)[0]).values.round(4))
