# All connected graphs on a few vertices, and their variation constants at p = 1.
from graphmax import check_prop43, enumerate_connected, scan_variation_constants

for n in range(2, 7):
    print(n, "vertices:", sum(1 for _ in enumerate_connected(n)), "connected graphs")

summary = scan_variation_constants(4, 1.0)
print(f"n=4: c_hat {summary.c_hat:.4f}  C_hat {summary.C_hat:.4f}  certified {summary.certified}")
for rec in summary.records:
    print(" ", rec.graph.edges, "estimate", round(rec.variation_estimate.best_value, 4),
          "delta floor", round(rec.delta_floor, 4), "k", rec.prop43_k)

# graphs where the disjoint-path hypothesis holds get the floor 1 - 1/n
hits = [g for g in enumerate_connected(5) if check_prop43(g) is not None]
print(len(hits), "of 21 graphs on 5 vertices satisfy the path hypothesis")
print(summary.summary_csv())
