"""Watch the three stopping residuals decay.

The trace is the per-iteration triple (||B - S||, ||S_new - S||, ||L||)
recorded with the stopping rule switched off, averaged here over a few
instances. Printing every hundredth iteration is enough to see the
geometric decay down to round-off.
"""

from jointsparse.bench import mean_residual_trace

trace = mean_residual_trace((500, 150, 50, 10), seeds=range(5))
print(f"{'iter':>5} {'primal':>10} {'change':>10} {'dual':>10}")
for k in (1, 10, 50, 100, 200, 400, 700, 1000):
    p, c, d = trace[k - 1]
    print(f"{k:5d} {p:10.2e} {c:10.2e} {d:10.2e}")
