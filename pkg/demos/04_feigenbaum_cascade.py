"""Period-doubling cascades and the Feigenbaum constant.

After the trifurcation, the period-3 orbit doubles: 3, 6, 12, 24, 48,
... accumulating at the chaos point near a = 13.78.  The ratios of
successive gaps between doubling parameters approach the universal
4.669.  The same happens for the 3-D product family (1, 4, 8, 16, ...)
and, under V-iteration of a two-parameter 3-to-2 family with one
parameter frozen, the constant appears yet again.
"""

from geniter import feigenbaum, period_table

print("Coarse sweep of the 2-D product-logistic family, seeds (0.5, 0.5):")
table = period_table("logistic2", "F", (0.5, 0.5), (12.4, 13.80), 36)
for a, rep in table.rows():
    marker = rep.period if rep.period else rep.kind
    print(f"  a = {a:.4f}  ->  {marker}")

print("\nDoubling points of the 3 -> 6 -> 12 -> 24 -> 48 cascade:")
est = feigenbaum("logistic2", "F", (0.5, 0.5), base_period=3, doublings=4,
                 a_start=13.3, a_stop=13.82, tol=1e-9)
for k, mu in enumerate(est.mus, start=1):
    print(f"  mu_{k} = {mu:.9f}")
print(f"  gap ratios: {[round(r, 4) for r in est.ratios]}")
print(f"  delta estimate {est.delta_est:.4f} (universal value 4.669...)")
print(f"  extrapolated accumulation point mu_inf = {est.mu_inf:.5f}")

print("\n3-D family a*x(1-x)*y(1-y)*z(1-z): cascade 1, 4, 8, 16, ...")
table3 = period_table("logistic3", "F", (0.5, 0.5, 0.5), (48.0, 54.4), 14)
for a, rep in table3.rows():
    print(f"  a = {a:.3f}  ->  {rep.period if rep.period else rep.kind}")

print("\nV-iterating the 3-to-2 family (b frozen at 0.9), base period 2:")
est2 = feigenbaum("twoparam32", "V", (0.4, 0.5, 0.6), base_period=2,
                  doublings=5, a_start=54.0, a_stop=60.75, tol=1e-7,
                  params={"b": 0.9})
print(f"  mus: {[round(m, 5) for m in est2.mus]}")
print(f"  ratios: {[round(r, 3) for r in est2.ratios]}  (heading for 4.669 again)")
