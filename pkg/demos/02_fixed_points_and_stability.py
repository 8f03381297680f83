"""Diagonal fixed points and their stability for the product-logistic
family f_a(x, y) = a x(1-x) y(1-y).

Fixed points of the generalized iteration lie on the diagonal: they are
the roots of f(x, ..., x) = x.  For this family that means
a(x^4 - 2x^3 + x^2) = x, so besides 0 there are two positive roots
0 < r1(a) < r2(a) once a > 27/4.  r1 attracts only a one-dimensional
set of seeds (semi-instable); r2 attracts a two-dimensional region but
not everything (semi-stable) until it turns repelling past the last
trifurcation at a = 13.5, where both partial derivatives hit -1.
"""

import numpy as np

from geniter import (diagonal_fixed_points, make_family, stability_class,
                     stability_partials)
from geniter.analysis import iteration_multipliers

for a in (5.0, 6.75, 10.0, 13.0, 13.5):
    spec = make_family("logistic2", a=a)
    fps = diagonal_fixed_points(spec)
    rendered = ", ".join(f"{fp.value:.9f} (residual {fp.residual:.1e})"
                         for fp in fps)
    print(f"a = {a:<6} roots: {rendered}")

print("\nPartial derivatives at a = 13.5 (the last trifurcation point):")
spec = make_family("logistic2", a=13.5)
for point in ((2/3, 2/3), (1/3, 1/3), (2/3, 1/3), (1/3, 2/3)):
    grad = stability_partials(spec, point)
    print(f"  grad f at ({point[0]:.4f}, {point[1]:.4f}) = "
          f"({grad[0]:+.6f}, {grad[1]:+.6f})")

print("\nEmpirical stability classes at a = 13 (1000 random seeds each):")
spec13 = make_family("logistic2", a=13.0)
for fp in diagonal_fixed_points(spec13):
    label = stability_class(spec13, "F", fp.value)
    mults = np.abs(iteration_multipliers(spec13, fp.value))
    print(f"  x* = {fp.value:.6f}: {label:<18} |multipliers| = "
          f"{np.array2string(np.sort(mults), precision=3)}")

print("\nBeyond a = 13.5 the interior fixed point repels everything:")
spec14 = make_family("logistic2", a=13.8)
r2 = diagonal_fixed_points(spec14)[2].value
print(f"  a = 13.8, r2 = {r2:.6f}: {stability_class(spec14, 'F', r2)}")
