"""The squaring correspondence w^2 = z, where every answer is known in closed form.

Starting at x = 1, level n of the backward tree consists of the 2^n roots of
unity of order 2^n, and each branch contracts by exactly 1/2 per step. So the
level sums are a[n] = 2^(n (1 - s)), the critical exponent is 1, and the limit
set is the unit circle. This script checks all three numerically.
"""

import numpy as np

from holocorr import box_dimension, critical_exponent, from_rational_inverse, level_sums, limit_set

c = from_rational_inverse([0, 0, 1])
print("correspondence:", c)

for s in (0.5, 1.0, 1.5):
    a = level_sums(c, 1, s, 12).a
    exact = 2.0 ** (np.arange(13) * (1 - s))
    print(f"s = {s}: worst relative error against 2^(n(1-s)) is {np.max(np.abs(a / exact - 1)):.1e}")

est = critical_exponent(c, 1, depth=16)
print(f"critical exponent {est.delta:.4f} (bracket {est.bracket[0]:.4f}..{est.bracket[1]:.4f})")

cloud = limit_set(c, 1, 16)
radii = np.abs(cloud.finite)
print(f"{len(cloud)} limit-set points, |z| in [{radii.min():.12f}, {radii.max():.12f}]")
print(f"box dimension {box_dimension(cloud).dim:.3f} (the circle has dimension 1)")
