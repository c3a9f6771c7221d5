"""Is the atomic measure on the circle conformal of exponent 1 and not 2?

For w^2 = z and a disk A, the branch f: A -> f(A) is a square root, with
|f'| = 1/(2|z|). A conformal measure of exponent delta satisfies

    mu(f(A)) = integral over A of |f'|^delta dmu.

The atomic measure built at depth N satisfies this for delta = 1 up to an
error of roughly one level out of N. For delta = 2 it is far off. Residuals
shrink as the depth grows.
"""

import numpy as np

from holocorr import conformality_residuals, from_rational_inverse, patterson_sullivan

c = from_rational_inverse([0, 0, 1])
centers = np.exp(1j * np.array([0.6, 2.0, 3.4, 4.8]))

for depth in (10, 14, 18):
    m = patterson_sullivan(c, 1, 1.0, depth)
    rows = [conformality_residuals(m, c, z, 0.5, [1.0, 2.0]) for z in centers]
    r1 = max(r[0].rel_residual for r in rows)
    r2 = min(r[1].rel_residual for r in rows)
    print(f"depth {depth:2d}: {len(m.points):8d} atoms, worst residual at delta=1 {r1:.4f}, "
          f"best at delta=2 {r2:.4f}")

rep = conformality_residuals(m, c, centers[0], 0.5, [1.0])[0]
print("one disk in detail:", {k: rep.to_json()[k] for k in ("lhs", "rhs", "rel_residual")})
