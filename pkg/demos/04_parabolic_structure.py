"""Parabolic fixed points of the Bullett-Penrose family and of the cauliflower.

For Bullett-Penrose correspondences ((aw - 1)/(w - 1))^2 + (aw - 1)/(w - 1)
(az + 1)/(z + 1) + ((az + 1)/(z + 1))^2 = 3, the point 0 is fixed by one
branch with multiplier 1 while the other branch through 0 is critical. The
petal number is read off from how fast orbits creep into the fixed point.
"""

from holocorr import bullett_penrose, dirac_conformality_check, from_rational_inverse, parabolic_order

for a in (4.0, 4.3 + 0.2j):
    c = bullett_penrose(a)
    fps = [fp for fp in c.fixed_points() if abs(fp.point.z) < 1e-9]
    for fp in fps:
        print(f"a = {a}: fixed point {fp.point.z:.2e}, multiplier {fp.multiplier:.6f}, class {fp.cls}")
    print("  forward images of 0:", [complex(round(p.z.real, 9), round(p.z.imag, 9)) for p in c.forward(0)])
    print("  petals:", parabolic_order(c, 0)["p"])
    chk = dirac_conformality_check(c, 0, 1.0)
    print("  a critical branch passes through 0:", chk["critical_branch"])

cf = from_rational_inverse([0.25, 0, 1])
res = parabolic_order(cf, 0.5)
print(f"cauliflower at 1/2: p = {res['p']} from slope {res['slope']:.3f}")
