"""An antiholomorphic mating from a univalent map on the disk.

Take f(z) = z + z^2/2 on the closed unit disk. It is injective there, with a
single critical point at -1 on the boundary. The correspondence built from f
and the circle reflection has one branch that is a Mobius reflection,
w = -2 - 1/conj(z), which fixes -1. Forward orbits therefore just converge
to -1.

The cubic f(z) = z + z^3/3 gives a two-to-two correspondence with a
nontrivial limit set, which is drawn to llmm.pgm.
"""

from pathlib import Path

import numpy as np

from holocorr import limit_set, llmm, render, univalence_diagnostic
from holocorr.io import write_pgm

p = [0, 1, 0.5]
print("univalence on the closed disk:", univalence_diagnostic(p))
c = llmm(p)
print("correspondence:", c)

z = np.array([0.3 + 0.4j, -2 + 1j, 5j])
print("first branch:", c.forward_many(z)[:, 0])
print("reflection  :", -2 - 1 / np.conj(z))

print("F(-1) =", c.forward(-1)[0].z)

cubic = llmm([0, 1, 0, 1 / 3])
print("cubic:", cubic)
cloud = limit_set(cubic, 1.5 + 0.5j, 18)
img = render(cloud, window=(-2.5, 2.5, -2.5, 2.5), resolution=(512, 512))
out = Path(__file__).with_name("llmm.pgm")
write_pgm(img, out)
print(f"{len(cloud)} points; wrote {out}")
