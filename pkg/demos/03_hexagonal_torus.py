"""Invariants of the hexagonal Legendrian torus in S^5.

The torus |x_i|^2 = 1/3 is flat, has constant |h|^2 and is Willmore. Its
energy works out to 4 pi^2 / sqrt(3).
"""

import math

from pcwillmore.s5 import (
    equatorial_s2,
    gauss_equation_residual,
    hexagonal_torus,
    legendrian_check,
    point_invariants,
    willmore_energy_s5,
    willmore_residual,
)
from pcwillmore.s5.invariants import sample_grid

for surface in (hexagonal_torus(), equatorial_s2()):
    u, v, _ = sample_grid(surface, 8, 8)
    inv = point_invariants(surface, u, v)
    print(surface.name)
    print("  legendrian residual ", legendrian_check(surface))
    print("  gauss curvature     ", float(inv.K.mean()))
    print("  gauss equation      ", float(gauss_equation_residual(inv).max()))
    print("  willmore residual   ", float(abs(willmore_residual(surface, u[:4], v[:4]).residual).max()))
    print("  energy              ", willmore_energy_s5(surface, 64))
print("4 pi^2 / sqrt 3       ", 4 * math.pi**2 / math.sqrt(3))
