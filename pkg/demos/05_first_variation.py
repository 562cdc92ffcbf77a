"""Willmore surfaces are critical: a compactly supported contact flow does
not change the energy to first order.

We push the lift of a (2, 2) curve with a bump Hamiltonian and differentiate
the energy of the Lagrangian shadow. This takes a minute or so.
"""

import math

import numpy as np

from pcwillmore.s5 import equatorial_s2
from pcwillmore.s5.flows import random_bump
from pcwillmore.variation import first_variation_lift, first_variation_s5, lift_bump
from pcwillmore.weierstrass import legendrian_lift, solve_22

energy = 12 * math.pi
lift = legendrian_lift(solve_22(0).curve)
rng = np.random.default_rng(3)
for k in range(2):
    H, xi0 = lift_bump(lift, rng)
    r = first_variation_lift(lift, H, energy, xi0, tol=1e-3 * energy)
    print(f"bump {k}: dW/deps = {r.derivative:+.2e} +- {r.error:.1e} on a {r.details['grid']} grid")

s2 = equatorial_s2()
c = s2.position(0.5, 0.7)
H = random_bump(rng, np.concatenate([c.real, c.imag]), 0.8)
print("equatorial sphere:", first_variation_s5(s2, H, 1e-4, 32).derivative)
