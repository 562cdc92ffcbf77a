"""The sphere as a compactified Heisenberg group.

Points of the pseudoconformal 5-sphere are null lines for a Hermitian form of
signature (3, 1). Away from one point they are parametrized by (t, z) in
R x C^2; the involution swaps that point with the origin.
"""

import numpy as np

from pcwillmore.model import contact_form_eval, herm_product, involution, stereo_project, stereo_unproject

rng = np.random.default_rng(7)
t = rng.normal(size=5)
z = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))

w = stereo_unproject(t, z)
print("null vectors <w, w>:", np.abs(herm_product(w, w)).max())
t2, z2 = stereo_project(w)
print("round trip error:", max(np.abs(t2 - t).max(), np.abs(z2 - z).max()))

ti, zi = involution(t, z)
t3, z3 = involution(ti, zi)
print("involution twice:", max(np.abs(t3 - t).max(), np.abs(z3 - z).max()))

# the unit sphere t = 0, |z|^2 = 2 is fixed pointwise
zs = np.array([1.0, 1.0j])
print("fixed point:", involution(0.0, zs))

# horizontal directions: dt cancels the contact form
zdot = np.array([0.3 - 1j, 2.0])
tdot = np.sum(zdot * z[0].conj()).imag
print("contact form on a horizontal vector:", contact_form_eval(z[0], tdot, zdot))
