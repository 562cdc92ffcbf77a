"""Willmore surfaces from meromorphic curves in C^2.

A pair of rational functions with simple poles and residue-free exact
Re(f1 df2 - f2 df1) lifts to a closed Legendrian surface. Its Willmore energy
is 4 pi (number of poles - 1), which we recover three ways.
"""

import math

from pcwillmore.weierstrass import (
    MeromorphicCurve,
    end_closure_check,
    legendrian_lift,
    solve_22,
    validate_data,
    willmore_energy,
)
from pcwillmore.errors import NonzeroResidue

fx = solve_22(0)
curve = fx.curve
print("f1 =", curve.f1.to_text())
print("f2 =", curve.f2.to_text())
print("valid:", validate_data(curve).is_valid)

e = willmore_energy(curve)
print(f"formula    {e.formula_value:.10f}")
print(f"degree     {e.degree_value:.10f}  (Gauss map degree {e.gauss_degree})")
print(f"quadrature {e.quadrature_value:.10f}  (relative error {abs(e.quadrature_value / (12 * math.pi) - 1):.1e})")

lift = legendrian_lift(curve)
for p in curve.poles:
    r = end_closure_check(lift, p.location)
    print("end at", p.location, "closes:", r.converged)

# a residue in f1 df2 - f2 df1 leaves a log term in the height
try:
    legendrian_lift(MeromorphicCurve.parse("1/z", "z"))
except NonzeroResidue as exc:
    print("(1/z, z):", exc)
