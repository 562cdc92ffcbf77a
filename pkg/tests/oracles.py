"""Independent reference computations used by the tests.

Nothing here imports the algebra or quadrature code under test: residues and
primitives come from sympy, curvature from finite differences of log lambda,
and degrees from counting preimages with numpy root finding.
"""

import math

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import implicit_multiplication, parse_expr, standard_transformations

Z = sp.Symbol("z")


_TRANSFORMS = standard_transformations + (implicit_multiplication,)


def sym(text: str):
    return parse_expr(text.replace("^", "**"), local_dict={"z": Z, "i": sp.I}, transformations=_TRANSFORMS)


def sympy_residue(expr_text: str, point) -> complex:
    """Residue of expr dz at a finite point, or at infinity for point=None."""
    e = sym(expr_text)
    if point is None:
        return complex(sp.N(-sp.residue(e.subs(Z, 1 / Z) / Z**2, Z, 0)))
    return complex(sp.N(sp.residue(e, Z, sp.nsimplify(point))))


def omega_text(f1: str, f2: str) -> str:
    a, b = sym(f1), sym(f2)
    return str(sp.simplify(a * sp.diff(b, Z) - b * sp.diff(a, Z)))


def numeric_curve(f1: str, f2: str):
    a, b = sym(f1), sym(f2)
    fs = [sp.lambdify(Z, e, "numpy") for e in (a, b)]
    ds = [sp.lambdify(Z, sp.diff(e, Z), "numpy") for e in (a, b)]
    dds = [sp.lambdify(Z, sp.diff(e, Z, 2), "numpy") for e in (a, b)]
    return fs, ds, dds


def fd_curvature(f1: str, f2: str, xi: complex, h: float = 1e-3) -> float:
    """K = -Delta log lambda / lambda^2 with lambda^2 = |f1'|^2 + |f2'|^2 (5-point Laplacian)."""
    _, ds, _ = numeric_curve(f1, f2)

    def loglam(x):
        return 0.5 * math.log(sum(abs(complex(d(x))) ** 2 for d in ds))

    lap = (loglam(xi + h) + loglam(xi - h) + loglam(xi + 1j * h) + loglam(xi - 1j * h) - 4 * loglam(xi)) / h**2
    lam2 = math.exp(2 * loglam(xi))
    return -lap / lam2


def closed_form_curvature(f1: str, f2: str, xi: complex) -> float:
    """K = -2|W|^2 / lambda^6 with W the Wronskian of the derivatives."""
    _, ds, dds = numeric_curve(f1, f2)
    d1, d2 = complex(ds[0](xi)), complex(ds[1](xi))
    e1, e2 = complex(dds[0](xi)), complex(dds[1](xi))
    lam2 = abs(d1) ** 2 + abs(d2) ** 2
    return -2 * abs(d1 * e2 - d2 * e1) ** 2 / lam2**3


def preimage_degree(f1: str, f2: str, seed: int = 0) -> int:
    """Degree of xi -> [f1' : f2'] by counting solutions of f2' = c f1'."""
    a, b = sym(f1), sym(f2)
    n1, d1 = sp.fraction(sp.together(sp.diff(a, Z)))
    n2, d2 = sp.fraction(sp.together(sp.diff(b, Z)))
    rng = np.random.default_rng(seed)
    c = complex(rng.normal(), rng.normal())
    eq = sp.Poly(sp.expand(n2 * d1 - c * n1 * d2), Z)
    coeffs = [complex(x) for x in eq.all_coeffs()]
    roots = np.roots(coeffs)
    # degree counts preimages on the whole sphere; roots lost at infinity
    # are recovered from the drop in polynomial degree
    full = max(sp.Poly(n2 * d1, Z).degree(), sp.Poly(n1 * d2, Z).degree())
    common = sp.Poly(sp.gcd(n1 * d2, n2 * d1), Z).degree()
    return len(roots) + (full - eq.degree()) - common


def fd_contact(sample, xi: complex, h: float = 1e-6) -> float:
    """dt - sum(X dY - Y dX) along d/dRe xi and d/dIm xi by central differences."""
    out = 0.0
    t0, w0 = sample(np.array([xi]))
    X, Y = w0[0].real, w0[0].imag
    for d in (h, 1j * h):
        tp, wp = sample(np.array([xi + d]))
        tm, wm = sample(np.array([xi - d]))
        dt = (tp[0] - tm[0]) / (2 * h)
        dw = (wp[0] - wm[0]) / (2 * h)
        val = dt - np.sum(X * dw.imag - Y * dw.real)
        out = max(out, abs(val) / (1 + abs(dt)))
    return out
