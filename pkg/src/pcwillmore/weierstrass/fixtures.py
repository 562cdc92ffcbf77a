"""Exact construction of valid Weierstrass data of bidegree (k, l).

Write f1 = P/Q and f2 = A/B with simple poles a_j (roots of Q) and b_j
(roots of B), all distinct and finite. Near a_j the 1-form f1 df2 - f2 df1
has residue 2 rho_j f2'(a_j), rho_j the residue of f1, so the residue
conditions are f2'(a_j) = 0 and f1'(b_j) = 0: linear in the numerators.
Each numerator space always contains the trivial solution (numerator
proportional to denominator); a genuine solution needs a nullspace of
dimension two.

For k = 1 the derivative f1' = -rho/(x - a)^2 never vanishes, so every
family with k = 1 or l = 1 is infeasible. For (2, 2) the two conditions on
f1 are dependent exactly when (a1, a2; b1, b2) is a harmonic quadruple, which
by symmetry also makes the conditions on f2 dependent. The solver therefore
places the poles at a random Moebius image of (0, inf, 1, -1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..algebra.gaussian import GaussianRational, ONE, ZERO
from ..algebra.poly import Polynomial
from ..algebra.rational import RationalFunction
from ..errors import RejectionExhausted
from .curve import MeromorphicCurve, gauss_map_degree, validate_data

G = GaussianRational


def nullspace(rows: list[list[GaussianRational]], ncols: int) -> list[list[GaussianRational]]:
    """Exact nullspace basis of a matrix over Q(i) (reduced row echelon)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def residue_free_numerators(den: Polynomial, points) -> list[Polynomial]:
    """Basis of numerators N (deg N <= deg den) with (N/den)'(b) = 0 at all points."""
    k = den.degree
    dden = den.derivative()
    rows = []
    for b in points:
        qb, dqb = den(b), dden(b)
        row = []
        for j in range(k + 1):
            bj = b**j
            dbj = j * b ** (j - 1) if j else ZERO
            row.append(dbj * qb - bj * dqb)
        rows.append(row)
    return [Polynomial(v) for v in nullspace(rows, k + 1)]


def _gauss_int(rng, bound: int) -> GaussianRational:
    return G(int(rng.integers(-bound, bound + 1)), int(rng.integers(-bound, bound + 1)))


def _random_mobius(rng, bound: int):
    while True:
        al, be, ga, de = (_gauss_int(rng, bound) for _ in range(4))
        if al * de - be * ga == 0 or ga == 0 or de == 0 or de + ga == 0 or de - ga == 0:
            continue
        return lambda x: (al * x + be) / (ga * x + de), al / ga


@dataclass(frozen=True)
class Fixture:
    curve: MeromorphicCurve
    seed: int
    poles_f1: tuple
    poles_f2: tuple
    attempts: int


def harmonic_poles(rng, bound: int = 3):
    m, m_inf = _random_mobius(rng, bound)
    a = (m(ZERO), m_inf)
    b = (m(ONE), m(G(-1)))
    return a, b


def solve_22(seed: int, max_attempts: int = 200, bound: int = 3) -> Fixture:
    """A valid bidegree-(2, 2) curve with four simple poles, from a seed."""
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_attempts + 1):
        a, b = harmonic_poles(rng, bound)
        q = Polynomial.from_roots(a)
        bb = Polynomial.from_roots(b)
        sols = []
        for den, pts in ((q, b), (bb, a)):
            basis = [p for p in residue_free_numerators(den, pts)]
            if len(basis) < 2:
                break
            c = [_gauss_int(rng, 4) for _ in basis]
            num = Polynomial([0])
            for ck, bk in zip(c, basis):
                num = num + bk.scale(ck)
            sols.append(RationalFunction(num, den))
        if len(sols) < 2:
            continue
        f1, f2 = sols
        if f1.den.degree != 2 or f2.den.degree != 2:
            continue
        curve = MeromorphicCurve(f1, f2)
        if not validate_data(curve).is_valid or len(curve.poles) != 4:
            continue
        if gauss_map_degree(curve) != 6:
            continue
        return Fixture(curve, seed, tuple(a), tuple(b), attempt)
    raise RejectionExhausted(f"no valid (2,2) curve after {max_attempts} attempts")


def family_nullity(k: int, l: int, seed: int = 0, bound: int = 4) -> tuple[int, int]:
    """Numerator nullspace dimensions for random distinct poles of a (k, l) family.

    A family is realizable on that pole set only if both dimensions are >= 2.
    """
    rng = np.random.default_rng(seed)
    while True:
        pts = {(_gauss_int(rng, bound)) for _ in range(k + l)}
        if len(pts) == k + l:
            break
    pts = sorted(pts, key=lambda g: (g.re, g.im))
    a, b = pts[:k], pts[k:]
    n1 = len(residue_free_numerators(Polynomial.from_roots(a), b))
    n2 = len(residue_free_numerators(Polynomial.from_roots(b), a))
    return n1, n2
