"""Meromorphic curves f = (f1, f2): CP^1 -> C^2 and their algebraic checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..algebra.gaussian import GaussianRational, ZERO
from ..algebra.poly import Polynomial, poly_gcd, squarefree_part
from ..algebra.rational import (
    EPS_POLE,
    INF,
    MeromorphicOneForm,
    RationalFunction,
    is_exact,
    point_label,
    polynomial_roots,
    squarefree_roots,
)
from ..errors import DegenerateGaussMap, PoleProximity


@dataclass(frozen=True)
class Pole:
    location: object  # GaussianRational, complex or INF
    order: int
    order_f1: int
    order_f2: int

    @property
    def exact(self) -> bool:
        return is_exact(self.location)

    @property
    def label(self) -> str:
        return point_label(self.location)


def _nearest(points, z):
    return min(range(len(points)), key=lambda k: abs(points[k] - z))


class MeromorphicCurve:
    """A pair of rational functions with its pole divisor on the sphere."""

    def __init__(self, f1: RationalFunction, f2: RationalFunction):
        if isinstance(f1, str):
            f1 = RationalFunction.parse(f1)
        if isinstance(f2, str):
            f2 = RationalFunction.parse(f2)
        self.f1 = f1
        self.f2 = f2

    @classmethod
    def parse(cls, f1: str, f2: str) -> "MeromorphicCurve":
        return cls(RationalFunction.parse(f1), RationalFunction.parse(f2))

    def __repr__(self):
        return f"MeromorphicCurve({self.f1.to_text()!r}, {self.f2.to_text()!r})"

    def __eq__(self, other):
        return isinstance(other, MeromorphicCurve) and (self.f1, self.f2) == (other.f1, other.f2)

    def __hash__(self):
        return hash((self.f1, self.f2))

    # derived rational data -------------------------------------------------
    @cached_property
    def d1(self) -> RationalFunction:
        return self.f1.derivative()

    @cached_property
    def d2(self) -> RationalFunction:
        return self.f2.derivative()

    @cached_property
    def wronskian(self) -> RationalFunction:
        """W = f1' f2'' - f2' f1''."""
        return self.d1 * self.d2.derivative() - self.d2 * self.d1.derivative()

    @cached_property
    def omega(self) -> MeromorphicOneForm:
        """The 1-form f1 df2 - f2 df1."""
        return MeromorphicOneForm(self.f1 * self.d2 - self.f2 * self.d1)

    @cached_property
    def poles(self) -> list[Pole]:
        """Distinct poles of f1 or f2, finite ones first, infinity last."""
        joint = squarefree_part(self.f1.den * self.f2.den)
        locs = squarefree_roots(joint)
        floats = [complex(p) for p in locs]
        orders = [[0, 0] for _ in locs]
        for idx, f in enumerate((self.f1, self.f2)):
            for r, m in polynomial_roots(f.den):
                orders[_nearest(floats, complex(r))][idx] = m
        out = [Pole(p, max(o), o[0], o[1]) for p, o in zip(locs, orders)]
        o1 = self.f1.pole_order_at_infinity()
        o2 = self.f2.pole_order_at_infinity()
        if o1 or o2:
            out.append(Pole(INF, max(o1, o2), o1, o2))
        return out

    def at_infinity(self) -> "MeromorphicCurve":
        """The curve in the chart w = 1/xi."""
        return MeromorphicCurve(self.f1.at_infinity_chart(), self.f2.at_infinity_chart())

    def affine_reparametrize(self, a, b) -> "MeromorphicCurve":
        """The curve xi -> f(a xi + b)."""
        inner = RationalFunction(Polynomial([b, a]))
        return MeromorphicCurve(self.f1.compose(inner), self.f2.compose(inner))

    # float evaluation ------------------------------------------------------------
    def evaluate(self, xi, eps_pole: float = EPS_POLE) -> np.ndarray:
        """(f1, f2) at ``xi`` with stacked output of shape (..., 2)."""
        return np.stack([self.f1.evaluate(xi, eps_pole), self.f2.evaluate(xi, eps_pole)], axis=-1)

    def derivative(self, xi, eps_pole: float = EPS_POLE) -> np.ndarray:
        return np.stack([self.d1.evaluate(xi, eps_pole), self.d2.evaluate(xi, eps_pole)], axis=-1)

    def curvature_density(self, xi) -> np.ndarray:
        """-K dA / (dx dy) = 2|W|^2 / lambda^4, unguarded and vectorized.

        Points where the value is not finite (exactly at a pole) get the
        limit 0, which holds at every pole of order one.
        """
        xi = np.asarray(xi, dtype=complex)
        with np.errstate(all="ignore"):
            w = self.wronskian.evaluate_fast(xi)
            lam2 = np.abs(self.d1.evaluate_fast(xi)) ** 2 + np.abs(self.d2.evaluate_fast(xi)) ** 2
            out = 2.0 * np.abs(w) ** 2 / lam2**2
        return np.where(np.isfinite(out), out, 0.0)


# --- validation ---------------------------------------------------------------

@dataclass
class PoleCheck:
    location: object
    order: int
    simple: bool
    residue: object
    residue_exact: bool
    residue_zero: bool
    transversal: bool

    @property
    def label(self) -> str:
        return point_label(self.location)


@dataclass
class ValidationReport:
    poles: list[PoleCheck] = field(default_factory=list)
    immersion_ok: bool = True
    immersion_witness: object = None

    @property
    def simple_poles(self) -> list[bool]:
        return [p.simple for p in self.poles]

    @property
    def residues(self) -> list:
        return [p.residue for p in self.poles]

    @property
    def all_simple(self) -> bool:
        return all(p.simple for p in self.poles)

    @property
    def residues_vanish(self) -> bool:
        return all(p.residue_zero for p in self.poles)

    @property
    def is_valid(self) -> bool:
        return self.all_simple and self.residues_vanish and self.immersion_ok

    def failures(self) -> list[str]:
        out = []
        for p in self.poles:
            if not p.simple:
                out.append(f"pole of order {p.order} at {p.label}")
            if not p.residue_zero:
                out.append(f"residue {_fmt_residue(p.residue)} at {p.label}")
        if not self.immersion_ok:
            out.append(f"not immersed at {point_label(self.immersion_witness)}")
        return out


def _fmt_residue(r) -> str:
    if isinstance(r, GaussianRational):
        return str(r)
    r = complex(r)
    return f"{r.real:.12g}{r.imag:+.12g}i"


def immersion_witness(curve: MeromorphicCurve):
    """A point where (f1', f2') = (0, 0) away from the poles, or None."""
    n1, n2 = curve.d1.num, curve.d2.num
    g = poly_gcd(n1, n2) if not (n1.is_zero() and n2.is_zero()) else Polynomial([0, 1])
    if g.degree > 0:
        # numerators are coprime to their denominators, so these are not poles
        return polynomial_roots(g)[0][0]
    if curve.f1.pole_order_at_infinity() == 0 and curve.f2.pole_order_at_infinity() == 0:
        inf = curve.at_infinity()
        if inf.d1(ZERO) == 0 and inf.d2(ZERO) == 0:
            return INF
    return None


def validate_data(curve: MeromorphicCurve) -> ValidationReport:
    """Check simple poles, vanishing residues of f1 df2 - f2 df1, immersion."""
    form = curve.omega
    float_res = None
    report = ValidationReport()
    for pole in curve.poles:
        if pole.exact:
            res = form.residue_at(pole.location)
            exact, zero = True, res == 0
        else:
            if float_res is None:
                float_res = [r for r in form.residues() if not r.exact]
            if float_res:
                k = _nearest([complex(r.location) for r in float_res], complex(pole.location))
                hit = float_res[k]
                res, exact, zero = hit.residue, False, hit.is_zero
            else:
                res, exact, zero = 0j, False, True
        report.poles.append(
            PoleCheck(pole.location, pole.order, pole.order == 1, res, exact, zero, pole.order == 1)
        )
    witness = immersion_witness(curve)
    report.immersion_ok = witness is None
    report.immersion_witness = witness
    return report


# --- Gauss map and curvature ----------------------------------------------------

def gauss_map(curve: MeromorphicCurve) -> tuple[Polynomial, Polynomial]:
    """Reduced homogeneous pair [a : b] representing [f1' : f2']."""
    d1, d2 = curve.d1, curve.d2
    a = d1.num * d2.den
    b = d2.num * d1.den
    if a.is_zero() or b.is_zero():
        raise DegenerateGaussMap("one coordinate of the curve is constant")
    g = poly_gcd(a, b)
    a, b = a.exact_div(g), b.exact_div(g)
    if a.degree <= 0 and b.degree <= 0:
        raise DegenerateGaussMap("f1'/f2' is constant: the curve lies in a complex line")
    return a, b


def gauss_map_degree(curve: MeromorphicCurve) -> int:
    a, b = gauss_map(curve)
    return max(a.degree, b.degree)


def curvature_at(curve: MeromorphicCurve, xi, eps_pole: float = EPS_POLE):
    """Gauss curvature K = -2|W|^2 / lambda^6 of the induced metric."""
    w = curve.wronskian.evaluate(xi, eps_pole)
    lam2 = np.abs(curve.d1.evaluate(xi, eps_pole)) ** 2 + np.abs(curve.d2.evaluate(xi, eps_pole)) ** 2
    if np.any(lam2 == 0):
        raise PoleProximity("branch point: induced metric vanishes")
    k = -2.0 * np.abs(w) ** 2 / lam2**3
    return float(k) if np.ndim(k) == 0 else k


def conformal_factor(curve: MeromorphicCurve, xi):
    """lambda with induced metric lambda^2 |dxi|^2."""
    d = curve.derivative(xi)
    return np.sqrt(np.sum(np.abs(d) ** 2, axis=-1))
