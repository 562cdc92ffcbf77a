"""Rational functions on the Riemann sphere and meromorphic 1-forms.

All algebraic predicates (pole orders, residues, exactness of a 1-form) are
decided in exact Q(i) arithmetic. Roots of denominators are located by
square-free decomposition followed by float root finding; a root that snaps
to a Gaussian rational verified by exact substitution is carried exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..errors import NonzeroResidue, PoleProximity
from .gaussian import GaussianRational, ONE, ZERO
from .poly import (
    Polynomial,
    horner,
    horner_compensated,
    poly_gcd,
    series_divide,
    solve_diophantine,
    squarefree_decomposition,
    taylor_shift,
)

G = GaussianRational

EPS_POLE = 1e-9


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

Point = Union[GaussianRational, complex, _Infinity]


def is_exact(point) -> bool:
    return isinstance(point, (GaussianRational, int)) or point is INF


def point_to_complex(point) -> complex:
    if point is INF:
        return complex(np.inf, 0.0)
    return complex(point)


def point_label(point) -> str:
    if point is INF:
        return "inf"
    if isinstance(point, GaussianRational):
        return str(point)
    z = complex(point)
    return f"{z.real:.15g}{z.imag:+.15g}j"


# --- roots --------------------------------------------------------------

def _polish(coeffs: np.ndarray, dcoeffs: np.ndarray, r: complex, steps: int = 6) -> complex:
    for _ in range(steps):
        d = complex(horner_compensated(dcoeffs, r))
        if d == 0:
            break
        step = complex(horner_compensated(coeffs, r)) / d
        r -= step
        if abs(step) <= 1e-16 * max(1.0, abs(r)):
            break
    return r


def squarefree_roots(p: Polynomial, max_denominator: int = 10**6) -> list:
    """Roots of a square-free polynomial.

    Each root is returned as an exact ``GaussianRational`` when a bounded
    denominator approximation satisfies ``p(root) == 0`` exactly, otherwise
    as a Newton-polished complex float.
    """
    if p.degree <= 0:
        return []
    c = p.complex_coeffs()
    dc = p.derivative().complex_coeffs()
    approx = np.roots(c[::-1]) if p.degree > 1 else np.array([-c[0] / c[1]])
    out = []
    for r in approx:
        r = _polish(c, dc, complex(r))
        snapped = G.from_complex(r, max_denominator)
        if p(snapped) == 0:
            out.append(snapped)
        else:
            out.append(r)
    # stable ordering: by real part then imaginary part
    out.sort(key=lambda z: (complex(z).real, complex(z).imag))
    return out


def polynomial_roots(p: Polynomial) -> list[tuple[Point, int]]:
    """All roots with multiplicity, via Yun square-free decomposition."""
    roots = []
    for mult, factor in enumerate(squarefree_decomposition(p), start=1):
        for r in squarefree_roots(factor):
            roots.append((r, mult))
    roots.sort(key=lambda rm: (complex(rm[0]).real, complex(rm[0]).imag))
    return roots


# --- rational functions --------------------------------------------------

class RationalFunction:
    """Quotient ``num/den`` kept coprime with monic denominator."""

    __slots__ = ("num", "den", "_den_roots")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Polynomial) else Polynomial.constant(num)
        if den is None:
            den = Polynomial([1])
        elif not isinstance(den, Polynomial):
            den = Polynomial.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Polynomial(), Polynomial([1])
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lead
            if lc != 1:
                inv = ONE / lc
                num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_den_roots", None)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def parse(cls, text: str) -> "RationalFunction":
        from .parse import parse_rational

        return parse_rational(text)

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls(Polynomial.X)

    def to_text(self) -> str:
        from .parse import format_rational

        return format_rational(self)

    __str__ = to_text

    def __repr__(self):
        return f"RationalFunction({self.to_text()!r})"

    # structure ---------------------------------------------------------------
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            try:
                other = _as_rf(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # arithmetic ---------------------------------------------------------------
    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __add__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_rf(other))

    def __rsub__(self, other):
        return _as_rf(other) - self

    def __mul__(self, other):
        other = _as_rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rf(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(1) / self ** (-k)
        return RationalFunction(self.num ** k, self.den ** k)

    def derivative(self) -> "RationalFunction":
        n, d = self.num, self.den
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def compose(self, inner: "RationalFunction") -> "RationalFunction":
        """``self(inner(x))``."""
        inner = _as_rf(inner)
        num = _horner_rf(self.num, inner)
        den = _horner_rf(self.den, inner)
        return num / den

    def at_infinity_chart(self) -> "RationalFunction":
        """The same function in the chart ``w = 1/x`` at infinity."""
        d = max(self.num.degree, self.den.degree, 0)
        return RationalFunction(self.num.reverse(d), self.den.reverse(d))

    # evaluation -----------------------------------------------------------------
    def __call__(self, x):
        """Exact value at a point of Q(i) (ZeroDivisionError at a pole)."""
        x = G.coerce(x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    def evaluate(self, xi, eps_pole: float = EPS_POLE):
        """Float evaluation with compensated Horner and a pole guard.

        Raises ``PoleProximity`` when ``|den(xi)| < eps_pole`` at any point.
        Accepts scalars or arrays.
        """
        xi_arr = np.asarray(xi, dtype=complex)
        d = horner_compensated(self.den.complex_coeffs(), xi_arr)
        if np.any(np.abs(d) < eps_pole):
            raise PoleProximity(f"|den| below {eps_pole:g} at evaluation point")
        val = horner_compensated(self.num.complex_coeffs(), xi_arr) / d
        return complex(val) if np.ndim(val) == 0 else val

    def den_roots(self) -> list[tuple[complex, int]]:
        """Roots of the denominator as floats with multiplicity (cached)."""
        if self._den_roots is None:
            roots = [(complex(r), m) for r, m in polynomial_roots(self.den)]
            object.__setattr__(self, "_den_roots", roots)
        return self._den_roots

    def evaluate_fast(self, xi: np.ndarray) -> np.ndarray:
        """Unguarded bulk evaluation: Horner numerator over factored denominator.

        The factored form keeps full relative accuracy next to a pole.
        """
        xi = np.asarray(xi, dtype=complex)
        den = np.ones_like(xi)
        for r, m in self.den_roots():
            den = den * (xi - r) ** m
        return horner(self.num.complex_coeffs(), xi) / den

    # poles and expansions -----------------------------------------------------------
    def pole_order_at_infinity(self) -> int:
        return max(self.num.degree - self.den.degree, 0)

    def poles(self) -> list[tuple[Point, int]]:
        """Poles on the sphere as ``(location, order)``, infinity last."""
        out = list(polynomial_roots(self.den))
        k = self.pole_order_at_infinity()
        if k > 0:
            out.append((INF, k))
        return out

    def laurent(self, point, n_terms: int, den_order: int | None = None):
        """Laurent expansion ``sum c[k] u^(v+k)`` about ``point``.

        Returns ``(v, [c0, c1, ...])``. Exact for exact points (including
        ``INF`` in the chart ``u = 1/x``). For a float point the multiplicity
        of the denominator root must be given as ``den_order`` (or is taken
        as 0 when the denominator is clearly nonzero there).
        """
        if point is INF:
            return self.at_infinity_chart().laurent(ZERO, n_terms)
        if is_exact(point):
            a = G.coerce(point)
            num = taylor_shift(self.num.coeffs, a)
            den = taylor_shift(self.den.coeffs, a)
            m = next(k for k, c in enumerate(den) if c != 0)
            nv = next((k for k, c in enumerate(num) if c != 0), None)
            if nv is None:
                return 0, [ZERO] * n_terms
            series = series_divide(num[nv:], den[m:], n_terms)
            return nv - m, series
        a = complex(point)
        num = taylor_shift([complex(c) for c in self.num.coeffs], a)
        den = taylor_shift([complex(c) for c in self.den.coeffs], a)
        m = den_order if den_order is not None else 0
        series = series_divide(num, den[m:], n_terms)
        return -m, series


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, Polynomial):
        return RationalFunction(x)
    return RationalFunction(Polynomial.constant(x))


def _horner_rf(p: Polynomial, x: RationalFunction) -> RationalFunction:
    acc = RationalFunction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + RationalFunction(Polynomial.constant(c))
    return acc


# --- Hermite reduction ---------------------------------------------------

def hermite_reduce(a: Polynomial, d: Polynomial):
    """Split ``a/d`` as ``g' + h`` with ``h`` having a square-free denominator.

    Returns ``(g, h_num, h_den)`` where ``g`` is a proper rational function,
    ``h_den`` is square-free and ``h_num/h_den`` is proper. The polynomial
    part of ``a/d`` must be removed beforehand.
    """
    g = RationalFunction(0)
    parts = squarefree_decomposition(d)
    lc = ONE / d.lead
    d, a = d.scale(lc), a.scale(lc)
    for i in range(2, len(parts) + 1):
        v = parts[i - 1]
        if v.degree <= 0:
            continue
        u = d.exact_div(v ** i)
        dv = v.derivative()
        for j in range(i - 1, 0, -1):
            b, c = solve_diophantine(u * dv, v, a.scale(G(-1, 0) / j))
            g = g + RationalFunction(b, v ** j)
            a = -(c.scale(j)) - u * b.derivative()
        d = u * v
    q, r = divmod(a, d)
    if not q.is_zero():
        raise ArithmeticError("hermite_reduce expects a proper fraction")
    return g, r, d


def _nearest(points: list, z: complex) -> int:
    return min(range(len(points)), key=lambda k: abs(points[k] - z))


# --- 1-forms ------------------------------------------------------------------

@dataclass(frozen=True)
class PoleResidue:
    location: Point
    order: int
    residue: object  # GaussianRational when exact, complex otherwise
    exact: bool
    is_zero: bool

    @property
    def residue_complex(self) -> complex:
        return complex(self.residue)


class MeromorphicOneForm:
    """The form ``coeff(x) dx`` on the Riemann sphere."""

    __slots__ = ("coeff",)

    def __init__(self, coeff):
        object.__setattr__(self, "coeff", _as_rf(coeff))

    def __setattr__(self, name, value):
        raise AttributeError("MeromorphicOneForm is immutable")

    def __repr__(self):
        return f"MeromorphicOneForm(({self.coeff.to_text()}) dz)"

    def __eq__(self, other):
        return isinstance(other, MeromorphicOneForm) and self.coeff == other.coeff

    def __hash__(self):
        return hash(self.coeff)

    @classmethod
    def exact_differential(cls, f: RationalFunction) -> "MeromorphicOneForm":
        return cls(f.derivative())

    def to_infinity_chart(self) -> "MeromorphicOneForm":
        """Pull back along ``x = 1/w``: coefficient becomes ``-coeff(1/w)/w^2``."""
        c = self.coeff.at_infinity_chart()
        return MeromorphicOneForm(-c * RationalFunction(1, Polynomial.monomial(2)))

    def residue_at(self, point) -> GaussianRational:
        """Exact residue at a point of Q(i) or at ``INF``; zero off the poles."""
        if point is INF:
            return self.to_infinity_chart().residue_at(ZERO)
        a = G.coerce(point)
        den = taylor_shift(self.coeff.den.coeffs, a)
        m = next(k for k, c in enumerate(den) if c != 0)
        if m == 0:
            return ZERO
        num = taylor_shift(self.coeff.num.coeffs, a)
        return series_divide(num, den[m:], m)[m - 1]

    def _log_part(self):
        c = self.coeff
        _, rem = divmod(c.num, c.den)
        g, hn, hd = hermite_reduce(rem, c.den)
        return g, RationalFunction(hn, hd) if not hn.is_zero() else RationalFunction(0)

    def has_zero_residues(self) -> bool:
        """True iff every residue on the sphere vanishes (exact)."""
        _, h = self._log_part()
        return h.is_zero()

    def residues(self) -> list[PoleResidue]:
        """Residue at every pole, infinity last.

        Exact for poles in Q(i). For irrational poles the value is a float,
        but whether it vanishes is still decided exactly: the residue at a
        root of the square-free log-part denominator is zero iff that root
        is shared with the log-part numerator.
        """
        _, h = self._log_part()
        poles = polynomial_roots(self.coeff.den)
        floats = [complex(loc) for loc, _ in poles]
        log_poles, zero_poles = set(), set()
        if not h.is_zero():
            # each root of a divisor of den is matched to its nearest pole
            for r, _ in polynomial_roots(h.den):
                log_poles.add(_nearest(floats, complex(r)))
            shared = poly_gcd(h.num, h.den)
            for r, _ in polynomial_roots(shared):
                zero_poles.add(_nearest(floats, complex(r)))
            dh = h.den.derivative()
        out = []
        for k, (loc, order) in enumerate(poles):
            if isinstance(loc, GaussianRational):
                val = self.residue_at(loc)
                out.append(PoleResidue(loc, order, val, True, val == 0))
            elif k not in log_poles or k in zero_poles:
                out.append(PoleResidue(loc, order, 0j, False, True))
            else:
                val = complex(h.num(loc)) / complex(dh(loc))
                out.append(PoleResidue(loc, order, val, False, False))
        inf_form = self.to_infinity_chart()
        if inf_form.coeff.den.valuation() > 0:
            val = inf_form.residue_at(ZERO)
            out.append(PoleResidue(INF, inf_form.coeff.den.valuation(), val, True, val == 0))
        return out

    def antiderivative(self) -> RationalFunction:
        """Rational primitive ``g`` with ``dg = self``.

        The additive constant is fixed so the Laurent expansion of ``g`` at 0
        has zero constant term. Raises ``NonzeroResidue`` when a logarithm
        would be needed.
        """
        c = self.coeff
        quo, rem = divmod(c.num, c.den)
        g, hn, hd = hermite_reduce(rem, c.den)
        if not hn.is_zero():
            bad = next(r for r in self.residues() if not r.is_zero)
            raise NonzeroResidue(bad.location, bad.residue)
        prim = g + RationalFunction(quo.integral())
        v, _ = prim.laurent(ZERO, 1)
        if v > 0:
            return prim
        _, series = prim.laurent(ZERO, 1 - v)
        return prim - series[-v]

    def log_coefficients(self) -> list[tuple[complex, complex]]:
        """``(root, coefficient)`` of each ``coefficient * log(x - root)`` term."""
        _, h = self._log_part()
        if h.is_zero():
            return []
        dh = h.den.derivative()
        out = []
        for r, _ in polynomial_roots(h.den):
            val = h.num(r) / dh(r)
            out.append((complex(r), complex(val)))
        return out

    def rational_part(self) -> RationalFunction:
        """Rational primitive of the form minus its logarithmic part."""
        c = self.coeff
        quo, rem = divmod(c.num, c.den)
        g, _, _ = hermite_reduce(rem, c.den)
        return g + RationalFunction(quo.integral())


def residue_at(form: MeromorphicOneForm, point) -> GaussianRational:
    return form.residue_at(point)


def antiderivative(form: MeromorphicOneForm) -> RationalFunction:
    return form.antiderivative()


def differentiate(f: RationalFunction) -> RationalFunction:
    return f.derivative()


def evaluate(f: RationalFunction, xi, eps_pole: float = EPS_POLE):
    return f.evaluate(xi, eps_pole)
