"""Univariate polynomials over Q(i), plus float evaluation helpers.

Coefficient sequences are stored lowest degree first. The module-level list
helpers (``taylor_shift``, ``series_divide``) are written against the plain
``+ - * /`` protocol so they work on both exact coefficients and complex
floats.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .gaussian import GaussianRational, ONE, ZERO, format_gaussian

G = GaussianRational


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class Polynomial:
    """Immutable polynomial in one variable with Gaussian-rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", tuple(_trim(G.coerce(c) for c in coeffs)))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # construction -----------------------------------------------------
    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Polynomial":
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots, lead=1) -> "Polynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-G.coerce(r), 1])
        return p

    X = None  # set below

    # basic queries -------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lead(self) -> GaussianRational:
        return self.coeffs[-1] if self.coeffs else ZERO

    def coeff(self, k: int) -> GaussianRational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        lc = self.lead
        return Polynomial(c / lc for c in self.coeffs)

    def valuation(self) -> int:
        """Multiplicity of the root at 0 (``-1`` for the zero polynomial)."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return -1

    # arithmetic -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.constant(other)
            except TypeError:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result, base = Polynomial([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = G.coerce(c)
        return Polynomial(a * c for a in self.coeffs)

    def __divmod__(self, other: "Polynomial"):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lead
        quot = [ZERO] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lc
            if c == 0:
                continue
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - c * b
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    # calculus and evaluation ---------------------------------------------
    def derivative(self) -> "Polynomial":
        return Polynomial(c * k for k, c in enumerate(self.coeffs) if k > 0)

    def integral(self) -> "Polynomial":
        """Antiderivative with zero constant term."""
        return Polynomial([ZERO] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def __call__(self, x):
        """Exact Horner evaluation (also works for complex floats)."""
        if isinstance(x, (GaussianRational, int, Fraction)):
            x = G.coerce(x)
            acc = ZERO
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + complex(c)
        return acc

    def shift(self, a) -> "Polynomial":
        """The polynomial ``x -> p(x + a)`` (exact Taylor shift)."""
        return Polynomial(taylor_shift(self.coeffs, G.coerce(a)))

    def reverse(self, degree: int | None = None) -> "Polynomial":
        """``x^d p(1/x)`` with ``d = degree`` (defaults to ``self.degree``)."""
        d = self.degree if degree is None else degree
        if d < self.degree:
            raise ValueError("reverse degree below polynomial degree")
        padded = list(self.coeffs) + [ZERO] * (d + 1 - len(self.coeffs))
        return Polynomial(reversed(padded))

    def complex_coeffs(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)


def _as_poly(x):
    if isinstance(x, Polynomial):
        return x
    try:
        return Polynomial.constant(x)
    except TypeError:
        return NotImplemented


Polynomial.X = Polynomial([0, 1])


# --- gcd and friends ---------------------------------------------------

def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd (zero only if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def extended_gcd(a: Polynomial, b: Polynomial):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = a, b
    s0, s1 = Polynomial([1]), Polynomial()
    t0, t1 = Polynomial(), Polynomial([1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.lead
    return r0.monic(), s0.scale(ONE / lc), t0.scale(ONE / lc)


def solve_diophantine(a: Polynomial, b: Polynomial, c: Polynomial):
    """Return ``(s, t)`` with ``s*a + t*b = c`` and ``deg s < deg b``.

    Requires ``gcd(a, b) = 1``.
    """
    g, s, t = extended_gcd(a, b)
    if g.degree != 0:
        raise ArithmeticError("solve_diophantine needs coprime inputs")
    s, t = s * c, t * c
    if b.degree > 0:
        q, s = divmod(s, b)
        t = t + q * a
    return s, t


def squarefree_decomposition(p: Polynomial) -> list[Polynomial]:
    """Yun's algorithm: monic ``[P1, P2, ...]`` with ``p = lc * prod Pk^k``."""
    if p.degree <= 0:
        return []
    p = p.monic()
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative()
    out = []
    while b.degree > 0:
        a = poly_gcd(b, d)
        out.append(a)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - b.derivative()
    while out and out[-1].degree == 0:
        out.pop()
    return out


def squarefree_part(p: Polynomial) -> Polynomial:
    if p.degree <= 0:
        return Polynomial([1])
    return p.exact_div(poly_gcd(p, p.derivative())).monic()


# --- generic coefficient-list helpers ---------------------------------

def taylor_shift(coeffs: Sequence, a) -> list:
    """Coefficients of ``p(x + a)`` given those of ``p``."""
    c = list(coeffs)
    n = len(c)
    for i in range(n):
        for k in range(n - 2, i - 1, -1):
            c[k] = c[k] + a * c[k + 1]
    return c


def series_divide(num: Sequence, den: Sequence, n: int) -> list:
    """First ``n`` power-series coefficients of ``num/den`` (``den[0] != 0``)."""
    d0 = den[0]
    out = []
    for k in range(n):
        acc = num[k] if k < len(num) else 0 * d0
        for j in range(1, min(k, len(den) - 1) + 1):
            acc = acc - den[j] * out[k - j]
        out.append(acc / d0)
    return out


# --- float evaluation ---------------------------------------------------

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = _SPLIT * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def horner_compensated(coeffs: np.ndarray, x):
    """Compensated Horner evaluation of a complex polynomial.

    Works on scalars or numpy arrays of complex ``x``. Error-free transforms
    are applied to the real and imaginary parts separately, so the result is
    as accurate as if computed in twice the working precision and then
    rounded (barring overflow in the splitting step).
    """
    x = np.asarray(x, dtype=complex)
    xr, xi = x.real, x.imag
    if len(coeffs) == 0:
        return np.zeros_like(x)
    sr = np.full_like(xr, coeffs[-1].real)
    si = np.full_like(xr, coeffs[-1].imag)
    er = np.zeros_like(xr)
    ei = np.zeros_like(xr)
    for c in coeffs[-2::-1]:
        p1, q1 = _two_prod(sr, xr)
        p2, q2 = _two_prod(si, xi)
        p3, q3 = _two_prod(sr, xi)
        p4, q4 = _two_prod(si, xr)
        r1, s1 = _two_sum(p1, -p2)
        nr, s2 = _two_sum(r1, c.real)
        i1, s3 = _two_sum(p3, p4)
        ni, s4 = _two_sum(i1, c.imag)
        # error polynomial propagated with plain Horner
        er, ei = (er * xr - ei * xi + (q1 - q2 + s1 + s2),
                  er * xi + ei * xr + (q3 + q4 + s3 + s4))
        sr, si = nr, ni
    return (sr + er) + 1j * (si + ei)


def horner(coeffs: np.ndarray, x):
    """Plain vectorised Horner evaluation."""
    x = np.asarray(x, dtype=complex)
    acc = np.zeros_like(x)
    for c in coeffs[::-1]:
        acc = acc * x + c
    return acc


def format_polynomial(p: Polynomial, var: str = "z") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        neg = False
        if c.im == 0 and c.re < 0:
            neg, c = True, -c
        if k > 0 and c == 1:
            body = mono
        else:
            cs = format_gaussian(c)
            if cs.startswith("-"):
                # pure imaginary with negative part
                neg, cs = not neg, cs[1:]
            body = cs if k == 0 else f"{cs}*{mono}"
        terms.append(("-" if neg else "+", body))
    head_sign, head = terms[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
