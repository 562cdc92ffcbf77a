"""Derivative jets of parametrized surfaces x(u, v) in S^5 in C^3.

A jet provider returns ``{(i, j): d^i_u d^j_v x}`` for ``i + j <= order`` with
arrays of shape ``(..., 3)``. Analytic providers differentiate a sympy
expression exactly; the finite-difference provider uses fourth-order central
stencils with a step chosen per derivative order.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy as sp

from ..errors import JetOrderInsufficient

U, V = sp.symbols("u v", real=True)


class SurfaceJet:
    """Interface shared by analytic and finite-difference jets."""

    name: str = "surface"
    max_order: int = 4
    domain: tuple = ((0.0, 2 * math.pi), (0.0, 2 * math.pi))
    periodic: tuple = (True, True)

    def position(self, u, v) -> np.ndarray:
        raise NotImplementedError

    def jet(self, u, v, order: int) -> dict:
        raise NotImplementedError

    def require(self, order: int):
        if order > self.max_order:
            raise JetOrderInsufficient(
                f"{self.name} provides derivatives up to order {self.max_order}, {order} needed"
            )


class AnalyticJet(SurfaceJet):
    """Exact jets of a closed-form parametrization (sympy expressions in u, v)."""

    def __init__(self, exprs, name="expression", domain=None, periodic=(True, True), max_order=6):
        self.exprs = [sp.sympify(e) for e in exprs]
        if len(self.exprs) != 3:
            raise ValueError("a surface in C^3 needs three component expressions")
        self.name = name
        self.max_order = max_order
        if domain is not None:
            self.domain = tuple(tuple(float(a) for a in d) for d in domain)
        self.periodic = tuple(periodic)
        self._funcs = {}
        self._lock = threading.Lock()

    def _func(self, i: int, j: int):
        key = (i, j)
        f = self._funcs.get(key)
        if f is None:
            with self._lock:
                f = self._funcs.get(key)
                if f is None:
                    ders = [sp.diff(e, U, i, V, j) if (i or j) else e for e in self.exprs]
                    f = sp.lambdify((U, V), ders, modules="numpy")
                    self._funcs[key] = f
        return f

    def _eval(self, i, j, u, v):
        vals = self._func(i, j)(u, v)
        shape = np.broadcast(u, v).shape
        return np.stack([np.broadcast_to(np.asarray(c, dtype=complex), shape) for c in vals], -1)

    def position(self, u, v):
        return self._eval(0, 0, np.asarray(u, float), np.asarray(v, float))

    def jet(self, u, v, order: int) -> dict:
        self.require(order)
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        return {(i, k - i): self._eval(i, k - i, u, v) for k in range(order + 1) for i in range(k + 1)}


@lru_cache(maxsize=None)
def fd_weights(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Central stencil (offsets, weights) for the k-th derivative, 4th order accurate."""
    if k == 0:
        return np.array([0]), np.array([1.0])
    m = (k + 1) // 2 + 1
    offs = np.arange(-m, m + 1)
    n = len(offs)
    a = np.vander(offs.astype(float), n, increasing=True).T
    rhs = np.zeros(n)
    rhs[k] = math.factorial(k)
    return offs, np.linalg.solve(a, rhs)


# step sizes balancing h^4 truncation against eps/h^k roundoff
FD_STEPS = {1: 1e-3, 2: 2e-3, 3: 5e-3, 4: 1e-2}


class FDJet(SurfaceJet):
    """Jets by tensor-product central differences of a vectorized map."""

    def __init__(self, func, name="fd", domain=None, periodic=(True, True), steps=None):
        self.func = func
        self.name = name
        self.max_order = 4
        if domain is not None:
            self.domain = domain
        self.periodic = tuple(periodic)
        self.steps = dict(FD_STEPS if steps is None else steps)

    def position(self, u, v):
        return np.asarray(self.func(np.asarray(u, float), np.asarray(v, float)), dtype=complex)

    def derivative(self, u, v, i: int, j: int):
        if i == 0 and j == 0:
            return self.position(u, v)
        h = self.steps[i + j]
        ou, wu = fd_weights(i)
        ov, wv = fd_weights(j)
        u = np.asarray(u, float)
        v = np.asarray(v, float)
        acc = 0.0
        for a, wa in zip(ou, wu):
            if wa == 0:
                continue
            for b, wb in zip(ov, wv):
                if wb == 0:
                    continue
                acc = acc + (wa * wb) * self.position(u + a * h, v + b * h)
        return acc / h ** (i + j)

    def jet(self, u, v, order: int) -> dict:
        self.require(order)
        return {(i, k - i): self.derivative(u, v, i, k - i) for k in range(order + 1) for i in range(k + 1)}


@dataclass(frozen=True)
class Grid:
    nu: int = 64
    nv: int = 64


# --- shipped surfaces ---------------------------------------------------------

def hexagonal_torus() -> AnalyticJet:
    """(e^{iu}, e^{iv}, e^{-i(u+v)}) / sqrt(3): minimal Legendrian, flat."""
    s = 1 / sp.sqrt(3)
    exprs = [s * sp.exp(sp.I * U), s * sp.exp(sp.I * V), s * sp.exp(-sp.I * (U + V))]
    return AnalyticJet(exprs, "hexagonal_torus", ((0, 2 * math.pi), (0, 2 * math.pi)))


def equatorial_s2() -> AnalyticJet:
    """The real unit sphere S^2 in R^3, totally geodesic and Legendrian."""
    exprs = [sp.cos(V) * sp.cos(U), sp.cos(V) * sp.sin(U), sp.sin(V)]
    return AnalyticJet(
        exprs, "equatorial_s2", ((0, 2 * math.pi), (-math.pi / 2, math.pi / 2)), (True, False)
    )


def non_legendrian_torus() -> AnalyticJet:
    """(e^{iu}, e^{iv}, 0) / sqrt(2): on S^5 but not Legendrian."""
    s = 1 / sp.sqrt(2)
    return AnalyticJet([s * sp.exp(sp.I * U), s * sp.exp(sp.I * V), sp.Integer(0)], "clifford_torus")


def cayley_from_heisenberg(t, z1, z2):
    """Sympy-friendly map (t, z) -> S^5 through the null cone.

    The null vector Q(t, z) = (1, z1, z2, t - (i/2)|z|^2) of the default chart
    is rotated by a = (w0 - i w3)/sqrt 2, b = (w0 + i w3)/sqrt 2, which turns
    the form into |w1|^2 + |w2|^2 + |a|^2 - |b|^2; then x = (w1, w2, a)/b.
    """
    w3 = t - sp.I / 2 * (z1 * sp.conjugate(z1) + z2 * sp.conjugate(z2))
    a = (1 - sp.I * w3) / sp.sqrt(2)
    b = (1 + sp.I * w3) / sp.sqrt(2)
    return [z1 / b, z2 / b, a / b]


def graph_surface(phi, name="graph", domain=((-0.5, 0.5), (-0.5, 0.5))) -> AnalyticJet:
    """Legendrian surface from a potential phi(u, v).

    In the Heisenberg space take X = (u, v), Y = grad phi and
    t = u phi_u + v phi_v - 2 phi, so that dt = sum(X dY - Y dX). Generic phi
    gives a non-minimal Legendrian surface.
    """
    phi = sp.sympify(phi, locals={"u": U, "v": V})
    pu, pv = sp.diff(phi, U), sp.diff(phi, V)
    t = U * pu + V * pv - 2 * phi
    exprs = cayley_from_heisenberg(t, U + sp.I * pu, V + sp.I * pv)
    return AnalyticJet(exprs, name, domain, (False, False))


BUILTINS = {
    "hexagonal_torus": hexagonal_torus,
    "equatorial_s2": equatorial_s2,
}


def builtin(name: str) -> AnalyticJet:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin surface {name!r}; known: {sorted(BUILTINS)}") from None


def from_expressions(components, periods=(2 * math.pi, 2 * math.pi), name="expression") -> AnalyticJet:
    """Surface from three expression strings in u, v (sympy syntax, I = sqrt(-1))."""
    loc = {"u": U, "v": V, "i": sp.I, "I": sp.I}
    exprs = [sp.sympify(c, locals=loc) for c in components]
    return AnalyticJet(exprs, name, ((0.0, periods[0]), (0.0, periods[1])))
