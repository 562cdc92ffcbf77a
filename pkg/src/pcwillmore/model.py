"""The pseudoconformal model of S^5.

Vectors of C^{3,1} carry the Hermitian form

    <a, conj b> = a1 conj(b1) + a2 conj(b2) + i (a0 conj(b3) - a3 conj(b0))

of signature (3, 1). Null lines are points of the sphere; a pair of null
vectors (w0, w3) with <w0, conj w3> = i fixes a stereographic chart onto the
Heisenberg space V = R x C^2 with contact form

    dt + (i/2)(<dz, conj z> - <z, conj dz>) = dt - sum(X dY - Y dX).

All functions accept stacked inputs: ``t`` of shape (...), ``z`` of shape
(..., 2) and C^{3,1} vectors of shape (..., 4).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AtInfinity, OriginSingular

EPS_NULL = 1e-10

# herm_product(a, b) = a @ GRAM @ conj(b)
GRAM = np.array(
    [[0, 0, 0, 1j], [0, 1, 0, 0], [0, 0, 1, 0], [-1j, 0, 0, 0]], dtype=complex
)

E0, E1, E2, E3 = np.eye(4, dtype=complex)


def herm_product(a, b):
    """The form <a, conj b>; sesquilinear, complex-linear in ``a``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return np.einsum("...i,ij,...j->...", a, GRAM, b.conj())


def herm_norm2(a):
    """<a, conj a>, a real number (zero on the null cone)."""
    return herm_product(a, a).real


def euclid_norm2(a):
    return np.sum(np.abs(np.asarray(a)) ** 2, axis=-1)


def is_null(v, eps: float = EPS_NULL) -> bool:
    v = np.asarray(v, dtype=complex)
    return bool(np.all(np.abs(herm_product(v, v)) <= eps * euclid_norm2(v)))


@dataclass(frozen=True)
class HeisenbergPoint:
    t: float
    z: np.ndarray = field(default_factory=lambda: np.zeros(2, dtype=complex))

    def __post_init__(self):
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "z", np.asarray(self.z, dtype=complex).reshape(2))

    def as_tuple(self):
        return self.t, self.z


@dataclass(frozen=True)
class StereoChart:
    """A pair of null vectors with <w0, conj w3> = i, and a unitary basis of
    their common orthogonal complement E."""

    w0: np.ndarray
    w3: np.ndarray
    basis: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        w0 = np.asarray(self.w0, dtype=complex).reshape(4)
        w3 = np.asarray(self.w3, dtype=complex).reshape(4)
        scale = max(euclid_norm2(w0), euclid_norm2(w3), 1.0)
        if not (is_null(w0) and is_null(w3)):
            raise ValueError("chart vectors must be null")
        if abs(herm_product(w0, w3) - 1j) > EPS_NULL * scale:
            raise ValueError("chart requires <w0, conj w3> = i")
        object.__setattr__(self, "w0", w0)
        object.__setattr__(self, "w3", w3)
        object.__setattr__(self, "basis", _complement_basis(w0, w3))


def _complement_basis(w0, w3) -> np.ndarray:
    # v is orthogonal to w iff v @ (GRAM @ conj w) = 0
    constraints = np.stack([GRAM @ w0.conj(), GRAM @ w3.conj()])
    _, _, vh = np.linalg.svd(constraints)
    cands = vh[2:].conj()
    basis = []
    for v in cands:
        for b in basis:
            v = v - herm_product(v, b) * b
        basis.append(v / np.sqrt(herm_norm2(v)))
    return np.array(basis)


def default_chart() -> StereoChart:
    return StereoChart(E0, E3)


DEFAULT_CHART = default_chart()


def stereo_unproject(t, z, chart: StereoChart = DEFAULT_CHART) -> np.ndarray:
    """Q(t, z) = z + w0 - (i/2)<z, conj z> w3 + t w3, a null vector."""
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=complex)
    zz = np.sum(np.abs(z) ** 2, axis=-1)
    ez = z @ chart.basis
    coef = (t - 0.5j * zz)[..., None]
    return ez + chart.w0 + coef * chart.w3


def stereo_project(w, chart: StereoChart = DEFAULT_CHART, eps: float = EPS_NULL):
    """Inverse of ``stereo_unproject`` on null lines missing the centre.

    ``w`` is first rescaled so that <w, conj w3> = i. Returns ``(t, z)``.
    Raises ``AtInfinity`` if <w, conj w3> vanishes relative to |w|^2.
    """
    w = np.asarray(w, dtype=complex)
    s = herm_product(w, chart.w3)
    if np.any(np.abs(s) < eps * euclid_norm2(w)):
        raise AtInfinity("null vector lies on the line of w3")
    w = w * (1j / s)[..., None]
    # (i/2)(<w, conj w0> - <w0, conj w>) = -Im <w, conj w0>
    t = -herm_product(w, chart.w0).imag
    z = np.stack([herm_product(w, e) for e in chart.basis], axis=-1)
    return t, z


def involution(t, z):
    """Pseudoconformal involution of V fixing the unit Heisenberg sphere.

    (t, z) -> (-Re lam, -i lam z) with lam = 1/(t - (i/2)|z|^2). It is the
    map induced on V by w0 -> -w3, w3 -> w0, e -> -i e on E, whose square
    is -1, so it is an involution of the projective null cone.
    """
    t = np.asarray(t, dtype=float)
    z = np.asarray(z, dtype=complex)
    mu = t - 0.5j * np.sum(np.abs(z) ** 2, axis=-1)
    if np.any(mu == 0):
        raise OriginSingular("the origin is sent to the point at infinity")
    lam = 1.0 / mu
    return -lam.real, -1j * lam[..., None] * z


def contact_form_eval(z, tdot, zdot):
    """Contact form at a point with E-coordinate ``z`` on the tangent (tdot, zdot).

    Equals tdot + (i/2)(<zdot, conj z> - <z, conj zdot>) = tdot - Im sum zdot conj z.
    The t-coordinate of the base point does not enter.
    """
    z = np.asarray(z, dtype=complex)
    zdot = np.asarray(zdot, dtype=complex)
    return np.asarray(tdot, dtype=float) - np.sum(zdot * z.conj(), axis=-1).imag


def lagrangian_chart(z):
    """T(z1, z2) = (Re z1 + i Re z2, Im z2 + i Im z1).

    Orthogonal on R^4; pulls sum(X dY - Y dX) back to Re(z1 dz2 - z2 dz1).
    """
    z = np.asarray(z, dtype=complex)
    z1, z2 = z[..., 0], z[..., 1]
    return np.stack([z1.real + 1j * z2.real, z2.imag + 1j * z1.imag], axis=-1)


def lagrangian_chart_inverse(w):
    w = np.asarray(w, dtype=complex)
    w1, w2 = w[..., 0], w[..., 1]
    return np.stack([w1.real + 1j * w2.imag, w1.imag + 1j * w2.real], axis=-1)


SQRT2 = np.sqrt(2.0)


def cayley_to_s5(w) -> np.ndarray:
    """Null vector of C^{3,1} -> unit vector of C^3 on the same null line.

    With a = (w0 - i w3)/sqrt 2 and b = (w0 + i w3)/sqrt 2 the form reads
    |w1|^2 + |w2|^2 + |a|^2 - |b|^2, so (w1, w2, a)/b lies on S^5.
    """
    w = np.asarray(w, dtype=complex)
    a = (w[..., 0] - 1j * w[..., 3]) / SQRT2
    b = (w[..., 0] + 1j * w[..., 3]) / SQRT2
    return np.stack([w[..., 1], w[..., 2], a], axis=-1) / b[..., None]


def s5_to_null(x) -> np.ndarray:
    """Inverse of ``cayley_to_s5`` with the representative b = 1."""
    x = np.asarray(x, dtype=complex)
    a = x[..., 2]
    w0 = (a + 1.0) / SQRT2
    w3 = (1.0 - a) / (1j * SQRT2)
    return np.stack([w0, x[..., 0], x[..., 1], w3], axis=-1)
