"""Contact Hamiltonian flows on S^5 and on the Heisenberg space.

For a contact form alpha with Reeb field R, the contact vector field of a
function H is the unique X with alpha(X) = H and i_X d alpha = dH(R) alpha - dH.
Its flow preserves the contact distribution, so it carries Legendrian
surfaces to Legendrian surfaces.

* S^5 in C^3 with alpha = Im sum conj(x) dx: R = i x and
  X_H = H i x + (i/2)(grad H - <grad H, conj x> x),
  where grad H = 2 dH/d(conj x) is the real gradient of H on C^3.
* V = R x C^2 with alpha = dt - sum(X dY - Y dX): R = d/dt and
  dX_k = (H_t X_k + H_{Y_k})/2, dY_k = (H_t Y_k - H_{X_k})/2,
  dt = H + sum(X_k dY_k - Y_k dX_k).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import FlowStepUnstable


@dataclass(frozen=True)
class Bump:
    """A exp(1 - 1/(1 - s/R^2)) for s = |p - c|^2 < R^2 and 0 outside.

    ``center`` is a real vector; complex points are viewed as R^{2n}.
    """

    center: np.ndarray
    radius: float
    amplitude: float = 1.0

    def value_and_gradient(self, p: np.ndarray):
        """H and its Euclidean gradient at real points ``p`` of shape (..., d)."""
        d = p - self.center
        q = np.sum(d * d, axis=-1) / self.radius**2
        inside = q < 1.0
        qs = np.where(inside, q, 0.0)
        den = 1.0 - qs
        val = np.where(inside, self.amplitude * np.exp(1.0 - 1.0 / den), 0.0)
        # dH/dq = -H / (1 - q)^2, dq/dp = 2 d / R^2
        dq = np.where(inside, -val / den**2, 0.0)
        grad = (2.0 / self.radius**2) * dq[..., None] * d
        return val, grad

    def support_contains(self, p: np.ndarray) -> np.ndarray:
        d = p - self.center
        return np.sum(d * d, axis=-1) < self.radius**2


def _as_real(x: np.ndarray) -> np.ndarray:
    return np.concatenate([x.real, x.imag], axis=-1)


def s5_field(H: Bump, x: np.ndarray) -> np.ndarray:
    """Contact vector field of H (a bump on R^6 = C^3) at points x of S^5."""
    val, g = H.value_and_gradient(_as_real(x))
    n = x.shape[-1]
    grad = g[..., :n] + 1j * g[..., n:]
    proj = grad - np.sum(grad * x.conj(), axis=-1)[..., None] * x
    return val[..., None] * (1j * x) + 0.5j * proj


def heisenberg_field(H: Bump, t: np.ndarray, z: np.ndarray):
    """Contact vector field of H on V, H a bump in coordinates (t, X1, X2, Y1, Y2)."""
    p = np.concatenate([t[..., None], z.real, z.imag], axis=-1)
    val, g = H.value_and_gradient(p)
    Ht = g[..., 0]
    HX, HY = g[..., 1:3], g[..., 3:5]
    X, Y = z.real, z.imag
    dX = 0.5 * (Ht[..., None] * X + HY)
    dY = 0.5 * (Ht[..., None] * Y - HX)
    dt = val + np.sum(X * dY - Y * dX, axis=-1)
    return dt, dX + 1j * dY


def _rk4(f, y, h):
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def choose_steps(f, y0: np.ndarray, eps: float, tol: float = 1e-10, max_steps: int = 4096) -> int:
    """Smallest power-of-two step count for which one RK4 step and two half
    steps agree to ``tol`` (relative to the state size) on every point."""
    if eps == 0.0:
        return 0
    n = 1
    while n <= max_steps:
        h = eps / n
        y = y0
        ok = True
        for _ in range(n):
            full = _rk4(f, y, h)
            half = _rk4(f, _rk4(f, y, 0.5 * h), 0.5 * h)
            if not np.all(np.isfinite(half)):
                raise FlowStepUnstable("non-finite state in contact flow")
            if np.max(np.abs(full - half)) / (1.0 + np.max(np.abs(half))) > tol:
                ok = False
                break
            y = half
        if ok:
            return 2 * n
        n *= 2
    raise FlowStepUnstable(f"step control failed for eps={eps:g}")


def integrate(f, y0: np.ndarray, eps: float, tol: float = 1e-10, n_steps: int | None = None) -> np.ndarray:
    """Flow y' = f(y) for time ``eps`` by RK4.

    With ``n_steps`` given the step count is fixed, which keeps the time-eps
    map a smooth function of the initial point (needed when the result is
    differentiated by finite differences). Otherwise it is chosen by step
    doubling on ``y0``.
    """
    if eps == 0.0:
        return y0.copy()
    if n_steps is None:
        n_steps = choose_steps(f, y0, eps, tol)
    h = eps / n_steps
    y = y0
    for _ in range(n_steps):
        y = _rk4(f, y, h)
    if not np.all(np.isfinite(y)):
        raise FlowStepUnstable("non-finite state in contact flow")
    return y


def flow_s5(H: Bump, x: np.ndarray, eps: float, tol: float = 1e-10, n_steps: int | None = None) -> np.ndarray:
    """Time-eps flow of points of S^5, renormalized onto the sphere."""
    y = integrate(lambda y: s5_field(H, y), np.asarray(x, dtype=complex), eps, tol, n_steps)
    return y / np.linalg.norm(y, axis=-1, keepdims=True)


def heisenberg_rhs(H: Bump):
    """Right-hand side on the packed complex state (t, z1, z2)."""

    def f(y):
        dt, dz = heisenberg_field(H, y[..., 0].real, y[..., 1:])
        return np.concatenate([dt[..., None].astype(complex), dz], axis=-1)

    return f


def pack(t, z) -> np.ndarray:
    return np.concatenate([np.asarray(t, dtype=float)[..., None].astype(complex), np.asarray(z, dtype=complex)], axis=-1)


def flow_heisenberg(H: Bump, t: np.ndarray, z: np.ndarray, eps: float, tol: float = 1e-10,
                    n_steps: int | None = None):
    """Time-eps flow on V, state packed as complex (t, z1, z2)."""
    y = integrate(heisenberg_rhs(H), pack(t, z), eps, tol, n_steps)
    return y[..., 0].real, y[..., 1:]


def random_bump(rng: np.random.Generator, center: np.ndarray, scale: float) -> Bump:
    """Bump about a jittered ``center`` with radius in [0.5, 1] * scale."""
    c = np.asarray(center, dtype=float)
    jitter = rng.normal(size=c.shape) * 0.1 * scale
    return Bump(c + jitter, float(scale * rng.uniform(0.5, 1.0)), float(rng.uniform(0.5, 1.5)))


def sphere_tangent_check(H: Bump, x: np.ndarray) -> float:
    """max |Re <X_H, conj x>|: the field is tangent to S^5."""
    return float(np.max(np.abs(np.sum(s5_field(H, x) * x.conj(), axis=-1).real)))


__all__ = [
    "Bump", "s5_field", "heisenberg_field", "heisenberg_rhs", "pack", "choose_steps", "integrate", "flow_s5", "flow_heisenberg",
    "random_bump", "sphere_tangent_check",
]
