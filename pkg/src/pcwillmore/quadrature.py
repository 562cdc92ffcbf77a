"""Adaptive tensor Gauss-Legendre quadrature on disks in polar coordinates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import QuadratureNonConvergent


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    panels: int
    depth: int


def _panel_values(func, center, panels: np.ndarray, order: int) -> np.ndarray:
    """Tensor GL value of func(center + r e^{i th}) r dr dth on each panel.

    ``panels`` has rows (r0, r1, th0, th1).
    """
    x, w = gauss_legendre(order)
    r0, r1, t0, t1 = panels.T
    dr, dt = r1 - r0, t1 - t0
    r = r0[:, None] + dr[:, None] * x[None, :]
    th = t0[:, None] + dt[:, None] * x[None, :]
    pts = center + r[:, :, None] * np.exp(1j * th)[:, None, :]
    vals = np.asarray(func(pts), dtype=float) * r[:, :, None]
    s = np.einsum("pij,i,j->p", vals, w, w)
    return s * dr * dt


def _split(panels: np.ndarray) -> np.ndarray:
    r0, r1, t0, t1 = panels.T
    rm, tm = 0.5 * (r0 + r1), 0.5 * (t0 + t1)
    kids = np.stack(
        [
            np.stack([r0, rm, t0, tm], -1),
            np.stack([rm, r1, t0, tm], -1),
            np.stack([r0, rm, tm, t1], -1),
            np.stack([rm, r1, tm, t1], -1),
        ],
        axis=1,
    )
    return kids.reshape(-1, 4)


def integrate_disk(
    func,
    center: complex = 0j,
    radius: float = 1.0,
    tol: float = 1e-10,
    max_depth: int = 12,
    order: int = 10,
    abs_floor: float = 1e-14,
    initial: tuple[int, int] = (4, 8),
) -> QuadResult:
    """Integrate a real function of a complex variable over |x - center| <= radius.

    Panels of the (r, theta) rectangle are refined level by level until each
    panel's 4-child estimate agrees with its own to within its share of
    ``tol * |I|``. Accepted contributions are summed with ``math.fsum``, so
    the result does not depend on evaluation order.
    """
    nr, nt = initial
    re = np.linspace(0.0, radius, nr + 1)
    te = np.linspace(0.0, 2 * math.pi, nt + 1)
    panels = np.array(
        [[re[a], re[a + 1], te[b], te[b + 1]] for a in range(nr) for b in range(nt)]
    )
    coarse = _panel_values(func, center, panels, order)
    total_area = radius * 2 * math.pi
    accepted: list[float] = []
    err_total = 0.0
    estimate = math.fsum(coarse)
    for depth in range(1, max_depth + 1):
        kids = _split(panels)
        kid_vals = _panel_values(func, center, kids, order).reshape(-1, 4)
        fine = kid_vals.sum(axis=1)
        err = np.abs(fine - coarse)
        estimate = math.fsum(accepted) + math.fsum(fine)
        area = (panels[:, 1] - panels[:, 0]) * (panels[:, 3] - panels[:, 2])
        budget = np.maximum(tol * abs(estimate), abs_floor) * area / total_area
        ok = err <= budget
        accepted.extend(kid_vals[ok].ravel().tolist())
        err_total += float(err[ok].sum())
        if ok.all():
            return QuadResult(math.fsum(accepted), err_total, len(accepted), depth)
        panels = kids.reshape(-1, 4, 4)[~ok].reshape(-1, 4)
        coarse = kid_vals[~ok].ravel()
    raise QuadratureNonConvergent(
        f"adaptive quadrature did not converge within depth {max_depth} "
        f"(estimate {estimate:.12g}, {len(panels)} unresolved panels)"
    )
