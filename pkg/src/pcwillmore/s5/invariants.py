"""Metric invariants of Legendrian surfaces in S^5.

For x(u, v) on the unit sphere of C^3 with <x_a, conj x> = 0 the induced
metric is g_ab = Re<x_a, conj x_b> and the second fundamental form is the
symmetric cubic form

    beta_abc = <II(d_a, d_b), J x_c> = Im sum x_ab conj(x_c).

Its trace gives the mean curvature form eta (2 eta = tr beta / 2), and
beta = beta_0 + S with S_abc = g_ab eta_c + g_bc eta_a + g_ca eta_b. In an
oriented orthonormal frame h1 = beta_0(e1, e1, e1), h2 = beta_0(e1, e1, e2)
and eta = delta_1 w^1 + delta_2 w^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .._parallel import chunked_map
from ..errors import DegenerateMetric
from .jets import SurfaceJet, fd_weights
from ..quadrature import gauss_legendre

def _herm(a, b):
    return np.sum(a * b.conj(), axis=-1)


def _d(jet, *idx):
    """Partial derivative of x by the coordinate indices in ``idx`` (0 = u, 1 = v)."""
    i = sum(1 for k in idx if k == 0)
    return jet[(i, len(idx) - i)]


@dataclass
class PointInvariants:
    g: np.ndarray            # (..., 2, 2)
    beta: np.ndarray         # (..., 2, 2, 2) coordinate components
    reeb: np.ndarray         # (..., 2, 2) Im <x_ab, conj x>
    frame: np.ndarray        # (..., 2, 2) rows: e_i = frame[i, a] d_a
    beta_frame: np.ndarray   # (..., 2, 2, 2)
    h1: np.ndarray
    h2: np.ndarray
    delta: np.ndarray        # (..., 2)
    area: np.ndarray         # sqrt(det g)
    K: np.ndarray | None = None
    delta_ij: np.ndarray | None = None   # (..., 2, 2) frame components of nabla eta
    eta_coord: np.ndarray | None = None  # (..., 2)
    grad_eta: np.ndarray | None = None   # (..., 2, 2) nabla_d eta_a
    christoffel: np.ndarray | None = None

    @property
    def trace_free_norm2(self):
        return self.h1**2 + self.h2**2

    @property
    def willmore_density(self):
        return 2.0 * (self.h1**2 + self.h2**2)


def orthonormal_frame(g: np.ndarray) -> np.ndarray:
    """Gram-Schmidt frame from (d_u, d_v), positively oriented."""
    E, F, G = g[..., 0, 0], g[..., 0, 1], g[..., 1, 1]
    det = E * G - F * F
    if np.any(det <= 0) or np.any(E <= 0):
        raise DegenerateMetric("induced metric is not positive definite")
    P = np.zeros(g.shape)
    P[..., 0, 0] = 1.0 / np.sqrt(E)
    s = np.sqrt(det / E)
    P[..., 1, 0] = -F / E / s
    P[..., 1, 1] = 1.0 / s
    return P


def rotate_frame(P: np.ndarray, theta) -> np.ndarray:
    """Frame (cos e1 + sin e2, -sin e1 + cos e2)."""
    c, s = np.cos(theta), np.sin(theta)
    return np.einsum("ij,...ja->...ia", np.array([[c, s], [-s, c]]), P)


def to_frame(beta: np.ndarray, P: np.ndarray) -> np.ndarray:
    return np.einsum("...ia,...jb,...kc,...abc->...ijk", P, P, P, beta)


def trace_split(beta_frame: np.ndarray):
    """(beta_0, eta) in an orthonormal frame, eta_k = tr(beta)_k / 4."""
    eta = 0.25 * np.einsum("...iik->...k", beta_frame)
    d = np.eye(2)
    S = (
        np.einsum("ij,...k->...ijk", d, eta)
        + np.einsum("jk,...i->...ijk", d, eta)
        + np.einsum("ki,...j->...ijk", d, eta)
    )
    return beta_frame - S, eta


def frame_coefficients(beta: np.ndarray, P: np.ndarray):
    """(h1, h2, delta) of beta in the frame P."""
    b0, eta = trace_split(to_frame(beta, P))
    return b0[..., 0, 0, 0], b0[..., 0, 0, 1], eta


def legendrian_residual_at(jet: dict) -> np.ndarray:
    x = jet[(0, 0)]
    return np.maximum(np.abs(_herm(jet[(1, 0)], x).imag), np.abs(_herm(jet[(0, 1)], x).imag))


def _metric(jet):
    g = np.empty(jet[(0, 0)].shape[:-1] + (2, 2))
    for a in range(2):
        for b in range(2):
            g[..., a, b] = _herm(_d(jet, a), _d(jet, b)).real
    return g


def _metric_derivative(jet):
    """dg[..., d, a, b] = d_d g_ab."""
    dg = np.empty(jet[(0, 0)].shape[:-1] + (2, 2, 2))
    for d in range(2):
        for a in range(2):
            for b in range(2):
                dg[..., d, a, b] = (_herm(_d(jet, a, d), _d(jet, b)) + _herm(_d(jet, a), _d(jet, b, d))).real
    return dg


def _beta(jet):
    beta = np.empty(jet[(0, 0)].shape[:-1] + (2, 2, 2))
    reeb = np.empty(jet[(0, 0)].shape[:-1] + (2, 2))
    x = jet[(0, 0)]
    for a in range(2):
        for b in range(2):
            xab = _d(jet, a, b)
            reeb[..., a, b] = _herm(xab, x).imag
            for c in range(2):
                beta[..., a, b, c] = _herm(xab, _d(jet, c)).imag
    return beta, reeb


def _beta_derivative(jet):
    """dbeta[..., d, a, b, c] = d_d beta_abc."""
    out = np.empty(jet[(0, 0)].shape[:-1] + (2, 2, 2, 2))
    for d in range(2):
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    out[..., d, a, b, c] = (
                        _herm(_d(jet, a, b, d), _d(jet, c)) + _herm(_d(jet, a, b), _d(jet, c, d))
                    ).imag
    return out


def brioschi(jet) -> np.ndarray:
    """Gauss curvature from E, F, G and their derivatives up to order two."""
    x_u, x_v = jet[(1, 0)], jet[(0, 1)]
    x_uu, x_uv, x_vv = jet[(2, 0)], jet[(1, 1)], jet[(0, 2)]
    x_uuv, x_uvv = jet[(2, 1)], jet[(1, 2)]
    R = lambda a, b: _herm(a, b).real  # noqa: E731
    E, F, G = R(x_u, x_u), R(x_u, x_v), R(x_v, x_v)
    E_u, E_v = 2 * R(x_uu, x_u), 2 * R(x_uv, x_u)
    G_u, G_v = 2 * R(x_uv, x_v), 2 * R(x_vv, x_v)
    F_u = R(x_uu, x_v) + R(x_u, x_uv)
    F_v = R(x_uv, x_v) + R(x_u, x_vv)
    E_vv = 2 * (R(x_uvv, x_u) + R(x_uv, x_uv))
    G_uu = 2 * (R(x_uuv, x_v) + R(x_uv, x_uv))
    F_uv = R(x_uuv, x_v) + R(x_uu, x_vv) + R(x_uv, x_uv) + R(x_u, x_uvv)
    m1 = np.stack(
        [
            np.stack([-E_vv / 2 + F_uv - G_uu / 2, E_u / 2, F_u - E_v / 2], -1),
            np.stack([F_v - G_u / 2, E, F], -1),
            np.stack([G_v / 2, F, G], -1),
        ],
        -2,
    )
    z = np.zeros_like(E)
    m2 = np.stack(
        [
            np.stack([z, E_v / 2, G_u / 2], -1),
            np.stack([E_v / 2, E, F], -1),
            np.stack([G_u / 2, F, G], -1),
        ],
        -2,
    )
    return (np.linalg.det(m1) - np.linalg.det(m2)) / (E * G - F * F) ** 2


def invariants_from_jet(jet: dict, frame_rotation: float = 0.0) -> PointInvariants:
    g = _metric(jet)
    beta, reeb = _beta(jet)
    P = orthonormal_frame(g)
    if frame_rotation:
        P = rotate_frame(P, frame_rotation)
    bf = to_frame(beta, P)
    b0, eta = trace_split(bf)
    det = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] ** 2
    inv = PointInvariants(
        g=g, beta=beta, reeb=reeb, frame=P, beta_frame=bf,
        h1=b0[..., 0, 0, 0], h2=b0[..., 0, 0, 1], delta=eta, area=np.sqrt(det),
    )
    if (2, 1) in jet:
        inv.K = brioschi(jet)
        ginv = np.linalg.inv(g)
        dg = _metric_derivative(jet)
        # Christoffel symbols Gamma[..., e, d, a]
        # low[..., d, a, b] = Gamma_{b, da} = (d_d g_ab + d_a g_db - d_b g_da) / 2
        low = 0.5 * (
            np.einsum("...dab->...dab", dg) + np.einsum("...adb->...dab", dg) - np.einsum("...bda->...dab", dg)
        )
        gam = np.einsum("...eb,...dab->...eda", ginv, low)
        eta_c = 0.25 * np.einsum("...bc,...abc->...a", ginv, beta)
        dbeta = _beta_derivative(jet)
        dginv = -np.einsum("...be,...def,...fc->...dbc", ginv, dg, ginv)
        deta = 0.25 * (
            np.einsum("...dbc,...abc->...da", dginv, beta) + np.einsum("...bc,...dabc->...da", ginv, dbeta)
        )
        grad = deta - np.einsum("...eda,...e->...da", gam, eta_c)
        inv.eta_coord = eta_c
        inv.grad_eta = grad
        inv.christoffel = gam
        inv.delta_ij = np.einsum("...id,...ja,...da->...ij", P, P, grad)
    return inv


def point_invariants(surface: SurfaceJet, u, v, order: int = 3, frame_rotation: float = 0.0) -> PointInvariants:
    surface.require(order)
    return invariants_from_jet(surface.jet(u, v, order), frame_rotation)


fundamental_forms = point_invariants


def legendrian_check(surface: SurfaceJet, n: int = 32) -> float:
    u, v, _ = sample_grid(surface, n, n)
    return float(np.max(legendrian_residual_at(surface.jet(u, v, 1))))


def gauss_equation_residual(inv: PointInvariants) -> np.ndarray:
    rhs = 1.0 - 2.0 * (inv.h1**2 + inv.h2**2) + 2.0 * np.sum(inv.delta**2, axis=-1)
    return np.abs(inv.K - rhs)


# --- quadrature over the fundamental domain -------------------------------------

def _axis_nodes(lo: float, hi: float, n: int, periodic: bool):
    if periodic:
        x = lo + (hi - lo) * (np.arange(n) + 0.5) / n
        w = np.full(n, (hi - lo) / n)
    else:
        x, w = gauss_legendre(n)
        x, w = lo + (hi - lo) * x, (hi - lo) * w
    return x, w


def sample_grid(surface: SurfaceJet, nu: int, nv: int):
    (u0, u1), (v0, v1) = surface.domain
    pu, pv = surface.periodic
    xu, wu = _axis_nodes(u0, u1, nu, pu)
    xv, wv = _axis_nodes(v0, v1, nv, pv)
    U, Vv = np.meshgrid(xu, xv, indexing="ij")
    W = np.outer(wu, wv)
    return U.ravel(), Vv.ravel(), W.ravel()


def willmore_energy_s5(surface: SurfaceJet, n: int = 64, threads: int | None = None) -> float:
    """Integral of 2(h1^2 + h2^2) dA over the declared fundamental domain."""
    u, v, w = sample_grid(surface, n, n)

    def density(idx):
        inv = invariants_from_jet(surface.jet(u[idx], v[idx], 2))
        return inv.willmore_density * inv.area

    dens = chunked_map(density, len(u), threads)
    return math.fsum((dens * w).tolist())


def area_s5(surface: SurfaceJet, n: int = 64) -> float:
    u, v, w = sample_grid(surface, n, n)
    g = _metric(surface.jet(u, v, 1))
    det = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] ** 2
    return math.fsum((np.sqrt(det) * w).tolist())


# --- Willmore equation ----------------------------------------------------------------

@dataclass
class WillmoreResidual:
    residual: np.ndarray
    laplacian_div: np.ndarray
    div: np.ndarray
    gradient_term: np.ndarray
    coupling_invariant: np.ndarray
    coupling_expanded: np.ndarray

    @property
    def coupling_mismatch(self):
        return np.abs(self.coupling_invariant - self.coupling_expanded)


def _div_eta(surface, u, v):
    inv = point_invariants(surface, u, v, 3)
    ginv = np.linalg.inv(inv.g)
    return np.einsum("...da,...da->...", ginv, inv.grad_eta)


def willmore_residual(surface: SurfaceJet, u, v, h: float = 1e-2) -> WillmoreResidual:
    """Residual of  (1/2) Lap(div eta) + div eta + 2 eta(|eta|^2) + (2/3)<eta # beta_0, nabla eta>.

    Lap is the Laplace-Beltrami operator (div grad). The contraction is taken
    as a cubic polynomial, so (1/3) of the coupling term equals
    (d11 - d22)(d1 h1 + d2 h2) + 2 d12 (d1 h2 - d2 h1); both the tensor
    contraction and that expansion are returned. The Laplacian of the scalar
    div eta is taken by fourth-order differences of jet evaluations.
    """
    surface.require(3)
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    inv = point_invariants(surface, u, v, 3)
    ginv = np.linalg.inv(inv.g)
    div = np.einsum("...da,...da->...", ginv, inv.grad_eta)

    offs1, w1 = fd_weights(1)
    offs2, w2 = fd_weights(2)
    f_u = sum(w * _div_eta(surface, u + o * h, v) for o, w in zip(offs1, w1) if w) / h
    f_v = sum(w * _div_eta(surface, u, v + o * h) for o, w in zip(offs1, w1) if w) / h
    f_uu = sum(w * _div_eta(surface, u + o * h, v) for o, w in zip(offs2, w2) if w) / h**2
    f_vv = sum(w * _div_eta(surface, u, v + o * h) for o, w in zip(offs2, w2) if w) / h**2
    f_uv = sum(
        wa * wb * _div_eta(surface, u + a * h, v + b * h)
        for a, wa in zip(offs1, w1) if wa
        for b, wb in zip(offs1, w1) if wb
    ) / h**2
    hess = np.stack([np.stack([f_uu, f_uv], -1), np.stack([f_uv, f_vv], -1)], -2)
    grad_f = np.stack([f_u, f_v], -1)
    lap = np.einsum("...ab,...ab->...", ginv, hess - np.einsum("...cab,...c->...ab", inv.christoffel, grad_f))

    eta = inv.eta_coord
    eta_up = np.einsum("...ab,...b->...a", ginv, eta)
    # eta(|eta|^2) = 2 eta^a eta^c nabla_a eta_c
    grad_term = 2.0 * np.einsum("...a,...c,...ac->...", eta_up, eta_up, inv.grad_eta)

    # beta_0 in coordinates and the contraction beta_0(eta, ., .) with sym(nabla eta)
    g = inv.g
    S = (
        np.einsum("...ab,...c->...abc", g, eta)
        + np.einsum("...bc,...a->...abc", g, eta)
        + np.einsum("...ca,...b->...abc", g, eta)
    )
    b0 = inv.beta - S
    sym = 0.5 * (inv.grad_eta + np.swapaxes(inv.grad_eta, -1, -2))
    sym_up = np.einsum("...bd,...ce,...de->...bc", ginv, ginv, sym)
    coupling_inv = np.einsum("...abc,...a,...bc->...", b0, eta_up, sym_up)

    d1, d2 = inv.delta[..., 0], inv.delta[..., 1]
    dij = 0.5 * (inv.delta_ij + np.swapaxes(inv.delta_ij, -1, -2))
    d11, d12, d22 = dij[..., 0, 0], dij[..., 0, 1], dij[..., 1, 1]
    coupling_exp = (d11 - d22) * (d1 * inv.h1 + d2 * inv.h2) + 2 * d12 * (d1 * inv.h2 - d2 * inv.h1)

    residual = 0.5 * lap + div + 2.0 * grad_term + 2.0 * coupling_inv
    return WillmoreResidual(residual, lap, div, grad_term, coupling_inv, coupling_exp)
