"""First variation of the Willmore energy under contact Hamiltonian flows.

For lifts of Weierstrass data the energy of a Legendrian surface in V is
measured on its Lagrangian shadow in C^2 = R^4 as the integral of
(1/2)|B_0|^2 dA. A bump supported in a small ball of V only moves the part
of the lift over a disk Omega of the xi-plane, so the change in energy is
the change of the integral over Omega. For surfaces in S^5 the energy is the
integral of 2(h1^2 + h2^2) dA over the whole fundamental domain.

The derivative at eps = 0 is a central difference; a second one at eps/2
gives a Richardson estimate and an error bar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra.rational import INF
from .quadrature import gauss_legendre
from .s5.flows import Bump, choose_steps, flow_heisenberg, flow_s5, heisenberg_field, heisenberg_rhs, pack, s5_field
from .s5.invariants import willmore_energy_s5
from .s5.jets import FDJet, SurfaceJet, fd_weights
from .weierstrass.lift import LegendrianLift

PLANE_STEPS = {1: 1e-4, 2: 5e-4}


@dataclass
class VariationResult:
    derivative: float
    error: float
    coarse: float
    fine: float
    eps: float
    energy: float
    details: dict = field(default_factory=dict)

    def within(self, rel: float, floor: float = 0.0) -> bool:
        return abs(self.derivative) <= rel * self.energy + floor


def _richardson(d_coarse: float, d_fine: float):
    return (4.0 * d_fine - d_coarse) / 3.0, abs(d_fine - d_coarse)


# --- surfaces in R^4 ----------------------------------------------------------

def tracefree_density(jet: dict) -> tuple[np.ndarray, np.ndarray]:
    """((1/2)|B_0|^2, sqrt det g) for a surface in C^2 = R^4 from its 2-jet."""
    R = lambda a, b: np.sum(a * b.conj(), axis=-1).real  # noqa: E731
    Fu, Fv = jet[(1, 0)], jet[(0, 1)]
    tang = (Fu, Fv)
    g = np.empty(Fu.shape[:-1] + (2, 2))
    for a in range(2):
        for b in range(2):
            g[..., a, b] = R(tang[a], tang[b])
    ginv = np.linalg.inv(g)
    second = {(0, 0): jet[(2, 0)], (0, 1): jet[(1, 1)], (1, 0): jet[(1, 1)], (1, 1): jet[(0, 2)]}
    normal = {}
    for key, vec in second.items():
        coef = np.stack([R(vec, Fu), R(vec, Fv)], -1)
        c = np.einsum("...ab,...b->...a", ginv, coef)
        normal[key] = vec - c[..., 0:1] * Fu - c[..., 1:2] * Fv
    B2 = 0.0
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    B2 = B2 + ginv[..., a, c] * ginv[..., b, d] * R(normal[(a, b)], normal[(c, d)])
    Hvec = 0.5 * sum(ginv[..., a, b][..., None] * normal[(a, b)] for a in range(2) for b in range(2))
    H2 = R(Hvec, Hvec)
    det = g[..., 0, 0] * g[..., 1, 1] - g[..., 0, 1] ** 2
    return 0.5 * B2 - H2, np.sqrt(det)


def polar_nodes(center: complex, radius: float, n_r: int = 48, n_theta: int = 96):
    """Nodes and weights on a disk: Gauss-Legendre in r, trapezoid in theta."""
    x, w = gauss_legendre(n_r)
    r, wr = radius * x, radius * w * radius * x
    th = 2 * math.pi * (np.arange(n_theta) + 0.5) / n_theta
    R, TH = np.meshgrid(r, th, indexing="ij")
    W = np.outer(wr, np.full(n_theta, 2 * math.pi / n_theta))
    return (center + R * np.exp(1j * TH)).ravel(), W.ravel()


def _support_hits(lift: LegendrianLift, H: Bump, center: complex, r_max: float = 1e3) -> np.ndarray:
    """xi on a log-polar grid about ``center`` (out to ``r_max``) whose lift lies in supp H."""
    radii = np.geomspace(1e-4, r_max, 600)
    th = 2 * math.pi * np.arange(256) / 256
    xi = (center + radii[:, None] * np.exp(1j * th)[None, :]).ravel()
    poles = [complex(p.location) for p in lift.curve.poles if p.location is not INF]
    if poles:
        dist = np.min(np.abs(xi[:, None] - np.array(poles)[None, :]), axis=1)
        xi = xi[dist > 1e-6]
    t, w = lift.sample(xi, eps_pole=0.0)
    hit = H.support_contains(np.concatenate([t[:, None], w.real, w.imag], axis=1))
    return xi[hit]


def lift_support_radius(lift: LegendrianLift, H: Bump, center: complex, r_max: float = 1e3) -> float:
    """Radius about ``center`` containing every sampled xi whose lift meets supp H.

    Samples a log-polar grid out to ``r_max``; the ends of the lift leave
    every compact set of V, so larger xi cannot meet the support.
    Returns ``inf`` when the support is met by points beyond ``r_max``.
    """
    hits = _support_hits(lift, H, center, r_max)
    if hits.size == 0:
        return 0.0
    far = np.abs(hits - center)
    if np.max(far) > 0.5 * r_max:
        return math.inf
    return float(np.max(far))


@dataclass(frozen=True)
class SupportBox:
    """Parallelogram xi = center + s1 a1 + s2 a2, |s_k| <= 1, around the support preimage."""

    center: complex
    a1: complex
    a2: complex

    def nodes(self, n: int):
        """(n+1)^2 trapezoid nodes and weights; n must be even."""
        s = np.linspace(-1.0, 1.0, n + 1)
        w1 = np.full(n + 1, 2.0 / n)
        w1[[0, -1]] = 1.0 / n
        S1, S2 = np.meshgrid(s, s, indexing="ij")
        xi = self.center + S1 * self.a1 + S2 * self.a2
        jac = abs((self.a1.conjugate() * self.a2).imag)
        return xi.ravel(), (np.outer(w1, w1) * jac).ravel()

    def boundary(self, n: int = 2048) -> np.ndarray:
        s = np.linspace(-1.0, 1.0, n)
        sides = [s * self.a1 + self.a2, s * self.a1 - self.a2, self.a1 + s * self.a2, -self.a1 + s * self.a2]
        return self.center + np.concatenate(sides)

    def contains(self, xi) -> np.ndarray:
        m = np.array([[self.a1.real, self.a2.real], [self.a1.imag, self.a2.imag]])
        d = np.asarray(xi) - self.center
        s = np.linalg.solve(m, np.stack([d.real, d.imag]).reshape(2, -1))
        return np.all(np.abs(s) <= 1.0, axis=0)


def support_box(lift: LegendrianLift, H: Bump, center: complex, margin: float = 1.3,
                tries: int = 8) -> SupportBox:
    """Box aligned with the principal axes of the support preimage near ``center``.

    The box is grown until no stencil on its boundary reaches supp H, so the
    integrand of the first variation vanishes to all orders at the edges and
    the trapezoid rule converges spectrally.
    """
    hits = _support_hits(lift, H, center)
    if hits.size == 0:
        raise ValueError("the Hamiltonian does not meet the lift near the chosen point")
    far = np.abs(hits - center)
    if np.max(far) > 500.0:
        raise ValueError("support of H is met far from the chosen point")
    pts = np.stack([hits.real, hits.imag], axis=1)
    mid = pts.mean(axis=0)
    if len(pts) > 2:
        _, vecs = np.linalg.eigh(np.cov((pts - mid).T))
    else:
        vecs = np.eye(2)
    axes = [complex(*vecs[:, k]) for k in range(2)]
    proj = [(pts - mid) @ vecs[:, k] for k in range(2)]
    lo = [float(np.min(p)) for p in proj]
    hi = [float(np.max(p)) for p in proj]
    # pad by the log-polar sampling cell so thin preimages are not clipped
    pad = 2.0 * (2 * math.pi / 256) * float(np.max(far)) + 1e-4
    c = complex(*mid) + sum(0.5 * (l + h) * a for l, h, a in zip(lo, hi, axes))
    half = [0.5 * (h - l) + pad for l, h in zip(lo, hi)]
    poles = [complex(p.location) for p in lift.curve.poles if p.location is not INF]
    for _ in range(tries):
        box = SupportBox(c, margin * half[0] * axes[0], margin * half[1] * axes[1])
        if poles and np.any(box.contains(np.array(poles))):
            raise ValueError("integration box contains a pole; shrink the Hamiltonian support")
        if not np.any(near_support(lift, H, box.boundary())):
            return box
        margin *= 1.5
    raise ValueError("could not enclose the support preimage")


class PlaneStencil:
    """Lift samples at the difference stencil of a node set, computed once.

    ``jet(transform)`` returns the 2-jet in (Re xi, Im xi) of the shadow
    after applying ``transform(t, z) -> z`` to every stencil sample.
    """

    def __init__(self, lift: LegendrianLift, xi: np.ndarray, steps=None):
        self.steps = dict(PLANE_STEPS if steps is None else steps)
        self.xi = xi
        self.terms = {}
        offsets = set()
        for i, j in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2)):
            h = self.steps[i + j]
            ou, wu = fd_weights(i)
            ov, wv = fd_weights(j)
            terms = []
            for a, wa in zip(ou, wu):
                for b, wb in zip(ov, wv):
                    if wa * wb != 0.0:
                        key = (float(a * h), float(b * h))
                        terms.append((key, wa * wb))
                        offsets.add(key)
            self.terms[(i, j)] = (terms, h ** (i + j))
        self.keys = sorted(offsets)
        pts = np.concatenate([xi + dx + 1j * dy for dx, dy in self.keys])
        t, z = lift.sample(pts)
        n = len(xi)
        self.t = t.reshape(len(self.keys), n)
        self.z = z.reshape(len(self.keys), n, 2)
        self.index = {k: m for m, k in enumerate(self.keys)}

    def subset(self, mask: np.ndarray) -> "PlaneStencil":
        out = PlaneStencil.__new__(PlaneStencil)
        out.__dict__.update(self.__dict__)
        out.xi, out.t, out.z = self.xi[mask], self.t[:, mask], self.z[:, mask]
        return out

    def touches(self, H: Bump) -> np.ndarray:
        """Nodes with at least one stencil sample inside the support of H."""
        t, z = self.points()
        inside = H.support_contains(np.concatenate([t[:, None], z.real, z.imag], axis=1))
        return inside.reshape(len(self.keys), len(self.xi)).any(axis=0)

    def points(self):
        return self.t.reshape(-1), self.z.reshape(-1, 2)

    def jet(self, transform=None) -> dict:
        if transform is None:
            z = self.z
        else:
            t, zf = transform(*self.points())
            z = zf.reshape(self.z.shape)
        out = {}
        for key, (terms, scale) in self.terms.items():
            out[key] = sum(w * z[self.index[k]] for k, w in terms) / scale
        return out


def near_support(lift: LegendrianLift, H: Bump, xi: np.ndarray, spread: float = 2e-3) -> np.ndarray:
    """Conservative mask of nodes whose stencil may reach the support of H.

    The lift moves by at most about |d lift| * spread across a stencil; the
    derivative bound comes from a centred difference at each node.
    """
    h = spread
    p0 = _lift_point(lift, xi)
    du = _lift_point(lift, xi + h) - _lift_point(lift, xi - h)
    dv = _lift_point(lift, xi + 1j * h) - _lift_point(lift, xi - 1j * h)
    move = 2.0 * (np.linalg.norm(du, axis=1) + np.linalg.norm(dv, axis=1))
    return np.linalg.norm(p0 - H.center, axis=1) < H.radius + move


def disk_density(stencil: PlaneStencil, transform=None) -> np.ndarray:
    dens, area = tracefree_density(stencil.jet(transform))
    return dens * area


def lift_energy_on_disk(lift: LegendrianLift, H: Bump | None, eps: float, center: complex, radius: float,
                        n_r: int = 128, n_theta: int = 256, steps=None) -> float:
    """Integral of (1/2)|B_0|^2 dA over the disk for the eps-flowed lift."""
    xi, w = polar_nodes(center, radius, n_r, n_theta)
    st = PlaneStencil(lift, xi, steps)
    if H is None or eps == 0.0:
        return math.fsum((disk_density(st) * w).tolist())
    n_steps = choose_steps(heisenberg_rhs(H), pack(st.t[0], st.z[0]), eps)
    dens = disk_density(st, lambda t, z: flow_heisenberg(H, t, z, eps, n_steps=n_steps))
    return math.fsum((dens * w).tolist())


def _lift_point(lift: LegendrianLift, xi) -> np.ndarray:
    t, w = lift.sample(xi)
    return np.concatenate([np.atleast_1d(t)[:, None], np.atleast_2d(w).real, np.atleast_2d(w).imag], axis=1)


def lift_bump(lift: LegendrianLift, rng: np.random.Generator, radius: float = 0.3,
              pole_clearance: float = 0.2, tries: int = 20) -> tuple[Bump, complex]:
    """Random bump on V centred on the lift, with its preimage a small disk.

    The centre xi_0 is drawn away from the poles and the radius, scaled to
    the distance of the lift from the origin of V, is halved until the
    support preimage is a single disk about xi_0 that avoids every pole.
    """
    poles = [complex(p.location) for p in lift.curve.poles if p.location is not INF]
    for _ in range(tries):
        xi0 = complex(*rng.uniform(-1.5, 1.5, 2))
        if poles and min(abs(xi0 - p) for p in poles) < pole_clearance:
            continue
        c = _lift_point(lift, xi0)[0]
        r = radius * max(1.0, 0.1 * float(np.linalg.norm(c))) * float(rng.uniform(0.5, 1.0))
        amp = float(rng.uniform(0.5, 1.5))
        for _ in range(8):
            H = Bump(c, r, amp)
            rad = lift_support_radius(lift, H, xi0)
            if math.isfinite(rad) and all(abs(xi0 - p) > 1.5 * rad for p in poles):
                return H, xi0
            r *= 0.5
    raise ValueError("no admissible bump found")


def field_speed(lift: LegendrianLift, H: Bump, xi) -> float:
    t, w = lift.sample(xi)
    dt, dz = heisenberg_field(H, t, w)
    return float(np.max(np.sqrt(dt**2 + np.sum(np.abs(dz) ** 2, axis=-1))))


GRID_SIZES = (128, 192, 256, 384)


def first_variation_lift(lift: LegendrianLift, H: Bump, energy: float, center: complex,
                         eps: float | None = None, n: int = 192, tol: float | None = None,
                         sizes=GRID_SIZES) -> VariationResult:
    """d/d eps of the Willmore energy of the lift under the flow of H.

    The energy change is integrated with the trapezoid rule on an
    (n+1) x (n+1) grid over a box around the support preimage. By default
    eps is chosen so the flow moves points by about 1e-5 times the bump
    radius. The error bar adds the Richardson correction to the change seen
    on the half-resolution subgrid.

    With ``tol`` given, the grid runs through ``sizes`` until the
    half-grid quadrature error falls below tol / 4.
    """
    box = support_box(lift, H, center)
    if eps is None:
        xi, _ = box.nodes(16)
        eps = 1e-5 * H.radius / max(field_speed(lift, H, xi), 1e-300)
    if tol is None:
        return _variation_on_box(lift, H, energy, box, eps, n)
    for size in sizes:
        res = _variation_on_box(lift, H, energy, box, eps, size)
        if res.details["quadrature_error"] <= 0.25 * tol:
            break
    return res


def _variation_on_box(lift, H, energy, box: SupportBox, eps: float, n: int) -> VariationResult:
    if n % 2:
        raise ValueError("grid size must be even")
    xi, w = box.nodes(n)
    sub = np.zeros((n + 1, n + 1), dtype=bool)
    sub[::2, ::2] = True
    sub = sub.ravel()
    # nodes whose stencil never meets the support keep their density exactly
    cand = near_support(lift, H, xi)
    st = PlaneStencil(lift, xi[cand])
    touched = st.touches(H)
    active, wa = st.subset(touched), w[cand][touched]
    on_sub = sub[cand][touched]
    n_steps = choose_steps(heisenberg_rhs(H), pack(active.t[0], active.z[0]), eps) if touched.any() else 1

    def flowed(e):
        return disk_density(active, lambda t, z: flow_heisenberg(H, t, z, e, n_steps=n_steps))

    def deriv(e):
        diff = (flowed(e) - flowed(-e)) / (2 * e)
        full = math.fsum((diff * wa).tolist())
        half = math.fsum((diff[on_sub] * wa[on_sub]).tolist()) * 4.0
        return full, half

    (dc, hc), (df, hf) = deriv(eps), deriv(eps / 2)
    est, err = _richardson(dc, df)
    quad_err = abs((4.0 * hf - hc) / 3.0 - est)
    base = math.fsum((disk_density(active) * wa).tolist()) if touched.any() else 0.0
    return VariationResult(
        est, err + quad_err, dc, df, eps, energy,
        {"box_center": box.center, "box_axes": [box.a1, box.a2], "support_energy": base,
         "active_nodes": int(touched.sum()), "grid": n, "flow_steps": n_steps,
         "quadrature_error": quad_err, "richardson_error": err},
    )


# --- surfaces in S^5 ------------------------------------------------------------

def flowed_surface(surface: SurfaceJet, H: Bump, eps: float, n_steps: int | None = None) -> FDJet:
    """The eps-flowed surface; the step count is fixed once so that the
    flowed parametrization is smooth for the difference stencils."""
    if n_steps is None and eps != 0.0:
        from .s5.invariants import sample_grid

        u, v, _ = sample_grid(surface, 16, 16)
        n_steps = choose_steps(lambda y: s5_field(H, y), surface.position(u, v), eps)
    return FDJet(
        lambda u, v: flow_s5(H, surface.position(u, v), eps, n_steps=n_steps),
        name=f"{surface.name}+flow",
        domain=surface.domain,
        periodic=surface.periodic,
    )


def first_variation_s5(surface: SurfaceJet, H: Bump, eps: float = 1e-3, n: int = 48,
                       threads: int | None = None) -> VariationResult:
    def energy(e):
        return willmore_energy_s5(flowed_surface(surface, H, e), n, threads)

    def deriv(e):
        return (energy(e) - energy(-e)) / (2 * e)

    dc, df = deriv(eps), deriv(eps / 2)
    est, err = _richardson(dc, df)
    return VariationResult(est, err, dc, df, eps, energy(0.0))
