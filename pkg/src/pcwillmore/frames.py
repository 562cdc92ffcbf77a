"""Adapted frames of C^{3,1}, structure-coefficient fixtures and the dual map.

Frames are (Z0, Z+, Z-, Z3) with Z+- = Z1 +- i Z2, so that
<Z0, conj Z3> = i, <Z+, conj Z+> = <Z-, conj Z-> = 2 and all other products
vanish except <Z3, conj Z0> = -i. Coefficients (h, p, q, z, y, x, r) live in
the gauge where the connection scalars vanish and omega = d xi.

For surfaces with vanishing quartic differential, h q = p^2 / 2. Its
derivative along omega gives h x - p y + q z = 0, the constraint used by the
type B fixtures; the relation hz - py + qz = 0 is kept as a variant for
comparison.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import RejectionExhausted, ZeroDual
from .model import E0, E1, E2, E3, GRAM, herm_product

CONSTRAINTS = ("derived", "as-printed")


@dataclass(frozen=True)
class AdaptedFrame:
    Z0: np.ndarray
    Zp: np.ndarray
    Zm: np.ndarray
    Z3: np.ndarray

    def columns(self) -> np.ndarray:
        return np.stack([self.Z0, self.Zp, self.Zm, self.Z3])

    def gram(self) -> np.ndarray:
        Z = self.columns()
        return herm_product(Z[:, None, :], Z[None, :, :])

    def residual(self) -> float:
        return float(np.max(np.abs(self.gram() - FRAME_GRAM)))


FRAME_GRAM = np.array(
    [[0, 0, 0, 1j], [0, 2, 0, 0], [0, 0, 2, 0], [-1j, 0, 0, 0]], dtype=complex
)


def standard_frame() -> AdaptedFrame:
    return AdaptedFrame(E0.copy(), E1 + 1j * E2, E1 - 1j * E2, E3.copy())


# --- form-preserving transformations ---------------------------------------------

def preserves_form(M: np.ndarray, tol: float = 1e-10) -> bool:
    """M v is form preserving iff M^T G conj(M) = G."""
    return bool(np.max(np.abs(M.T @ GRAM @ M.conj() - GRAM)) <= tol * max(1.0, np.max(np.abs(M)) ** 2))


def scaling(a: complex) -> np.ndarray:
    return np.diag([a, 1.0, 1.0, 1.0 / np.conj(a)]).astype(complex)


def rotation(U: np.ndarray) -> np.ndarray:
    M = np.eye(4, dtype=complex)
    M[1:3, 1:3] = U
    return M


def null_translation(v, s: float) -> np.ndarray:
    """e0 -> e0 + v + (s - (i/2)|v|^2) e3, e_k -> e_k - i conj(v_k) e3, e3 -> e3."""
    v = np.asarray(v, dtype=complex)
    M = np.eye(4, dtype=complex)
    M[1:3, 0] = v
    M[3, 0] = s - 0.5j * np.sum(np.abs(v) ** 2)
    M[3, 1:3] = -1j * v.conj()
    return M


def _random_unitary(rng) -> np.ndarray:
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    Q, R = np.linalg.qr(A)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_transformation(rng: np.random.Generator, length: int = 8) -> np.ndarray:
    """Product of ``length`` elementary form-preserving maps."""
    M = np.eye(4, dtype=complex)
    for _ in range(length):
        kind = rng.integers(3)
        if kind == 0:
            a = np.exp(rng.uniform(-0.5, 0.5) + 1j * rng.uniform(0, 2 * np.pi))
            G = scaling(a)
        elif kind == 1:
            G = rotation(_random_unitary(rng))
        else:
            G = null_translation(rng.normal(size=2) + 1j * rng.normal(size=2), rng.normal())
        M = G @ M
    return M


def make_frame(kind: str = "standard", seed: int | None = None, rng: np.random.Generator | None = None) -> AdaptedFrame:
    if kind == "standard":
        return standard_frame()
    if kind != "random":
        raise ValueError(f"unknown frame kind {kind!r}")
    rng = rng if rng is not None else np.random.default_rng(seed)
    M = random_transformation(rng)
    F = standard_frame()
    return AdaptedFrame(*(M @ Z for Z in F.columns()))


# --- coefficients ----------------------------------------------------------------

@dataclass(frozen=True)
class FrameCoefficients:
    h: complex
    p: complex
    q: complex
    z: complex
    y: complex
    x: complex
    r: float = 0.0
    kind: str = "unconstrained"
    constraint: str = "derived"
    seed: int | None = None

    def scaled(self, t: float) -> "FrameCoefficients":
        return FrameCoefficients(
            t * self.h, t * self.p, t * self.q, t * self.z, t * self.y, t * self.x,
            self.r, self.kind, self.constraint, self.seed,
        )

    def to_json(self) -> dict:
        d = asdict(self)
        for k in "hpqzyx":
            d[k] = [float(np.real(d[k])), float(np.imag(d[k]))]
        return d


def _cnormal(rng) -> complex:
    return complex(rng.normal(), rng.normal())


def sample_coefficients(kind: str, seed: int, constraint: str = "derived", max_tries: int = 100,
                        tol: float = 1e-8) -> FrameCoefficients:
    """Seeded fixture of class ``B``, ``C`` or ``unconstrained``.

    Class B: h != 0, p, z, y random; q = p^2/(2h); under the derived
    constraint x = (p y - q z)/h, under the printed one z = p y/(h + q) and
    x random. Draws with zx - y^2/2 or pz - hy near zero are rejected.
    """
    if constraint not in CONSTRAINTS:
        raise ValueError(f"constraint must be one of {CONSTRAINTS}")
    rng = np.random.default_rng(seed)
    if kind == "C":
        h, z = _cnormal(rng), _cnormal(rng)
        return FrameCoefficients(h, 0j, 0j, z, 0j, 0j, 0.0, "C", constraint, seed)
    if kind == "unconstrained":
        vals = [_cnormal(rng) for _ in range(6)]
        return FrameCoefficients(*vals, 0.0, "unconstrained", constraint, seed)
    if kind != "B":
        raise ValueError(f"unknown coefficient class {kind!r}")
    for _ in range(max_tries):
        h, p, z, y, x = (_cnormal(rng) for _ in range(5))
        if abs(h) < tol:
            continue
        q = p * p / (2 * h)
        if constraint == "derived":
            x = (p * y - q * z) / h
        else:
            if abs(h + q) < tol:
                continue
            z = p * y / (h + q)
        if abs(z * x - 0.5 * y * y) < tol or abs(p * z - h * y) < tol:
            continue
        return FrameCoefficients(h, p, q, z, y, x, 0.0, "B", constraint, seed)
    raise RejectionExhausted(f"no class B sample after {max_tries} draws (seed {seed})")


def phi_psi(c: FrameCoefficients) -> tuple[complex, complex]:
    """Coefficients of the quartic and sextic differentials."""
    return c.h * c.q - 0.5 * c.p**2, c.z * c.x - 0.5 * c.y**2


def consequence_identity(c: FrameCoefficients) -> complex:
    """(pz - hy)(qy - px) - (hx - qz)^2 / 2."""
    h, p, q, z, y, x = c.h, c.p, c.q, c.z, c.y, c.x
    return (p * z - h * y) * (q * y - p * x) - 0.5 * (h * x - q * z) ** 2


# --- the dual map --------------------------------------------------------------------

@dataclass(frozen=True)
class DualPair:
    Y: np.ndarray
    Yp: np.ndarray
    Ym: np.ndarray


def dual_map(frame: AdaptedFrame, c: FrameCoefficients) -> DualPair:
    h, p, q, z, y = c.h, c.p, c.q, c.z, c.y
    if h == 0 and p == 0:
        raise ZeroDual("h = p = 0, so Y vanishes")
    hb, pb, qb, zb, yb = np.conj([h, p, q, z, y])
    Z0, Zp, Zm, Z3 = frame.Z0, frame.Zp, frame.Zm, frame.Z3
    Y = 0.5j * (abs(p) ** 2 * Z0 + h * pb * Zp + hb * p * Zm) + abs(h) ** 2 * Z3
    Yp = (
        1j * (p * yb - q * pb) * Z0
        + 1j * (h * yb - 0.5 * p * pb) * Zp
        + 1j * (p * zb - q * hb) * Zm
        + (2 * h * zb - p * hb) * Z3
    )
    Ym = (
        1j * (y * pb - p * qb) * Z0
        + 1j * (z * pb - h * qb) * Zp
        + 1j * (y * hb - 0.5 * p * pb) * Zm
        + (2 * z * hb - h * pb) * Z3
    )
    return DualPair(Y, Yp, Ym)


RESIDUAL_NAMES = ("<Y,Y>", "<Y,Y+>", "<Y,Y->", "<Y+,Y->", "<Y+,Y+>-2|pz-hy|^2", "<Y-,Y->-2|pz-hy|^2")


def duality_residuals(d: DualPair, c: FrameCoefficients) -> np.ndarray:
    target = 2 * abs(c.p * c.z - c.h * c.y) ** 2
    return np.array([
        abs(herm_product(d.Y, d.Y)),
        abs(herm_product(d.Y, d.Yp)),
        abs(herm_product(d.Y, d.Ym)),
        abs(herm_product(d.Yp, d.Ym)),
        abs(herm_product(d.Yp, d.Yp) - target),
        abs(herm_product(d.Ym, d.Ym) - target),
    ])


def residual_scale(frame: AdaptedFrame, c: FrameCoefficients) -> float:
    """Natural size of the identities: quartic in the coefficients, quadratic in the frame."""
    m = max(abs(v) for v in (c.h, c.p, c.q, c.z, c.y, c.x))
    f = float(np.max(np.linalg.norm(frame.columns(), axis=1)))
    return max(1.0, (m * m * f) ** 2)


def fixture_dump(samples) -> str:
    return json.dumps([c.to_json() for c in samples], sort_keys=True, indent=1)
