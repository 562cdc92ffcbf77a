"""Legendrian lifts of exact Lagrangian curves and closure of their ends.

The lift of f is xi -> (t, w) in the Heisenberg space with w = T(f(xi)) and
t = Re g(xi), g a rational primitive of f1 df2 - f2 df1. Since T pulls the
Liouville form sum(X dY - Y dX) back to Re(f1 df2 - f2 df1), the contact form
dt - sum(X dY - Y dX) vanishes on the lift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..algebra.poly import Polynomial
from ..algebra.rational import EPS_POLE, INF, RationalFunction, is_exact
from ..errors import DivergentEnd
from ..model import DEFAULT_CHART, StereoChart, contact_form_eval, involution, lagrangian_chart, stereo_unproject
from .curve import MeromorphicCurve


@dataclass(frozen=True)
class LegendrianLift:
    curve: MeromorphicCurve
    primitive: RationalFunction
    chart: StereoChart = DEFAULT_CHART
    log_terms: tuple = ()  # (root, coefficient) of coefficient*log(xi - root)

    def height(self, xi, eps_pole: float = EPS_POLE):
        g = self.primitive.evaluate(xi, eps_pole)
        t = np.real(g)
        for root, c in self.log_terms:
            t = t + np.real(c * np.log(np.asarray(xi, dtype=complex) - root))
        return t

    def sample(self, xi, eps_pole: float = EPS_POLE):
        """Heisenberg coordinates (t, w) of the lift at ``xi``."""
        xi = np.asarray(xi, dtype=complex)
        w = lagrangian_chart(self.curve.evaluate(xi, eps_pole))
        return self.height(xi, eps_pole), w

    def tangent(self, xi):
        """Exact derivative of (t, w) along d/dxi (a complex-linear direction)."""
        xi = np.asarray(xi, dtype=complex)
        g1 = self.curve.omega.coeff.evaluate(xi)
        return g1, self.curve.derivative(xi)

    def null_vector(self, xi):
        t, w = self.sample(xi)
        return stereo_unproject(t, w, self.chart)


def legendrian_lift(
    curve: MeromorphicCurve, chart: StereoChart = DEFAULT_CHART, allow_log: bool = False
) -> LegendrianLift:
    """Lift of ``curve``; raises ``NonzeroResidue`` unless ``allow_log``.

    With ``allow_log`` the height keeps its logarithmic terms, giving a lift
    on the plane minus the poles (multivalued when a residue is not real).
    """
    form = curve.omega
    if not allow_log:
        return LegendrianLift(curve, form.antiderivative(), chart)
    logs = tuple(form.log_coefficients())
    return LegendrianLift(curve, form.rational_part(), chart, logs)


def contact_residual(lift: LegendrianLift, xi, h: float = 1e-4) -> np.ndarray:
    """|alpha| on fourth-order finite-difference tangents in the x and y directions.

    Normalized by the size of the tangent so the residual is scale free.
    """
    xi = np.asarray(xi, dtype=complex)
    out = np.zeros(xi.shape)
    for direction in (1.0, 1j):
        step = h * direction * np.maximum(1.0, np.abs(xi))
        samples = [lift.sample(xi + k * step) for k in (-2, -1, 1, 2)]
        coef = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
        tdot = sum(c * s[0] for c, s in zip(coef, samples)) / np.abs(step)
        wdot = sum(c * s[1] for c, s in zip(coef, samples)) / np.abs(step)[..., None]
        _, w = lift.sample(xi)
        val = np.abs(contact_form_eval(w, tdot, wdot))
        scale = 1.0 + np.abs(tdot) + np.linalg.norm(wdot, axis=-1) * (1.0 + np.linalg.norm(w, axis=-1))
        out = np.maximum(out, val / scale)
    return out


def liouville_identity_gap(curve: MeromorphicCurve, xi, direction: complex = 1.0) -> np.ndarray:
    """sum(X dY - Y dX)(T f_* v) minus Re((f1 f2' - f2 f1') v) for v = direction."""
    xi = np.asarray(xi, dtype=complex)
    f = curve.evaluate(xi)
    df = curve.derivative(xi) * direction
    w, dw = lagrangian_chart(f), lagrangian_chart(df)
    liouville = np.sum(w.real * dw.imag - w.imag * dw.real, axis=-1)
    rhs = np.real(curve.omega.coeff.evaluate(xi) * direction)
    return liouville - rhs


# --- ends ---------------------------------------------------------------------

RADII = (1e-2, 1e-3, 1e-4, 1e-5)


@dataclass
class EndClosureReport:
    pole: str
    radii: tuple
    c0_gaps: list = field(default_factory=list)
    c1_gaps: list = field(default_factory=list)
    height_means: list = field(default_factory=list)
    height_drift: float = 0.0
    monodromy: float = 0.0
    limit: tuple = (0.0, (0j, 0j))
    converged: bool = False
    reasons: list = field(default_factory=list)


def _circle(r: float, n: int) -> np.ndarray:
    th = 2 * math.pi * (np.arange(n) + 0.5) / n
    return r * np.exp(1j * th)


def local_sampler(lift: LegendrianLift, pole):
    """u -> (t, w) for the lift in the local coordinate u at ``pole``.

    Exact poles (and infinity, u = 1/xi) are handled by recentring the
    rational data exactly, which keeps full relative accuracy for tiny u.
    """
    if pole is INF:
        f1 = lift.curve.f1.at_infinity_chart()
        f2 = lift.curve.f2.at_infinity_chart()
        g = lift.primitive.at_infinity_chart()
        shift = None
    elif is_exact(pole):
        sub = RationalFunction(Polynomial([pole, 1]))
        f1 = lift.curve.f1.compose(sub)
        f2 = lift.curve.f2.compose(sub)
        g = lift.primitive.compose(sub)
        shift = complex(pole)
    else:
        pc = complex(pole)
        return lambda u: lift.sample(pc + u, eps_pole=0.0)

    def sample(u):
        u = np.asarray(u, dtype=complex)
        f = np.stack([f1.evaluate_fast(u), f2.evaluate_fast(u)], axis=-1)
        t = np.real(g.evaluate_fast(u))
        xi = 1.0 / u if shift is None else shift + u
        for root, c in lift.log_terms:
            if shift is not None and abs(root - shift) < 1e-12 * max(1.0, abs(shift)):
                t = t + np.real(c * np.log(u))
            else:
                t = t + np.real(c * np.log(xi - root))
        return t, lagrangian_chart(f)

    return sample


def end_closure_check(
    lift: LegendrianLift,
    pole,
    radii=RADII,
    n_theta: int = 64,
    tol: float = 1e-6,
    raise_on_failure: bool = True,
) -> EndClosureReport:
    """Check that the involution carries the end at ``pole`` to a C^1 surface.

    On circles of radius r about the pole (in the local coordinate u) the
    images under the involution should approach the origin like O(r), with
    divided differences (image / r) forming a Cauchy sequence. Two further
    probes detect a logarithmic term, which the C^1 test alone cannot see:
    the circle mean of the lift height must converge, and the height must
    return to itself around the loop.
    """
    radii = tuple(sorted(radii, reverse=True))
    rep = EndClosureReport(str(pole) if pole is not INF else "inf", radii)
    quotients = []
    sample = local_sampler(lift, pole)
    for r in radii:
        t, w = sample(_circle(r, n_theta))
        ti, wi = involution(t, w)
        img = np.concatenate([ti[:, None], wi.real, wi.imag], axis=1)
        rep.c0_gaps.append(float(np.max(np.linalg.norm(img, axis=1))))
        quotients.append(img / r)
        rep.height_means.append(math.fsum(t) / len(t))
    for q0, q1 in zip(quotients, quotients[1:]):
        rep.c1_gaps.append(float(np.max(np.linalg.norm(q1 - q0, axis=1))))
    diffs = np.abs(np.diff(rep.height_means))
    rep.height_drift = float(diffs[-1]) if len(diffs) else 0.0

    rep.monodromy = loop_integral(lift.curve, pole, radii[-1], 4 * n_theta)

    # image = A u + B conj(u) + O(r^2): the quotient image/r stays bounded
    # and its successive differences shrink like r
    q0 = rep.c0_gaps[0] / radii[0]
    c0_ok = rep.c0_gaps[-1] / radii[-1] <= 2.0 * q0 + tol
    c1_ok = len(rep.c1_gaps) < 2 or rep.c1_gaps[-1] <= max(0.2 * rep.c1_gaps[0], tol * max(q0, 1.0))
    h_ok = rep.height_drift <= tol * max(1.0, abs(rep.height_means[-1]))
    m_ok = rep.monodromy <= tol
    if not c0_ok:
        rep.reasons.append("images do not approach the origin")
    if not c1_ok:
        rep.reasons.append("divided differences do not converge")
    if not h_ok:
        rep.reasons.append(f"height mean drifts by {rep.height_drift:.3g} per decade")
    if not m_ok:
        rep.reasons.append(f"height jumps by {rep.monodromy:.3g} around the end")
    rep.converged = c0_ok and c1_ok and h_ok and m_ok
    if not rep.converged and raise_on_failure:
        raise DivergentEnd(f"end at {rep.pole} does not close: " + "; ".join(rep.reasons), rep)
    return rep


def loop_integral(curve: MeromorphicCurve, pole, r: float, n: int = 256) -> float:
    """|integral of Re(f1 df2 - f2 df1)| around the circle of radius r about ``pole``.

    Trapezoid rule in the angle, which is spectrally accurate for this
    periodic integrand. Nonzero exactly when the height has monodromy.
    """
    th = 2 * math.pi * np.arange(n) / n
    u = r * np.exp(1j * th)
    du = 1j * u * (2 * math.pi / n)
    form = curve.omega
    if pole is INF:
        coeff = form.to_infinity_chart().coeff
    elif is_exact(pole):
        coeff = form.coeff.compose(RationalFunction(Polynomial([pole, 1])))
    else:
        coeff = form.coeff
        u = u + complex(pole)
    vals = np.real(coeff.evaluate_fast(u) * du)
    return abs(math.fsum(vals))
