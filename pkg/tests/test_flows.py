import math

import numpy as np
import pytest

from pcwillmore.errors import FlowStepUnstable
from pcwillmore.model import contact_form_eval
from pcwillmore.s5 import equatorial_s2, hexagonal_torus, legendrian_check
from pcwillmore.s5.flows import (
    Bump,
    choose_steps,
    flow_heisenberg,
    flow_s5,
    heisenberg_field,
    integrate,
    random_bump,
    s5_field,
    sphere_tangent_check,
)
from pcwillmore.variation import (
    first_variation_lift,
    first_variation_s5,
    flowed_surface,
    lift_bump,
    lift_energy_on_disk,
    polar_nodes,
    tracefree_density,
)
from pcwillmore.weierstrass import legendrian_lift


def _unit(rng, n):
    x = rng.normal(size=(n, 3)) + 1j * rng.normal(size=(n, 3))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def test_s5_field_is_tangent_and_contact(rng):
    x = _unit(rng, 200)
    H = Bump(np.concatenate([x[0].real, x[0].imag]), 1.5, 1.0)
    assert sphere_tangent_check(H, x) <= 1e-14
    # alpha(X_H) = Im <X_H, conj x> = H
    val, _ = H.value_and_gradient(np.concatenate([x.real, x.imag], axis=1))
    alpha = np.sum(s5_field(H, x) * x.conj(), axis=1).imag
    assert np.allclose(alpha, val, atol=1e-14)


def test_heisenberg_field_contact_value(rng):
    t = rng.normal(size=100)
    z = rng.normal(size=(100, 2)) + 1j * rng.normal(size=(100, 2))
    H = Bump(np.zeros(5), 4.0, 1.2)
    dt, dz = heisenberg_field(H, t, z)
    val, _ = H.value_and_gradient(np.concatenate([t[:, None], z.real, z.imag], axis=1))
    assert np.allclose(contact_form_eval(z, dt, dz), val, atol=1e-13)


def test_flow_preserves_legendrian_curves(rng):
    # the image of a horizontal curve stays horizontal
    H = Bump(np.array([0.1, 0.2, -0.1, 0.0, 0.3]), 2.0, 1.0)
    s = np.linspace(0, 1, 41)
    z = np.stack([s + 0j, 1j * s**2], axis=1)
    # z' conj z = s + 2 s^3 is real, so the curve is horizontal at constant t
    t = np.zeros_like(s)
    assert np.allclose(contact_form_eval(z, 0.0, np.gradient(z, s, axis=0)), 0)
    tf, zf = flow_heisenberg(H, t, z, 0.3, n_steps=64)
    h = s[1] - s[0]
    dt = np.gradient(tf, h, edge_order=2)
    dz = np.gradient(zf, h, axis=0, edge_order=2)
    assert np.max(np.abs(contact_form_eval(zf, dt, dz))[2:-2]) < 1e-3
    assert np.max(np.abs(zf - z)) > 1e-2


def test_flowed_torus_stays_on_sphere_and_legendrian(rng):
    torus = hexagonal_torus()
    c = torus.position(0.4, 1.0)
    H = random_bump(rng, np.concatenate([c.real, c.imag]), 0.8)
    moved = flowed_surface(torus, H, 0.1)
    u = rng.uniform(0, 2 * np.pi, 50)
    v = rng.uniform(0, 2 * np.pi, 50)
    assert np.allclose(np.linalg.norm(moved.position(u, v), axis=1), 1.0)
    assert legendrian_check(moved, 12) <= 1e-6


def test_zero_time_flow_is_identity(rng):
    x = _unit(rng, 5)
    H = Bump(np.zeros(6), 1.0)
    assert np.allclose(flow_s5(H, x, 0.0), x, rtol=0, atol=1e-15)


def test_flow_time_reversal(rng):
    # flowing back for the same time with the same step count returns the start
    x = _unit(rng, 20)
    H = Bump(np.concatenate([x[0].real, x[0].imag]), 1.2, 1.0)
    back = flow_s5(H, flow_s5(H, x, 0.2, n_steps=32), -0.2, n_steps=32)
    assert np.max(np.abs(back - x)) < 1e-9


def test_step_control_raises_on_blowup():
    with pytest.raises(FlowStepUnstable):
        choose_steps(lambda y: y * y, np.array([1.0 + 0j]), 2.0, max_steps=64)


def test_integrate_fixed_steps_matches_exponential():
    y = integrate(lambda y: -y, np.array([1.0]), 1.0, n_steps=64)
    assert y[0] == pytest.approx(math.exp(-1), rel=1e-9)


# --- first variation ------------------------------------------------------------

def test_tracefree_density_vanishes_on_a_plane():
    jet = {
        (1, 0): np.array([[1.0, 0.0]], dtype=complex),
        (0, 1): np.array([[1j, 0.0]], dtype=complex),
        (2, 0): np.zeros((1, 2), complex),
        (1, 1): np.zeros((1, 2), complex),
        (0, 2): np.zeros((1, 2), complex),
    }
    dens, area = tracefree_density(jet)
    assert dens[0] == 0 and area[0] == pytest.approx(1)


def test_polar_nodes_integrate_area():
    _, w = polar_nodes(0.3j, 0.7, 16, 32)
    assert math.fsum(w) == pytest.approx(math.pi * 0.49, rel=1e-13)


def test_disk_energy_zero_time_consistent(fixtures22):
    lift = legendrian_lift(fixtures22[0].curve)
    a = lift_energy_on_disk(lift, None, 0.0, 2.0 + 0.5j, 0.2, 24, 48)
    b = lift_energy_on_disk(lift, Bump(np.zeros(5) + 1e3, 0.1), 1e-3, 2.0 + 0.5j, 0.2, 24, 48)
    assert a == b and a > 0


def test_sphere_first_variation(rng):
    s2 = equatorial_s2()
    for _ in range(2):
        c = s2.position(*rng.uniform(0.2, 1.2, 2))
        H = random_bump(rng, np.concatenate([c.real, c.imag]), 0.8)
        r = first_variation_s5(s2, H, 1e-4, 32)
        assert abs(r.derivative) <= 1e-4 * (1 + r.energy)


@pytest.mark.slow
def test_lift_first_variation_single_bump(fixtures22):
    lift = legendrian_lift(fixtures22[1].curve)
    H, xi0 = lift_bump(lift, np.random.default_rng(5))
    r = first_variation_lift(lift, H, 12 * math.pi, xi0, tol=1e-3 * 12 * math.pi)
    assert abs(r.derivative) <= 1e-3 * 12 * math.pi
