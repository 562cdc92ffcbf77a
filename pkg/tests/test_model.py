import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pcwillmore.errors import AtInfinity, OriginSingular
from pcwillmore.model import (
    E0,
    E1,
    E3,
    StereoChart,
    cayley_to_s5,
    contact_form_eval,
    herm_product,
    involution,
    lagrangian_chart,
    lagrangian_chart_inverse,
    s5_to_null,
    stereo_project,
    stereo_unproject,
)

finite = st.floats(-20, 20, allow_nan=False)
cplx = st.builds(complex, finite, finite)


def random_points(rng, n, scale=3.0):
    t = rng.normal(size=n) * scale
    z = (rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))) * scale
    return t, z


def test_herm_product_examples():
    assert herm_product(E1, E1) == pytest.approx(1)
    assert herm_product(E0, E3) == pytest.approx(1j)
    v = np.array([1, 0, 0, 1], dtype=complex)
    assert abs(herm_product(v, v)) < 1e-15


def test_unproject_origin_and_axis():
    assert np.allclose(stereo_unproject(0.0, np.zeros(2)), E0)
    for t in (-2.0, 0.5, 7.0):
        w = stereo_unproject(t, np.zeros(2))
        assert np.allclose(w, E0 + t * E3)
        assert abs(herm_product(w, w)) < 1e-14


def test_project_examples():
    t, z = stereo_project(E0)
    assert t == pytest.approx(0) and np.allclose(z, 0)
    z0 = np.array([1 + 2j, 3])
    t, z = stereo_project(stereo_unproject(1.5, z0))
    assert t == pytest.approx(1.5, abs=1e-12)
    assert np.allclose(z, z0, atol=1e-12)
    with pytest.raises(AtInfinity):
        stereo_project(E3)


def test_projection_round_trip_bulk(rng):
    t, z = random_points(rng, 10_000)
    w = stereo_unproject(t, z)
    assert np.max(np.abs(herm_product(w, w))) <= 1e-12 * np.max(np.abs(w) ** 2)
    assert np.allclose(herm_product(w, E3), 1j, atol=1e-12)
    t2, z2 = stereo_project(w)
    assert np.max(np.abs(t2 - t)) <= 1e-12 * (1 + np.max(np.abs(t)))
    assert np.max(np.abs(z2 - z)) <= 1e-12 * (1 + np.max(np.abs(z)))


def test_projection_is_scale_invariant(rng):
    t, z = random_points(rng, 50)
    w = stereo_unproject(t, z) * (2.0 - 3.0j)
    t2, z2 = stereo_project(w)
    assert np.allclose(t2, t) and np.allclose(z2, z)


def test_custom_chart_round_trip(rng):
    # a rotated chart: mix e1, e2 into the null pair by a form-preserving map
    from pcwillmore.frames import random_transformation

    M = random_transformation(rng)
    chart = StereoChart(M @ E0, M @ E3)
    t, z = random_points(rng, 200)
    t2, z2 = stereo_project(stereo_unproject(t, z, chart), chart)
    assert np.allclose(t2, t, atol=1e-9) and np.allclose(z2, z, atol=1e-9)


def test_metric_preserved_on_horizontal_directions(rng):
    t, z = random_points(rng, 20, 1.0)
    h = 1e-6
    for k in range(20):
        zdot = rng.normal(size=2) + 1j * rng.normal(size=2)
        # keep the tangent horizontal: tdot cancels the contact form
        tdot = np.sum(zdot * z[k].conj()).imag
        dw = (stereo_unproject(t[k] + h * tdot, z[k] + h * zdot) - stereo_unproject(t[k] - h * tdot, z[k] - h * zdot)) / (2 * h)
        # the w3 component is invisible to the form on the null line
        assert herm_product(dw, dw).real == pytest.approx(np.sum(np.abs(zdot) ** 2), rel=1e-8)


def test_involution_examples():
    t, z = involution(1.0, np.zeros(2))
    assert t == pytest.approx(-1) and np.allclose(z, 0)
    # lam = 1/(-i) = i and -i lam = 1: the unit sphere t = 0, |z|^2 = 2 is fixed
    z0 = np.array([1.0, 1.0j])
    t, z = involution(0.0, z0)
    assert t == pytest.approx(0, abs=1e-15)
    assert np.allclose(z, z0)
    with pytest.raises(OriginSingular):
        involution(0.0, np.zeros(2))


def test_involution_squares_to_identity(rng):
    t, z = random_points(rng, 10_000)
    keep = (t**2 + np.sum(np.abs(z) ** 2, axis=1) ** 2 / 4) > 1e-6
    t, z = t[keep], z[keep]
    t2, z2 = involution(*involution(t, z))
    assert np.max(np.abs(t2 - t)) <= 1e-12 * (1 + np.max(np.abs(t)))
    assert np.max(np.abs(z2 - z)) <= 1e-12 * (1 + np.max(np.abs(z)))


def test_involution_preserves_contact_distribution(rng):
    t, z = random_points(rng, 10, 1.0)
    h = 1e-6
    for k in range(10):
        zdot = rng.normal(size=2) + 1j * rng.normal(size=2)
        tdot = np.sum(zdot * z[k].conj()).imag
        assert contact_form_eval(z[k], tdot, zdot) == pytest.approx(0, abs=1e-12)
        tp, zp = involution(t[k] + h * tdot, z[k] + h * zdot)
        tm, zm = involution(t[k] - h * tdot, z[k] - h * zdot)
        t0, z0 = involution(t[k], z[k])
        val = contact_form_eval(z0, (tp - tm) / (2 * h), (zp - zm) / (2 * h))
        assert abs(val) < 1e-6 * (1 + abs((tp - tm) / (2 * h)))


def test_contact_form_examples():
    assert contact_form_eval(np.zeros(2), 1.0, np.zeros(2)) == pytest.approx(1)
    assert contact_form_eval(np.array([1, 0]), 0.0, np.array([1j, 0])) == pytest.approx(-1)


@given(cplx, cplx, st.floats(-5, 5, allow_nan=False))
def test_contact_form_vanishes_on_radial_direction(a, b, s):
    z = np.array([a, b])
    assert abs(contact_form_eval(z, 0.0, s * z)) <= 1e-12 * (1 + abs(s)) * (1 + np.sum(np.abs(z) ** 2))


def test_ruling_direction_is_not_horizontal():
    # fibres of the projection are real lines parallel to w3; on V they are
    # the t-direction, which the contact form does not annihilate, while the
    # pushed-forward w3 direction projects to zero horizontal part
    z = np.array([0.3 + 0.1j, -1.2j])
    w = stereo_unproject(0.4, z)
    t1, z1 = stereo_project(w + 1e-3 * E3 * herm_product(w, E3) / 1j)
    assert np.allclose(z1, z, atol=1e-12)


def test_lagrangian_chart_examples():
    assert np.allclose(lagrangian_chart(np.array([1, 1j])), [1, 1])


@given(cplx, cplx)
def test_lagrangian_chart_is_isometric_and_invertible(a, b):
    z = np.array([a, b])
    w = lagrangian_chart(z)
    assert np.linalg.norm(w) == pytest.approx(np.linalg.norm(z), rel=1e-12, abs=1e-12)
    assert np.allclose(lagrangian_chart_inverse(w), z)


def test_lagrangian_chart_pulls_symplectic_form_to_zero_on_curves(rng):
    # (T o f)^* omega_std for f = (xi, xi^2): omega_std = sum dX ^ dY
    def F(x):
        return lagrangian_chart(np.array([x, x * x]))

    h = 1e-5
    for _ in range(10):
        x = complex(rng.normal(), rng.normal())
        du = (F(x + h) - F(x - h)) / (2 * h)
        dv = (F(x + 1j * h) - F(x - 1j * h)) / (2 * h)
        val = np.sum(du.real * dv.imag - du.imag * dv.real)
        assert abs(val) < 1e-8


def test_cayley_round_trip(rng):
    t, z = random_points(rng, 500, 1.0)
    w = stereo_unproject(t, z)
    x = cayley_to_s5(w)
    assert np.allclose(np.linalg.norm(x, axis=1), 1.0)
    w2 = s5_to_null(x)
    t2, z2 = stereo_project(w2)
    assert np.allclose(t2, t, atol=1e-10) and np.allclose(z2, z, atol=1e-10)
