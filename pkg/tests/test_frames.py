import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pcwillmore.errors import ZeroDual
from pcwillmore.frames import (
    FRAME_GRAM,
    FrameCoefficients,
    consequence_identity,
    dual_map,
    duality_residuals,
    fixture_dump,
    make_frame,
    null_translation,
    phi_psi,
    preserves_form,
    random_transformation,
    residual_scale,
    rotation,
    sample_coefficients,
    scaling,
    standard_frame,
)
from pcwillmore.model import herm_product

SEEDS = range(1000)


def test_standard_frame_products_are_exact():
    assert np.array_equal(standard_frame().gram(), FRAME_GRAM)


def test_random_frames(rng):
    worst = max(make_frame("random", rng=rng).residual() for _ in range(1000))
    assert worst <= 1e-10


def test_generators_preserve_the_form(rng):
    assert preserves_form(scaling(0.7 * np.exp(0.4j)))
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    assert preserves_form(rotation(q))
    assert preserves_form(null_translation([1 + 2j, -0.5j], 0.3))
    assert preserves_form(random_transformation(rng))
    assert not preserves_form(np.diag([2.0, 1, 1, 1]).astype(complex))


def test_class_c_samples():
    for seed in range(50):
        c = sample_coefficients("C", seed)
        assert phi_psi(c) == (0, 0)


def test_phi_psi_arithmetic():
    c = FrameCoefficients(1, 0, 1, 0, 0, 0)
    assert phi_psi(c) == (1, 0)


def test_class_b_samples():
    for seed in SEEDS:
        c = sample_coefficients("B", seed)
        phi, psi = phi_psi(c)
        assert abs(phi) <= 1e-12 * (1 + abs(c.p) ** 2)
        assert abs(psi) > 1e-8
        assert abs(c.p * c.z - c.h * c.y) > 1e-8
        scale = max(abs(v) for v in (c.h, c.p, c.q, c.z, c.y, c.x)) ** 4
        assert abs(consequence_identity(c)) <= 1e-12 * max(1.0, scale)


def test_class_b_sampling_is_seeded():
    assert sample_coefficients("B", 7) == sample_coefficients("B", 7)
    assert sample_coefficients("B", 7) != sample_coefficients("B", 8)


def test_class_c_dual_is_constant_point():
    c = sample_coefficients("C", 3)
    F = standard_frame()
    d = dual_map(F, c)
    assert np.allclose(d.Y, abs(c.h) ** 2 * F.Z3)
    assert np.max(duality_residuals(d, c)) <= 1e-12
    # with p = q = 0: |pz - hy|^2 = |hy|^2 = 0 since y = 0 as well
    assert herm_product(d.Yp, d.Yp).real / 2 == pytest.approx(abs(c.h * c.y) ** 2, abs=1e-12)


def test_zero_dual():
    with pytest.raises(ZeroDual):
        dual_map(standard_frame(), FrameCoefficients(0, 0, 1, 1, 1, 1))


@pytest.mark.parametrize("frame_kind", ["standard", "random"])
def test_duality_identities_derived_constraints(frame_kind):
    worst = np.zeros(6)
    for seed in SEEDS:
        c = sample_coefficients("B", seed)
        F = make_frame(frame_kind, seed=seed)
        worst = np.maximum(worst, duality_residuals(dual_map(F, c), c) / residual_scale(F, c))
    assert np.all(worst <= 1e-10), worst


def test_yy_vanishes_without_constraints():
    for seed in range(200):
        c = sample_coefficients("unconstrained", seed)
        F = make_frame("random", seed=seed)
        d = dual_map(F, c)
        assert abs(herm_product(d.Y, d.Y)) <= 1e-12 * residual_scale(F, c)


def test_as_printed_constraint_breaks_consequence_identity():
    worst = 0.0
    for seed in range(200):
        c = sample_coefficients("B", seed, constraint="as-printed")
        worst = max(worst, abs(consequence_identity(c)))
        F = standard_frame()
        # the six duality residuals need only hq = p^2/2
        assert np.max(duality_residuals(dual_map(F, c), c)) <= 1e-10 * residual_scale(F, c)
    assert worst > 1e-3


def test_residuals_are_frame_independent():
    for seed in range(100):
        c = sample_coefficients("B", seed)
        a = duality_residuals(dual_map(standard_frame(), c), c)
        b = duality_residuals(dual_map(make_frame("random", seed=seed), c), c)
        F = make_frame("random", seed=seed)
        assert np.all(np.abs(a - b) <= 1e-10 * residual_scale(F, c))


@given(st.integers(0, 10_000), st.floats(0.1, 10))
def test_residuals_are_homogeneous(seed, t):
    c = sample_coefficients("B", seed)
    F = standard_frame()
    base = duality_residuals(dual_map(F, c), c) / residual_scale(F, c)
    scaled = duality_residuals(dual_map(F, c.scaled(t)), c.scaled(t)) / residual_scale(F, c.scaled(t))
    assert np.all(base <= 1e-10) and np.all(scaled <= 1e-10)


def test_fixture_dump_round_trip():
    samples = [sample_coefficients("B", s) for s in range(3)]
    data = json.loads(fixture_dump(samples))
    assert [d["seed"] for d in data] == [0, 1, 2]
    for d, c in zip(data, samples):
        assert complex(*d["h"]) == c.h and d["kind"] == "B"
