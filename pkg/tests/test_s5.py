import itertools
import math

import numpy as np
import pytest

from pcwillmore.errors import JetOrderInsufficient
from pcwillmore.s5 import (
    FDJet,
    area_s5,
    builtin,
    equatorial_s2,
    from_expressions,
    gauss_equation_residual,
    graph_surface,
    hexagonal_torus,
    legendrian_check,
    point_invariants,
    willmore_energy_s5,
    willmore_residual,
)
from pcwillmore.s5.flows import Bump, random_bump
from pcwillmore.s5.invariants import sample_grid, trace_split
from pcwillmore.s5.jets import non_legendrian_torus
from pcwillmore.variation import flowed_surface

TORUS_W = 4 * math.pi**2 / math.sqrt(3)
GRAPH = "0.3*u**3 + 0.2*u*v**2 + 0.1*v**2"


@pytest.fixture(scope="module")
def torus():
    return hexagonal_torus()


@pytest.fixture(scope="module")
def sphere():
    return equatorial_s2()


@pytest.fixture(scope="module")
def graph():
    return graph_surface(GRAPH)


def _grid(surface, n=7):
    u, v, _ = sample_grid(surface, n, n)
    return u, v


def test_builtins_and_unknown_name():
    assert builtin("hexagonal_torus").name == "hexagonal_torus"
    with pytest.raises(KeyError):
        builtin("nope")


def test_legendrian_residuals(torus, sphere):
    assert legendrian_check(torus) <= 1e-10
    assert legendrian_check(sphere) == 0.0
    assert legendrian_check(non_legendrian_torus()) > 0.1


def test_torus_invariants(torus):
    inv = point_invariants(torus, *_grid(torus))
    assert np.allclose(inv.delta, 0, atol=1e-12)
    assert np.allclose(inv.h1**2 + inv.h2**2, 0.5, atol=1e-12)
    assert np.allclose(inv.K, 0, atol=1e-12)
    assert np.allclose(inv.g, (2 / 3) * np.array([[1, 0.5], [0.5, 1]]), atol=1e-14)


def test_sphere_invariants(sphere):
    inv = point_invariants(sphere, *_grid(sphere))
    assert np.max(np.abs(inv.beta)) <= 1e-12
    assert np.allclose(inv.K, 1, atol=1e-9)


@pytest.mark.parametrize("name", ["torus", "sphere", "graph"])
def test_beta_is_fully_symmetric(name, request):
    s = request.getfixturevalue(name)
    beta = point_invariants(s, *_grid(s, 4)).beta
    for perm in itertools.permutations(range(3)):
        lead = beta.ndim - 3
        axes = tuple(range(lead)) + tuple(lead + p for p in perm)
        assert np.max(np.abs(beta - beta.transpose(axes))) <= 1e-8


@pytest.mark.parametrize("name", ["torus", "sphere", "graph"])
def test_reeb_component_and_trace_split(name, request):
    s = request.getfixturevalue(name)
    inv = point_invariants(s, *_grid(s, 5))
    assert np.max(np.abs(inv.reeb)) <= 1e-8
    b0, eta = trace_split(inv.beta_frame)
    assert np.max(np.abs(np.einsum("...iik->...k", b0))) <= 1e-8
    assert np.max(np.abs(2 * eta - 0.5 * np.einsum("...iik->...k", inv.beta_frame))) <= 1e-8


def test_gauss_equation_analytic(torus, sphere, graph):
    for s in (torus, sphere, graph):
        inv = point_invariants(s, *_grid(s))
        assert np.max(gauss_equation_residual(inv)) <= 1e-9


def test_gauss_equation_fd_jets(torus):
    fd = FDJet(torus.position, "torus_fd")
    inv = point_invariants(fd, *_grid(fd, 5))
    assert np.max(gauss_equation_residual(inv)) <= 1e-6


def test_gauss_equation_after_legendrian_perturbation(torus, rng):
    H = random_bump(rng, np.concatenate([torus.position(0.5, 0.8).real, torus.position(0.5, 0.8).imag]), 0.6)
    moved = flowed_surface(torus, H, 0.05)
    inv = point_invariants(moved, *_grid(moved, 6))
    # Legendrian up to the integrator and difference-stencil error
    assert legendrian_check(moved, 12) <= 1e-6
    assert np.max(gauss_equation_residual(inv)) <= 1e-4


def test_weight_three_gauge_behaviour(graph):
    u, v = _grid(graph, 4)
    base = point_invariants(graph, u, v)
    for theta in (0.3, 1.1, -2.0):
        # rotating the frame by theta is rotating the coframe by -theta
        rot = point_invariants(graph, u, v, frame_rotation=-theta)
        expected = np.exp(-3j * theta) * (base.h1 - 1j * base.h2)
        assert np.allclose(rot.h1 - 1j * rot.h2, expected, atol=1e-12)
        assert np.allclose(rot.h1**2 + rot.h2**2, base.h1**2 + base.h2**2, atol=1e-12)


def test_torus_energy(torus):
    w32 = willmore_energy_s5(torus, 32)
    w64 = willmore_energy_s5(torus, 64)
    assert abs(w64 - TORUS_W) <= 1e-4 * TORUS_W
    assert abs(w64 - w32) <= 1e-6
    assert area_s5(torus, 32) == pytest.approx(TORUS_W / 1.0, rel=1e-12)


def test_sphere_energy_and_area(sphere):
    assert willmore_energy_s5(sphere, 32) == pytest.approx(0, abs=1e-12)
    assert area_s5(sphere, 64) == pytest.approx(4 * math.pi, rel=1e-10)


def test_energy_is_parametrization_invariant(torus):
    s = 1 / math.sqrt(3)
    sheared = from_expressions(
        [f"{s}*exp(I*(u+v))", f"{s}*exp(I*v)", f"{s}*exp(-I*(u+2*v))"], name="sheared_torus"
    )
    assert legendrian_check(sheared) <= 1e-10
    assert willmore_energy_s5(sheared, 32) == pytest.approx(willmore_energy_s5(torus, 32), rel=1e-10)


def test_energy_is_thread_count_independent(torus, graph):
    for s in (torus, graph):
        assert willmore_energy_s5(s, 24, threads=1) == willmore_energy_s5(s, 24, threads=4)


def test_willmore_residual_vanishes_on_models(torus, sphere):
    for s in (torus, sphere):
        r = willmore_residual(s, *_grid(s, 4))
        assert np.max(np.abs(r.residual)) <= 1e-6


def test_coupling_forms_agree(graph):
    r = willmore_residual(graph, *_grid(graph, 5))
    assert np.max(r.coupling_mismatch) <= 1e-5 * (1 + np.max(np.abs(r.coupling_invariant)))
    assert np.max(np.abs(r.residual)) > 1e-3  # a generic graph is not Willmore


def test_coupling_forms_agree_fd(graph):
    fd = FDJet(graph.position, "graph_fd", graph.domain, (False, False))
    r = willmore_residual(fd, *_grid(graph, 4))
    assert np.max(r.coupling_mismatch) <= 1e-5 * (1 + np.max(np.abs(r.coupling_invariant)))


def test_residual_needs_enough_derivatives(torus):
    short = FDJet(torus.position)
    short.max_order = 2
    with pytest.raises(JetOrderInsufficient):
        willmore_residual(short, 0.1, 0.2)


def test_bump_profile():
    H = Bump(np.zeros(2), 2.0, 1.5)
    val, grad = H.value_and_gradient(np.array([[0.0, 0.0], [2.5, 0.0], [1.0, 0.0]]))
    assert val[0] == pytest.approx(1.5)
    assert val[1] == 0 and np.all(grad[1] == 0)
    h = 1e-6
    vp, _ = H.value_and_gradient(np.array([1.0 + h, 0.0]))
    vm, _ = H.value_and_gradient(np.array([1.0 - h, 0.0]))
    assert grad[2, 0] == pytest.approx((vp - vm) / (2 * h), rel=1e-7)
