import math
from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest

from thetacycles.quadspace import majorant
from thetacycles.binarymodel import GroupSpec, geodesic_of, cusp_at, model_for
from thetacycles import kernel as kn
from conftest import DIAG, CORPUS_A_GRAM, lattice

BOUNDARY_GRAM = [[0, 0, -1], [0, 2, 0], [-1, 0, 0]]


def test_schwartz_form_example():
    L = lattice(DIAG)
    val = kn.phi_eval(L.space, 1j, (1, 0, 0), (0, 0, 1), (1, 0, 0))
    assert abs(val - math.sqrt(2) * math.exp(-math.pi)) < 1e-15


def test_schwartz_form_input_checks():
    sp = lattice(DIAG).space
    with pytest.raises(ValueError, match="hyperboloid"):
        kn.phi_eval(sp, 1j, (1, 0, 0), (0, 0, 2), (1, 0, 0))
    with pytest.raises(ValueError, match="tangent"):
        kn.phi_eval(sp, 1j, (1, 0, 0), (0, 0, 1), (0, 0, 1))


def test_tangent_basis_orthonormal():
    sp = lattice(CORPUS_A_GRAM).space
    Z = (1.0, 0.0, 0.5)
    B = kn.tangent_basis(sp, Z)
    G = np.array(CORPUS_A_GRAM, dtype=float)
    assert np.allclose(B @ G @ B.T, np.eye(2))
    assert np.allclose(B @ G @ np.array(Z), 0)


def test_theta_coefficient_against_box_sum():
    L = lattice(DIAG)
    h = (F(1, 3), 0, 0)
    beta = F(5, 9)  # x1^2 + x2^2 - x3^2 = 10/9
    Z = (0.0, 0.0, 1.0)
    W = (1.0, 0.0, 0.0)
    got = kn.theta_coeff_numeric(L, h, beta, 1.0, Z, W)
    ref = 0.0
    for k in product(range(-12, 13), repeat=3):
        x = (k[0] + 1 / 3, k[1], k[2])
        if abs(x[0] ** 2 + x[1] ** 2 - x[2] ** 2 - 10 / 9) < 1e-9:
            ref += math.sqrt(2) * x[0] * math.exp(-2 * math.pi * x[2] ** 2)
    assert abs(got.value - ref) < 1e-12 and got.tail_bound < 1e-12


def test_geodesic_period_matches_count():
    L = lattice(CORPUS_A_GRAM)
    geo = geodesic_of((1, 0, -1), L, GroupSpec("congruence", 3))
    val, err = kn.geodesic_period(L, (0, F(1, 6), 0), F(1, 12), geo)
    assert abs(val + 3) < 1e-6 and err < 1e-6


def test_geodesic_period_needs_closed_geodesic():
    L = lattice(DIAG)
    geo = geodesic_of((1, 0, 0), L, GroupSpec("full"))
    assert not geo.closed
    with pytest.raises(ValueError, match="closed geodesic"):
        kn.geodesic_period(L, (0, 0, 0), F(1, 2), geo)


def test_boundary_limit_small_grid():
    L = lattice(BOUNDARY_GRAM)
    rows = kn.boundary_limit_check(L, (0, F(1, 3), 0), cusp_at(L, (1, 0, 0)), t_grid=(2, 4), dps=60)
    assert rows[1][1] < rows[0][1] < 1e-8


def test_gaussian_fit():
    rows = [(t, math.exp(-3 * t * t)) for t in (1, 2, 3)] + [(4, 0)]
    assert abs(kn.gaussian_decay_fit(rows) - 3) < 1e-9
    with pytest.raises(ValueError):
        kn.gaussian_decay_fit([(1, 0.5), (2, 0)])


def test_schwartz_form_group_invariant():
    L = lattice(CORPUS_A_GRAM)
    m = model_for(L.space)
    A = np.array([[float(c) for c in r] for r in m.act(((2, 1), (1, 1)))])
    Z = np.array([1.0, 0.0, 0.5])
    X = np.array([1.0, 0.3, -1.0])
    W = kn.tangent_basis(L.space, Z)[0]
    tau = 0.2 + 0.9j
    a = kn.phi_eval(L.space, tau, X, Z, W)
    b = kn.phi_eval(L.space, tau, A @ X, A @ Z, A @ W)
    assert abs(a - b) < 1e-12


def test_schwartz_form_via_majorant():
    L = lattice(CORPUS_A_GRAM)
    Zq = (1, 0, F(1, 2))
    M = np.array([[float(c) for c in r] for r in majorant(L.space, Zq).gram_Z])
    G = np.array(CORPUS_A_GRAM, dtype=float)
    X = np.array([1.0, 0.3, -1.0])
    Z = np.array([1.0, 0.0, 0.5])
    W = kn.tangent_basis(L.space, Z)[0]
    tau = 0.2 + 0.9j
    direct = math.sqrt(2 * tau.imag) * (X @ G @ W) * np.exp(
        math.pi * 1j * (tau.real * (X @ G @ X) + 1j * tau.imag * (X @ M @ X)))
    assert abs(kn.phi_eval(L.space, tau, X, Z, W) - direct) < 1e-14


def test_period_independent_of_start_and_tolerance():
    L = lattice(CORPUS_A_GRAM)
    geo = geodesic_of((1, 0, -1), L, GroupSpec("congruence", 3))
    h = (0, F(1, 6), 0)
    a, ea = kn.geodesic_period(L, h, F(1, 12), geo)
    b, eb = kn.geodesic_period(L, h, F(1, 12), geo, start=0.7)
    c, ec = kn.geodesic_period(L, h, F(1, 12), geo, quad_tol=5e-9)
    assert abs(a - b) < 1e-6 and abs(a - c) <= ea + ec


def test_unrepresented_norm_has_zero_period():
    L = lattice(CORPUS_A_GRAM)
    geo = geodesic_of((1, 0, -1), L, GroupSpec("congruence", 3))
    val, _ = kn.geodesic_period(L, (0, F(1, 6), 0), F(1, 3), geo)
    assert abs(val) < 1e-8
