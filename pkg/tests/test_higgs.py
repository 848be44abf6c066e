import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twospinor import higgs as H

from strategies import seeds

SHAPES = st.sampled_from([(1, 2), (2, 3), (1, 1), (2, 2), (3, 6), (2, 5)])


def spaces_for(shape, rng, metric=True):
    nr, nl = shape
    if not metric:
        return H.InternalSpaces(nr, nl)
    return H.InternalSpaces(nr, nl, H.random_metric(rng, nr), H.random_metric(rng, nl))


def test_electroweak_shape():
    sp = H.InternalSpaces(1, 2)
    vac = H.HiggsVacuum(np.array([[0.0], [1.0]]), 1.0, sp)
    assert vac.contraction() == pytest.approx(1.0)
    P, Pp = H.split_FL(vac)
    assert np.allclose(P, np.diag([0, 1])) and np.allclose(Pp, np.diag([1, 0]))
    assert H.block_dimensions(vac) == {"prime": 1, "plus": 2, "perp": 1}


def test_vacuum_validation():
    sp = H.InternalSpaces(1, 2)
    with pytest.raises(ValueError):
        H.HiggsVacuum(np.array([[0.0], [2.0]]), 1.0, sp)  # not isometric for mu = 1
    with pytest.raises(ValueError):
        H.HiggsVacuum(np.zeros((2, 1)), 1.0, sp)
    with pytest.raises(ValueError):
        H.make_vacuum(H.InternalSpaces(3, 2), 1.0, 0)
    with pytest.raises(ValueError):
        H.InternalSpaces(2, 2, h_R=-np.eye(2))


@given(SHAPES, seeds, st.floats(0.2, 5))
def test_constructed_vacua(shape, seed, mu):
    rng = np.random.default_rng(seed)
    sp = spaces_for(shape, rng)
    vac = H.make_vacuum(sp, mu, seed)
    assert vac.isometry_residual() < 1e-12 * max(1, mu**2)
    assert vac.contraction() == pytest.approx(mu**2, rel=1e-12)
    P, Pp = H.split_FL(vac)
    assert np.allclose(P @ P, P, atol=1e-12) and np.allclose(P @ Pp, 0, atol=1e-12)
    assert np.allclose(P @ vac.H0, vac.H0, atol=1e-12 * mu)
    # h_L-orthogonality of the splitting
    assert np.allclose(P.conj().T @ sp.h_L @ Pp, 0, atol=1e-12)


@given(SHAPES, seeds)
def test_random_vacua_unitarily_related(shape, seed):
    rng = np.random.default_rng(seed)
    sp = spaces_for(shape, rng)
    v1, v2 = H.make_vacuum(sp, 1.3, seed), H.make_vacuum(sp, 1.3, seed + 1)
    U = H.relating_unitary(v1, v2)
    assert np.allclose(U @ v1.H0, v2.H0, atol=1e-11)
    assert np.allclose(U.conj().T @ sp.h_L @ U, sp.h_L, atol=1e-11)


@given(SHAPES, seeds)
def test_lie_split_adjoint_and_direct_sum(shape, seed):
    rng = np.random.default_rng(seed)
    sp = spaces_for(shape, rng)
    vac = H.make_vacuum(sp, 0.9, seed)
    xi = H.random_lie_element(rng, sp)
    dec = H.decompose_lie(xi, vac)
    assert H.adjoint_residual(dec, sp) < 1e-12
    assert np.max(np.abs(dec.recompose() - xi)) < 1e-13 * 10
    P, Pp = H.split_FL(vac)
    assert np.allclose(Pp @ dec.xi_prime, 0, atol=1e-12) and np.allclose(dec.xi_prime @ Pp, 0, atol=1e-12)
    assert np.allclose(dec.xi_plus @ Pp, 0, atol=1e-12) and np.allclose(P @ dec.xi_plus, 0, atol=1e-12)
    assert H.is_h_antihermitian(dec.xi_prime, sp, 1e-11) and H.is_h_antihermitian(dec.xi_perp, sp, 1e-11)


def test_block_diagonal_xi_has_no_off_blocks():
    sp = H.InternalSpaces(1, 2)
    vac = H.HiggsVacuum(np.array([[0.0], [1.0]]), 1.0, sp)
    dec = H.decompose_lie(np.diag([0.3j, -1.1j]), vac)
    assert np.all(dec.xi_plus == 0) and np.all(dec.xi_minus == 0)
    with pytest.raises(ValueError):
        H.decompose_lie(np.eye(2), vac)


@pytest.mark.parametrize("shape,dims", [((1, 2), (1, 2, 1)), ((2, 3), (4, 4, 1)), ((3, 6), (9, 18, 9))])
def test_block_dimensions(shape, dims, rng):
    vac = H.make_vacuum(spaces_for(shape, rng), 1.0, 7)
    d = H.block_dimensions(vac)
    assert (d["prime"], d["plus"], d["perp"]) == dims
    nr, nl = shape
    # xi^- is fixed by xi^+, so the three images exhaust u(n_L)
    assert d["prime"] + d["plus"] + d["perp"] == nl * nl


@given(SHAPES, seeds)
def test_matter_decomposition(shape, seed):
    rng = np.random.default_rng(seed)
    sp = spaces_for(shape, rng)
    vac = H.make_vacuum(sp, 1.7, seed)
    nr, nl = shape
    Psi = H.MatterMultiplet(rng.standard_normal((nr, 2)) + 0j, rng.standard_normal((nl, 2)) + 1j)
    dec = H.decompose_matter(Psi, vac)
    back = H.recompose_matter(dec, vac)
    assert np.max(np.abs(back.Psi_L - Psi.Psi_L)) < 1e-13 * 10
    assert np.array_equal(back.Psi_R, Psi.Psi_R)
    P, Pp = H.split_FL(vac)
    assert np.allclose(P @ Psi.Psi_L + Pp @ Psi.Psi_L, Psi.Psi_L, atol=1e-13)
    # an image-only left field has no nu part
    image = H.decompose_matter(H.MatterMultiplet(Psi.Psi_R, vac.H0 @ Psi.Psi_R), vac)
    assert np.max(np.abs(image.nu)) < 1e-12


def test_orthogonal_left_field_has_no_primed_part():
    sp = H.InternalSpaces(1, 2)
    vac = H.HiggsVacuum(np.array([[0.0], [1.0]]), 1.0, sp)
    dec = H.decompose_matter(H.MatterMultiplet(np.ones((1, 2)), np.array([[1.0, 2.0], [0, 0]])), vac)
    assert np.all(dec.psi_prime_R == 0)


@given(SHAPES, seeds, st.floats(0.1, 3), st.floats(0.2, 3))
def test_potential_value_and_stationarity(shape, seed, lam, mu):
    rng = np.random.default_rng(seed)
    vac = H.make_vacuum(spaces_for(shape, rng), mu, seed)
    assert H.higgs_potential(np.zeros_like(vac.H0), vac, lam) == 0
    assert H.higgs_potential(vac.H0, vac, lam) == pytest.approx(lam * mu**4, rel=1e-12)
    d1, d2 = H.radial_derivative(vac, lam)
    assert d1 / d2 == pytest.approx(4, rel=1e-3)  # O(step^2)
    assert abs((4 * d2 - d1) / 3) < 1e-10 * max(1, lam * mu**4)
    with pytest.raises(ValueError):
        H.higgs_potential(vac.H0, vac, 0.0)


def test_json_round_trip(rng):
    vac = H.make_vacuum(spaces_for((2, 3), rng), 1.1, 4)
    back = H.vacuum_from_json(H.vacuum_to_json(vac))
    assert np.array_equal(back.H0, vac.H0) and back.mu == vac.mu
    assert json.loads(H.vacuum_to_json(vac))["n_L"] == 3
