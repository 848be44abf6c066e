import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twospinor import gauge as G
from twospinor.optical import NullCovector
from twospinor.spinors import SpinorConnectionCoefficients

from strategies import real_vec, seeds

LEVI3 = np.zeros((3, 3, 3))
for (i, j, k), s in {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}.items():
    LEVI3[i, j, k] = s


def momenta():
    return real_vec(3, -3, 3).filter(lambda p: np.linalg.norm(p) > 0.1)


def test_su2_structure_constants_frozen():
    assert np.allclose(G.structure_constants(G.su2_basis()), LEVI3, atol=1e-15)
    assert np.allclose(G.structure_constants(G.u1_basis()), 0)
    for l in G.su2_basis():
        assert G.is_antihermitian(l) and abs(np.trace(l)) < 1e-15


def test_grid_validation():
    with pytest.raises(G.GridError):
        G.ConnectionField.zeros(2, 2)
    with pytest.raises(ValueError):
        G.ConnectionField(np.ones((4, 4, 4, 4, 4, 2, 2)), 0.5)  # Hermitian, not anti-Hermitian
    with pytest.raises(ValueError):
        G.GaugeTransformField.constant(2 * np.eye(2), 4)
    with pytest.raises(G.GridError):
        G.gauge_transform(G.ConnectionField.zeros(4, 2), G.GaugeTransformField.constant(np.eye(2), 5))


def test_constant_noncommuting_connection_curvature_is_bracket(rng):
    a = G.random_antihermitian(rng, 2, (4,))
    N = 4
    alpha = G.ConnectionField(np.broadcast_to(a, (N, N, N, N, 4, 2, 2)).copy(), 2 * np.pi / N)
    F = G.curvature(alpha)
    for i in range(4):
        for j in range(4):
            assert np.allclose(F.F[0, 0, 0, 0, i, j], G.commutator(a[i], a[j]), atol=1e-15)
    assert F.antisymmetry_residual() == 0


def test_identity_transform_and_constant_conjugation(rng):
    alpha = G.random_smooth_connection(rng, 6, 2)
    same = G.gauge_transform(alpha, G.GaugeTransformField.constant(np.eye(2), 6))
    assert np.max(np.abs(same.alpha - alpha.alpha)) < 1e-15
    U = G.random_unitary(rng, 2)
    conj = G.gauge_transform(alpha, G.GaugeTransformField.constant(U, 6))
    assert np.allclose(conj.alpha, U @ alpha.alpha @ U.conj().T, atol=1e-14)
    assert G.gauge_drift(alpha, G.GaugeTransformField.constant(U, 6), "max") < 1e-12


def _pure_gauge_curvature(N, seed):
    rng = np.random.default_rng(seed)
    K = G.random_smooth_gauge(rng, N, 2)
    flat = G.gauge_transform(G.ConnectionField.zeros(N, 2), K)
    # the transformed zero connection is -(dK) K^-1
    dK = G.central_diff(K.K, 1, K.h)
    assert np.allclose(flat.alpha[..., 1, :, :], G.project_antihermitian(-dK @ K.K.conj().swapaxes(-1, -2)))
    a, h = flat.alpha, flat.h
    worst = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            f = G.central_diff(a[..., j, :, :], i, h) - G.central_diff(a[..., i, :, :], j, h)
            worst = max(worst, np.max(np.abs(f + G.commutator(a[..., i, :, :], a[..., j, :, :]))))
    return worst


def test_pure_gauge_stays_flat_to_second_order():
    e1, e2 = _pure_gauge_curvature(12, 3), _pure_gauge_curvature(24, 3)
    assert e2 < e1 / 3  # h^2 gives 4


def test_abelian_pure_gauge_is_flat():
    X, h = G.grid_coordinates(12)
    f = np.sin(X[..., 0] + X[..., 2]) + 0.5 * np.cos(X[..., 1] - X[..., 3])
    alpha = G.abelian_pure_gauge(f, h, 1j * np.eye(1))
    assert np.max(np.abs(G.curvature(alpha).F)) < 1e-12


def test_curvature_covariance_second_order():
    errs = []
    for N in (8, 16):
        rng = np.random.default_rng(11)
        alpha = G.random_smooth_connection(rng, N, 2)
        K = G.random_smooth_gauge(rng, N, 2)
        F = G.curvature(alpha).F
        Fp = G.curvature(G.gauge_transform(alpha, K)).F
        Kx = K.K[..., None, None, :, :]
        errs.append(np.max(np.abs(Fp - Kx @ F @ Kx.conj().swapaxes(-1, -2))))
    assert np.log2(errs[0] / errs[1]) > 1.5


def test_invariant_scalar_zero_and_memory_light_path(rng):
    assert np.all(G.invariant_scalar(G.curvature(G.ConnectionField.zeros(4, 2))) == 0)
    alpha = G.random_smooth_connection(rng, 6, 2)
    assert np.allclose(G.invariant_scalar_of(alpha), G.invariant_scalar(G.curvature(alpha)), atol=1e-13)


def test_refinement_slope_small():
    hs, errs, slope = G.refinement_study(5, sizes=(12, 16, 20))
    assert all(e1 > e2 for e1, e2 in zip(errs, errs[1:]))
    assert 1.5 < slope < 2.5


@given(seeds)
def test_barwedge_commutator_vs_structure_constants(seed):
    rng = np.random.default_rng(seed)
    for basis in (G.su2_basis(), G.u1_basis()):
        c = G.structure_constants(basis)
        d = len(basis)
        ac, bc = rng.standard_normal((4, d)), rng.standard_normal((4, d))
        A = np.einsum("aj,jkl->akl", ac, basis)
        B = np.einsum("aj,jkl->akl", bc, basis)
        lhs = G.barwedge(A, B)
        rhs = np.einsum("abi,ikl->abkl", G.barwedge_structure(ac, bc, c), basis)
        assert np.max(np.abs(lhs - rhs)) < 1e-13
        assert np.max(np.abs(G.barwedge(A, A) + np.swapaxes(G.barwedge(A, A), 0, 1))) == 0
    assert np.all(G.barwedge_structure(ac, bc, G.structure_constants(G.u1_basis())) == 0) or d == 1


def test_barwedge_shape_errors():
    with pytest.raises(ValueError):
        G.barwedge(np.zeros((4, 2, 2)), np.zeros((3, 2, 2)))


def _class(k, rng, basis):
    coeff = rng.standard_normal((4, len(basis)))
    return G.RadiativeGaugeClass(k, G.horizontal_projection(k, np.einsum("aj,jkl->akl", coeff, basis)))


@given(momenta(), seeds)
def test_abelian_rho_is_class_function(p, seed):
    rng = np.random.default_rng(seed)
    k = NullCovector.from_momentum(p)
    kc = _class(k, rng, G.u1_basis())
    assert G.rho_shift_discrepancy(kc, 1j * rng.standard_normal((1, 1))) < 1e-13 * max(1, np.linalg.norm(p)) ** 2


def test_rho_of_zero_and_nonabelian_measurement(rng):
    k = NullCovector.from_momentum([0, 0, 1.0])
    assert np.all(G.rho(G.RadiativeGaugeClass(k, np.zeros((4, 2, 2)))) == 0)
    kc = _class(k, rng, G.su2_basis())
    d = G.rho_shift_discrepancy(kc, G.su2_basis()[0])
    assert np.isfinite(d) and d >= 0


def test_radiative_class_requires_horizontality():
    k = NullCovector.from_momentum([0, 0, 1.0])
    with pytest.raises(ValueError):
        G.RadiativeGaugeClass(k, np.einsum("a,ij->aij", [1.0, 0, 0, 0], G.su2_basis()[0]))


@given(momenta(), seeds)
def test_class_equivalence(p, seed):
    rng = np.random.default_rng(seed)
    k = NullCovector.from_momentum(p)
    c1 = _class(k, rng, G.su2_basis())
    chi = G.random_antihermitian(rng, 2)
    assert G.class_equivalent(c1, c1)
    assert G.class_equivalent(c1, c1.shifted(chi))
    pert = G.horizontal_projection(k, np.einsum("a,ij->aij", [0, 1.0, -1.0, 0.5], chi))
    if np.max(np.abs(pert - np.einsum("a,ij->aij", k.k, np.einsum("a,aij->ij", k.k, pert) / (k.k @ k.k)))) > 1e-3:
        assert not G.class_equivalent(c1, G.RadiativeGaugeClass(k, c1.alpha + pert))


def test_dilaton_em_closed_form():
    X, h = G.grid_coordinates(12)
    f = np.sin(X[..., 0]) * np.cos(X[..., 3]) + 0.3 * np.sin(X[..., 1] + X[..., 2])
    df = np.stack([G.central_diff(f, a, h) for a in range(4)], axis=-1)
    gamma = 1j * df[..., None, None] * np.eye(2)
    dec = G.decompose_internal_dilaton_em(SpinorConnectionCoefficients(gamma), h)
    assert np.all(dec.G == 0) and np.allclose(dec.Y, df) and np.allclose(dec.Gamma_tilde, 0)
    assert np.max(np.abs(dec.F_em)) < 1e-12 and dec.flatness_residual == 0


def test_dilaton_exact_G_is_flat():
    X, h = G.grid_coordinates(12)
    g = np.cos(X[..., 0] + X[..., 1])
    dg = np.stack([G.central_diff(g, a, h) for a in range(4)], axis=-1)
    dec = G.decompose_internal_dilaton_em(SpinorConnectionCoefficients(dg[..., None, None] * np.eye(2)), h)
    assert dec.flatness_residual < 1e-12


@settings(max_examples=10)
@given(seeds)
def test_serialization_round_trips(seed):
    rng = np.random.default_rng(seed)
    alpha = G.random_smooth_connection(rng, 3, 2)
    K = G.random_smooth_gauge(rng, 3, 2)
    F = G.curvature(alpha)
    for field, attr in ((alpha, "alpha"), (K, "K"), (F, "F")):
        for back in (G.from_bytes(G.to_bytes(field)), G.from_json(G.to_json(field))):
            assert type(back) is type(field) and back.h == field.h
            assert np.array_equal(getattr(back, attr), getattr(field, attr))


def test_binary_layout_and_errors():
    alpha = G.ConnectionField.zeros(3, 1, h=0.25)
    blob = G.to_bytes(alpha)
    assert blob[:4] == b"TSGF"
    assert len(blob) == G._HEADER.size + 3**4 * 4 * 16
    with pytest.raises(ValueError):
        G.from_bytes(b"XXXX" + blob[4:])
    with pytest.raises(ValueError):
        G.from_bytes(blob[:-16])
    with pytest.raises(TypeError):
        G.to_bytes(np.zeros(3))
