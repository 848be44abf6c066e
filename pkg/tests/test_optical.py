import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from twospinor import optical as O
from twospinor.spinors import ETA, ComplexHVector, TwoSpinor

from strategies import complex_vec, real_vec

KZ = O.NullCovector.from_momentum([0, 0, 1.0])
TAU1 = np.array([0, 1.0, 0, 0])  # lower components of the dual frame element tau^1
TAU2 = np.array([0, 0, 1.0, 0])


def momenta():
    return real_vec(3, -3, 3).filter(lambda p: np.linalg.norm(p) > 0.1)


def horizontal(k, beta):
    n = np.array([1.0, 0, 0, 0])
    out = beta - O.g_sharp(k.k, beta) / O.g_sharp(k.k, n) * n
    assume(np.linalg.norm(O.canonical_rep(k, out)) > 1e-3)
    return out


def test_null_factorize_along_z():
    kappa = O.null_factorize(KZ).c
    assert abs(kappa[1]) < 1e-15 and kappa[0] == pytest.approx(2 ** 0.25)
    with pytest.raises(ValueError):
        O.NullCovector([0, 0, 0, 0])
    with pytest.raises(ValueError):
        O.NullCovector([1, 0, 0, 0])


@given(complex_vec(2))
def test_null_factorize_round_trip(kap):
    if np.linalg.norm(kap) < 1e-2:
        return
    x = ComplexHVector.monomial(TwoSpinor(kap), TwoSpinor(kap))
    k = O.NullCovector(O.covector_of(x).real)
    back = O.null_factorize(k).c
    phase = back @ kap.conj() / (kap @ kap.conj())
    assert abs(abs(phase) - 1) < 1e-10
    assert np.allclose(back, phase * kap, atol=1e-10 * np.linalg.norm(kap))


def test_optical_metric_examples():
    assert O.optical_metric(KZ, TAU1, TAU1) == pytest.approx(-1)
    assert O.optical_metric(KZ, TAU1, TAU2) == 0
    b = TAU1 + 0.3 * TAU2
    assert O.optical_metric(KZ, b + 3 * KZ.k, b) == pytest.approx(O.optical_metric(KZ, b, b))
    with pytest.raises(O.NotHorizontal):
        O.optical_metric(KZ, [1.0, 0, 0, 0], TAU1)


def test_hodge_B_on_frame():
    star1 = O.hodge_B(KZ, TAU1)
    assert O.equal_mod_k(KZ, star1, TAU2) or O.equal_mod_k(KZ, star1, -TAU2)
    assert O.equal_mod_k(KZ, O.hodge_B(KZ, star1), -TAU1)


@given(momenta(), complex_vec(4), complex_vec(4))
def test_hodge_B_involution_and_isometry(p, a, b):
    k = O.NullCovector.from_momentum(p)
    a, b = horizontal(k, a), horizontal(k, b)
    sa, sb = O.hodge_B(k, a), O.hodge_B(k, b)
    scale = max(1.0, np.linalg.norm(a)) * max(1.0, np.linalg.norm(b))
    assert O.equal_mod_k(k, O.hodge_B(k, sa), -a)
    assert abs(O.optical_metric(k, sa, sb) - O.optical_metric(k, a, b)) < 1e-10 * scale


@given(momenta(), complex_vec(4), st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False))
def test_split_complete_eigen_and_quotient(p, beta, c):
    k = O.NullCovector.from_momentum(p)
    beta = horizontal(k, beta)
    bp, bm = O.selfdual_split(k, beta)
    scale = max(1.0, np.linalg.norm(beta))
    assert O.equal_mod_k(k, bp + bm, beta)
    assert np.max(np.abs(O.canonical_rep(k, -1j * O.hodge_B(k, bp) - bp))) < 1e-12 * scale
    assert np.max(np.abs(O.canonical_rep(k, -1j * O.hodge_B(k, bm) + bm))) < 1e-12 * scale
    sp, sm = O.selfdual_split(k, beta + c * k.k)
    assert np.max(np.abs(sp - bp)) < 1e-12 * scale * max(1, abs(c))
    assert np.max(np.abs(sm - bm)) < 1e-12 * scale * max(1, abs(c))


def test_split_examples():
    bplus = (TAU1 + 1j * TAU2) / np.sqrt(2)
    p, m = O.selfdual_split(KZ, bplus)
    assert np.linalg.norm(m) < 1e-15 or np.linalg.norm(p) < 1e-15
    beta = TAU1 - 0.4 * TAU2
    p, m = O.selfdual_split(KZ, beta)
    assert O.equal_mod_k(KZ, m, np.conj(p))
    p, m = O.selfdual_split(KZ, KZ.k)
    assert np.allclose(p, 0) and np.allclose(m, 0)


@given(momenta(), complex_vec(2).filter(lambda v: np.linalg.norm(v) > 1e-3))
def test_character_matches_hodge(p, mu):
    k = O.NullCovector.from_momentum(p)
    kappa = O.null_factorize(k)
    left = O.covector_of(ComplexHVector.monomial(kappa, TwoSpinor(mu)))
    right = O.covector_of(ComplexHVector.monomial(TwoSpinor(mu), kappa))
    if O.two_spinor_character(k, left).kind == "zero":
        return  # mu parallel to kappa
    assert O.two_spinor_character(k, left).kind == "left"
    assert O.two_spinor_character(k, right).kind == "right"
    assert O.two_spinor_character(k, left + right).kind == "mixed"
    lp, lm = O.selfdual_split(k, left)
    # left-type elements sit in the eigenspace KAPPA_LEFT_EIGENVALUE of -i *_B
    other = lp if O.KAPPA_LEFT_EIGENVALUE == -1 else lm
    assert np.linalg.norm(other) < 1e-10 * np.linalg.norm(left)


def test_character_of_k_is_zero():
    assert O.two_spinor_character(KZ, KZ.k).kind == "zero"


def test_polarization_frame_literal():
    pf = O.polarization_frame(KZ)
    s = 1 / np.sqrt(2)
    assert np.allclose(pf.b_plus, s * (TAU1 + 1j * TAU2))
    assert np.allclose(pf.b_minus, s * (TAU1 - 1j * TAU2))
    assert np.allclose(pf.b0, [1, 0, 0, 0])
    assert np.allclose(pf.b3, s * np.array([1, 0, 0, -1.0]))


@given(momenta())
def test_polarization_frame_transverse_and_spanning(p):
    k = O.NullCovector.from_momentum(p)
    pf = O.polarization_frame(k)
    assert abs(O.g_sharp(k.k, pf.b_plus)) < 1e-12 * np.linalg.norm(k.k)
    assert abs(O.g_sharp(k.k, pf.b_minus)) < 1e-12 * np.linalg.norm(k.k)
    assert np.linalg.matrix_rank(pf.as_matrix(), tol=1e-10) == 4
    assert np.allclose(O.canonical_rep(k, pf.b3 / np.linalg.norm(pf.b3)), O.canonical_rep(k, k.k / np.linalg.norm(k.k)))\
        or abs(O.g_sharp(pf.b3, pf.b3)) < 1e-12  # b3 is null, along k


@given(momenta(), st.floats(0.1, 3))
def test_massive_transverse_modes(p, m):
    bp, bm = O.transverse_modes(p, m)
    pvec = np.concatenate([[np.sqrt(m * m + p @ p)], p])
    assert abs(bp @ pvec) < 1e-10 * np.linalg.norm(pvec) and abs(bm @ pvec) < 1e-10 * np.linalg.norm(pvec)
    assert O.g_sharp(bp, np.conj(bp)) == pytest.approx(-1)


@given(momenta(), complex_vec(4))
def test_radiative_template_is_null(p, b):
    k = O.NullCovector.from_momentum(p)
    b = horizontal(k, b)
    F = O.wedge(k.k, b)
    Fup = ETA @ F @ ETA
    scale = (np.linalg.norm(k.k) * max(1.0, np.linalg.norm(b))) ** 2
    assert abs(np.sum(F * Fup)) < 1e-10 * scale
    assert abs(np.sum(O.hodge4(F) * Fup)) < 1e-10 * scale
