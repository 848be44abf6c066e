"""Null covectors, the optical quotient and photon polarisation frames.

Covectors are handled by their components ``beta_l`` in the dual Pauli
basis (lower Minkowski indices, metric ``diag(1, -1, -1, -1)``).  The 4D
orientation is ``tau^0 ^ tau^1 ^ tau^2 ^ tau^3``, i.e. ``eps_0123 = +1``.

For a null future-pointing ``k`` the optical space is
``B_k = {beta : g#(k, beta) = 0} / span(k)``.  Representatives are plain
4-vectors; all functions here are invariant under ``beta -> beta + c k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .spinors import ETA, ComplexHVector, TwoSpinor, null_factor

HORIZONTAL_RTOL = 1e-10


class NotHorizontal(ValueError):
    """``beta`` is not orthogonal to ``k``."""


def _levi_civita() -> np.ndarray:
    e = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        e[perm] = -1.0 if inv % 2 else 1.0
    return e


LEVI_CIVITA = _levi_civita()  # lower indices, eps_0123 = +1


def g_sharp(a, b) -> complex:
    """Contravariant metric on covectors (bilinear, no conjugation)."""
    return complex(np.asarray(a) @ ETA @ np.asarray(b))


def hvector_of(beta) -> ComplexHVector:
    """``beta#`` as an element of ``C (x) H``."""
    return ComplexHVector.from_components(ETA @ np.asarray(beta, dtype=complex))


def covector_of(x: ComplexHVector) -> np.ndarray:
    """Lower-index components of ``g(x, _)``."""
    return ETA @ x.components()


@dataclass(frozen=True, eq=False)
class NullCovector:
    k: np.ndarray

    def __post_init__(self):
        k = np.array(self.k, dtype=float).reshape(4)
        n2 = float(k @ k)
        if n2 == 0.0:
            raise ValueError("null covector must be nonzero")
        if abs(k @ ETA @ k) > 1e-10 * n2:
            raise ValueError("covector is not null")
        if k[0] <= 0:
            raise ValueError("covector is not future-pointing")
        k.setflags(write=False)
        object.__setattr__(self, "k", k)

    @classmethod
    def from_momentum(cls, p_perp) -> "NullCovector":
        """Null covector with contravariant components ``(|p|, p_perp)``."""
        p = np.asarray(p_perp, dtype=float).reshape(3)
        return cls(ETA @ np.concatenate([[np.linalg.norm(p)], p]))

    def vector(self) -> ComplexHVector:
        return hvector_of(self.k)


def null_factorize(k: NullCovector) -> TwoSpinor:
    """``kappa`` with ``k# = kappa (x) conj(kappa)``, unique up to a phase."""
    return null_factor(k.vector())


def _check_horizontal(k: NullCovector, beta) -> np.ndarray:
    beta = np.asarray(beta, dtype=complex).reshape(4)
    if abs(g_sharp(k.k, beta)) > HORIZONTAL_RTOL * np.linalg.norm(k.k) * max(np.linalg.norm(beta), 1e-300):
        raise NotHorizontal("beta is not orthogonal to k")
    return beta


def optical_metric(k: NullCovector, b1, b2) -> complex:
    """``g_B(b1, b2)``; the negative metric induced on ``B_k``."""
    b1 = _check_horizontal(k, b1)
    b2 = _check_horizontal(k, b2)
    return g_sharp(b1, b2)


def wedge(a, b) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    return np.outer(a, b) - np.outer(b, a)


def hodge4(F: np.ndarray) -> np.ndarray:
    """4D Hodge star of a covariant 2-form: ``(*F)_ab = eps_abcd F^cd / 2``."""
    F_up = ETA @ F @ ETA
    return 0.5 * np.einsum("abcd,cd->ab", LEVI_CIVITA, F_up)


def _wedge_k_matrix(k) -> np.ndarray:
    # linear map gamma -> vec(k ^ gamma), shape (16, 4)
    cols = [wedge(k, e).reshape(16) for e in np.eye(4)]
    return np.array(cols).T


def hodge_B(k: NullCovector, beta) -> np.ndarray:
    """``*_B beta`` defined by ``*(k ^ beta) = -k ^ (*_B beta)``.

    Returns the representative orthogonal (Euclidean, in components) to ``k``.
    """
    beta = _check_horizontal(k, beta)
    rhs = -hodge4(wedge(k.k, beta)).reshape(16)
    A = _wedge_k_matrix(k.k).astype(complex)
    gam, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    return canonical_rep(k, gam)


def canonical_rep(k: NullCovector, beta) -> np.ndarray:
    """Representative of ``beta mod k`` with no component along ``k``."""
    beta = np.asarray(beta, dtype=complex)
    kk = k.k
    return beta - kk * (kk @ beta) / (kk @ kk)


def equal_mod_k(k: NullCovector, b1, b2, atol: float = 1e-10) -> bool:
    d = canonical_rep(k, np.asarray(b1) - np.asarray(b2))
    scale = max(1.0, np.linalg.norm(b1), np.linalg.norm(b2))
    return bool(np.linalg.norm(d) <= atol * scale)


def selfdual_split(k: NullCovector, beta):
    """Eigen-split of ``-i *_B`` into ``(beta_plus, beta_minus)`` (eigenvalues +1, -1)."""
    beta = canonical_rep(k, _check_horizontal(k, beta))
    sb = -1j * hodge_B(k, beta)
    plus, minus = 0.5 * (beta + sb), 0.5 * (beta - sb)
    # a part at round-off level is zero; left as is it would fail the horizontality check
    floor = 1e-14 * np.linalg.norm(beta)
    if np.linalg.norm(plus) <= floor:
        plus = np.zeros_like(plus)
    if np.linalg.norm(minus) <= floor:
        minus = np.zeros_like(minus)
    return plus, minus


# -i *_B eigenvalue carried by representatives of the form kappa (x) conj(lambda)
# under the orientation eps_0123 = +1.  Fixed by the two-path check in the tests.
KAPPA_LEFT_EIGENVALUE = -1


@dataclass(frozen=True)
class SpinorCharacter:
    left: np.ndarray  # covector of the kappa (x) conj(lambda) part
    right: np.ndarray  # covector of the lambda (x) conj(kappa) part
    kind: str  # "left" | "right" | "mixed" | "zero"


def two_spinor_character(k: NullCovector, beta, atol: float = 1e-10) -> SpinorCharacter:
    """Classify ``beta mod k`` by its two-spinor form.

    With a spinor frame ``(kappa, omega)``, ``eps(kappa, omega) = 1``, any
    horizontal ``beta#`` is ``c_L kappa (x) conj(omega) + c_R omega (x) conj(kappa)``
    modulo ``k#``.
    """
    beta = _check_horizontal(k, beta)
    kappa = null_factorize(k).c
    omega = np.array([-kappa[1], kappa[0]]).conj() / (abs(kappa[0]) ** 2 + abs(kappa[1]) ** 2)
    # eps(kappa, omega) = kappa_1 omega_2 - kappa_2 omega_1 = 1
    Bm = np.column_stack([kappa, omega])
    X = hvector_of(beta).m
    C = np.linalg.solve(Bm, X) @ np.linalg.inv(Bm.conj().T)
    left = covector_of(ComplexHVector(C[0, 1] * np.outer(kappa, omega.conj())))
    right = covector_of(ComplexHVector(C[1, 0] * np.outer(omega, kappa.conj())))
    scale = max(np.linalg.norm(beta), 1e-300)
    has_l = np.linalg.norm(left) > atol * scale
    has_r = np.linalg.norm(right) > atol * scale
    kind = {(True, True): "mixed", (True, False): "left", (False, True): "right", (False, False): "zero"}[
        (bool(has_l), bool(has_r))
    ]
    return SpinorCharacter(left, right, kind)


@dataclass(frozen=True, eq=False)
class PolarizationFrame:
    """Photon modes at ``k`` for a given observer, as lower-index covectors."""

    b_plus: np.ndarray
    b_minus: np.ndarray
    b0: np.ndarray
    b3: np.ndarray
    tau: np.ndarray  # rows: adapted Pauli frame tau_0..tau_3 (contravariant components)

    def as_matrix(self) -> np.ndarray:
        return np.array([self.b_plus, self.b_minus, self.b0, self.b3])


def adapted_frame(direction, observer=None) -> np.ndarray:
    """Orthonormal, positively oriented frame with ``tau_0 = observer`` and
    ``tau_3`` along the spatial part of ``direction`` seen by the observer.

    Returns contravariant components, one frame vector per row.
    """
    t = np.array([1.0, 0, 0, 0]) if observer is None else np.asarray(observer, dtype=float)
    if not np.isclose(t @ ETA @ t, 1.0, atol=1e-10) or t[0] <= 0:
        raise ValueError("observer axis must be unit future timelike")
    d = np.asarray(direction, dtype=float)
    n = d - (t @ ETA @ d) * t
    nn = -(n @ ETA @ n)
    if nn <= 1e-24:
        # no spatial direction: fall back to the observer's third axis
        n = np.array([0, 0, 0, 1.0]) - (t @ ETA @ np.array([0, 0, 0, 1.0])) * t
        nn = -(n @ ETA @ n)
    e3 = n / np.sqrt(nn)
    basis = [t, e3]
    extra = []
    for cand in np.eye(4)[1:]:
        v = cand.copy()
        for b in basis + extra:
            v = v - (b @ ETA @ v) / (b @ ETA @ b) * b
        nv = -(v @ ETA @ v)
        if nv > 1e-8:
            extra.append(v / np.sqrt(nv))
        if len(extra) == 2:
            break
    e1, e2 = extra
    frame = np.array([t, e1, e2, e3])
    if np.einsum("abcd,a,b,c,d->", LEVI_CIVITA, *frame) < 0:
        frame[2] = -frame[2]
    return frame


def dual_frame(frame: np.ndarray) -> np.ndarray:
    """Lower-index components of the dual frame ``tau^l = eta^{ll} g(tau_l, _)``."""
    return np.diag(ETA)[:, None] * (frame @ ETA)


def polarization_frame(k: NullCovector, observer=None) -> PolarizationFrame:
    """Modes ``b+- = (tau^1 +- i tau^2)/sqrt2``, ``b0 = tau^0``, ``b3 = (tau^0 - tau^3)/sqrt2``.

    ``tau^l`` is the dual of a Pauli frame with ``tau_0`` the observer and
    ``k#`` proportional to ``tau_0 + tau_3``.
    """
    frame = adapted_frame(ETA @ k.k, observer)
    dual = dual_frame(frame)
    s = 1 / np.sqrt(2.0)
    return PolarizationFrame(
        b_plus=s * (dual[1] + 1j * dual[2]),
        b_minus=s * (dual[1] - 1j * dual[2]),
        b0=dual[0].astype(complex),
        b3=(s * (dual[0] - dual[3])).astype(complex),
        tau=frame,
    )


def transverse_modes(p_perp, mass: float = 0.0, observer=None):
    """The two transverse modes ``(b+, b-)`` for a momentum of any mass.

    For ``mass = 0`` these coincide with :func:`polarization_frame`.
    """
    p = np.asarray(p_perp, dtype=float).reshape(3)
    if mass == 0.0:
        pf = polarization_frame(NullCovector.from_momentum(p), observer)
        return pf.b_plus, pf.b_minus
    p0 = np.sqrt(mass * mass + p @ p)
    frame = adapted_frame(np.concatenate([[p0], p]), observer)
    dual = dual_frame(frame)
    s = 1 / np.sqrt(2.0)
    return s * (dual[1] + 1j * dual[2]), s * (dual[1] - 1j * dual[2])
