"""Fiberwise two-spinor algebra.

Everything here lives on a single fiber: a 2-dimensional complex space ``U``
with a fixed basis ``(zeta_1, zeta_2)``. From it we build the normalised
antisymmetric form ``eps``, the Lorentz metric ``g`` on ``U (x) conj(U)``,
the Pauli basis, the Clifford map into ``End(W)`` with ``W = U + conj(U)*``,
and the Dirac adjunction.

Index conventions
-----------------
* ``eps(u, r) = u^A eps_AB r^B`` with ``eps_12 = exp(i theta)``.
* ``flat(u)_B = u^A eps_AB``; ``sharp(lam)^A = lam_B eps^BA`` where
  ``eps^AB eps_CB = delta^A_C``.  With these choices ``sharp(flat(u)) = -u``.
  Every public quantity below is built so that this sign drops out.
* Elements of ``U (x) conj(U)`` are 2x2 matrices ``X[A, Adot]``.  Covectors
  in ``U* (x) conj(U)*`` are 2x2 matrices with lower indices.
* Dirac spinors are stored by their components in the Weyl basis
  ``(zeta_1, zeta_2, -conj(zeta)^1, -conj(zeta)^2)``, so a pair ``(u, lbar)``
  has Weyl components ``(u^1, u^2, -lbar_1, -lbar_2)``.

Length units are tracked as rational exponents (``scale_exp``) with the
numerical scale fixed to one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

ATOL = 1e-12

Exponent = Union[int, Fraction]

SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# Minkowski metric in the Pauli frame.
ETA = np.diag([1.0, -1.0, -1.0, -1.0])

_RICCI = np.array([[0, 1], [-1, 0]], dtype=complex)
# Weyl-component layout <-> (u, lbar) layout; an involution.
_WEYL_SIGN = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)


class ScaleMismatch(ValueError):
    """Raised when quantities with different length-unit exponents are combined."""


def _frac(x: Exponent) -> Fraction:
    return Fraction(x)


@dataclass(frozen=True)
class ScaledValue:
    """A complex number tagged with a power of the length-unit space."""

    value: complex
    scale_exp: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "scale_exp", _frac(self.scale_exp))

    def __mul__(self, other):
        if isinstance(other, ScaledValue):
            return ScaledValue(self.value * other.value, self.scale_exp + other.scale_exp)
        return ScaledValue(self.value * other, self.scale_exp)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, ScaledValue):
            other = ScaledValue(other)
        if other.scale_exp != self.scale_exp:
            raise ScaleMismatch(f"cannot add L^{self.scale_exp} and L^{other.scale_exp}")
        return ScaledValue(self.value + other.value, self.scale_exp)

    def __neg__(self):
        return ScaledValue(-self.value, self.scale_exp)

    def __sub__(self, other):
        return self + (-other)


# --------------------------------------------------------------------------- #
#                              spinor variants                                #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class _Spinor:
    c: np.ndarray
    scale_exp: Fraction = Fraction(0)

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex).reshape(2)
        if not np.all(np.isfinite(c)):
            raise ValueError("spinor components must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "scale_exp", _frac(self.scale_exp))

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if other.scale_exp != self.scale_exp:
            raise ScaleMismatch("spinor scale exponents differ")
        return type(self)(self.c + other.c, self.scale_exp)

    def __mul__(self, z):
        return type(self)(self.c * z, self.scale_exp)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1


class TwoSpinor(_Spinor):
    """Element of ``U`` (contravariant components ``u^A``)."""

    def conj(self) -> "ConjSpinor":
        return ConjSpinor(np.conj(self.c), self.scale_exp)


class CoSpinor(_Spinor):
    """Element of ``U*`` (components ``lam_A``)."""

    def conj(self) -> "ConjCoSpinor":
        return ConjCoSpinor(np.conj(self.c), self.scale_exp)


class ConjSpinor(_Spinor):
    """Element of ``conj(U)``."""

    def conj(self) -> TwoSpinor:
        return TwoSpinor(np.conj(self.c), self.scale_exp)


class ConjCoSpinor(_Spinor):
    """Element of ``conj(U)*``."""

    def conj(self) -> CoSpinor:
        return CoSpinor(np.conj(self.c), self.scale_exp)


def pair(lam, u) -> complex:
    """Duality pairing ``<lam, u>`` between a covariant and a contravariant spinor."""
    return complex(np.dot(lam.c, u.c))


# --------------------------------------------------------------------------- #
#                                  epsilon                                    #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class EpsilonForm:
    """Normalised antisymmetric form on ``U``, fixed up to a unit phase."""

    phase: complex = 1.0 + 0j

    def __post_init__(self):
        if not np.isclose(abs(self.phase), 1.0, atol=1e-14, rtol=0):
            raise ValueError("epsilon phase must have unit modulus")
        object.__setattr__(self, "phase", complex(self.phase))

    @property
    def matrix(self) -> np.ndarray:
        """``eps_AB``."""
        return self.phase * _RICCI

    @property
    def bar_matrix(self) -> np.ndarray:
        """``conj(eps)_{Adot Bdot}``."""
        return np.conj(self.phase) * _RICCI

    @property
    def inverse(self) -> np.ndarray:
        """``eps^AB`` defined by ``eps^AB eps_CB = delta^A_C``."""
        return np.linalg.inv(self.matrix.T)

    def __call__(self, u: TwoSpinor, r: TwoSpinor) -> complex:
        return complex(u.c @ self.matrix @ r.c)


def make_epsilon(theta: float = 0.0) -> EpsilonForm:
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    return EpsilonForm(np.exp(1j * theta))


DEFAULT_EPS = make_epsilon(0.0)


def _eps_for(spinor, eps: EpsilonForm) -> np.ndarray:
    if isinstance(spinor, (ConjSpinor, ConjCoSpinor)):
        return eps.bar_matrix
    return eps.matrix


def flat(eps: EpsilonForm, u):
    """``u -> eps(u, _)``; accepts ``TwoSpinor`` or ``ConjSpinor``."""
    e = _eps_for(u, eps)
    out = CoSpinor if isinstance(u, TwoSpinor) else ConjCoSpinor
    if not isinstance(u, (TwoSpinor, ConjSpinor)):
        raise TypeError("flat expects a contravariant spinor")
    return out(e.T @ u.c, u.scale_exp)


def sharp(eps: EpsilonForm, lam):
    """Raise an index: ``lam^A = lam_B eps^BA``. ``sharp(flat(u)) == -u``."""
    if not isinstance(lam, (CoSpinor, ConjCoSpinor)):
        raise TypeError("sharp expects a covariant spinor")
    e = _eps_for(lam, eps)
    out = TwoSpinor if isinstance(lam, CoSpinor) else ConjSpinor
    return out(np.linalg.solve(e, lam.c), lam.scale_exp)


# --------------------------------------------------------------------------- #
#                           U (x) conj(U) and metric                          #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class ComplexHVector:
    """Element of ``C (x) H = U (x) conj(U)`` as the matrix ``m[A, Adot]``."""

    m: np.ndarray
    scale_exp: Fraction = Fraction(0)

    def __post_init__(self):
        m = np.array(self.m, dtype=complex).reshape(2, 2)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "scale_exp", _frac(self.scale_exp))

    @classmethod
    def from_components(cls, x, scale_exp: Exponent = 0) -> "ComplexHVector":
        """Build ``sum_l x^l tau_l`` from contravariant Pauli-frame components."""
        x = np.asarray(x, dtype=complex).reshape(4)
        return cls(np.einsum("l,lab->ab", x, PAULI_TAU), scale_exp)

    @classmethod
    def monomial(cls, r: TwoSpinor, s: TwoSpinor) -> "ComplexHVector":
        """``r (x) conj(s)``."""
        return cls(np.outer(r.c, np.conj(s.c)), r.scale_exp + s.scale_exp)

    def components(self) -> np.ndarray:
        """Contravariant components ``x^l`` in the Pauli basis."""
        return np.einsum("lba,ab->l", PAULI_TAU, self.m)

    def is_hermitian(self, atol: float = ATOL) -> bool:
        return bool(np.allclose(self.m, self.m.conj().T, atol=atol, rtol=0))

    def hconj(self) -> "ComplexHVector":
        """Hermitian transposition, the real structure of ``U (x) conj(U)``."""
        return ComplexHVector(self.m.conj().T, self.scale_exp)

    def __add__(self, other):
        if not isinstance(other, ComplexHVector):
            return NotImplemented
        if other.scale_exp != self.scale_exp:
            raise ScaleMismatch("H-vector scale exponents differ")
        return ComplexHVector(self.m + other.m, self.scale_exp)

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, z):
        return ComplexHVector(self.m * z, self.scale_exp)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.linalg.norm(self.m))


PAULI_TAU = SIGMA / np.sqrt(2.0)


def pauli_basis() -> list[ComplexHVector]:
    """The Pauli basis ``tau_l = sigma_l / sqrt(2)`` of ``H``."""
    return [ComplexHVector(t) for t in PAULI_TAU]


def _metric_tensor(eps: EpsilonForm) -> np.ndarray:
    # G[a, b, c, d] = eps_ac conj(eps)_bd
    return np.einsum("ac,bd->abcd", eps.matrix, eps.bar_matrix)


def metric_g(x: ComplexHVector, y: ComplexHVector, eps: EpsilonForm = DEFAULT_EPS) -> complex:
    """``g(u (x) vbar, r (x) sbar) = eps(u, r) conj(eps)(vbar, sbar)``, bilinear."""
    if x.scale_exp != y.scale_exp:
        raise ScaleMismatch("metric_g needs equal scale exponents")
    return complex(np.einsum("ab,cd,abcd->", x.m, y.m, _metric_tensor(eps)))


def lower(x: ComplexHVector, eps: EpsilonForm = DEFAULT_EPS) -> np.ndarray:
    """``x -> g(x, _)`` as a lower-index 2x2 matrix."""
    return eps.matrix.T @ x.m @ eps.bar_matrix


def raise_index(k: np.ndarray, eps: EpsilonForm = DEFAULT_EPS) -> ComplexHVector:
    """Inverse of :func:`lower`."""
    k = np.asarray(k, dtype=complex)
    return ComplexHVector(np.linalg.solve(eps.matrix.T, k) @ np.linalg.inv(eps.bar_matrix))


def null_factor(x: ComplexHVector, atol: float = ATOL) -> TwoSpinor:
    """Recover ``u`` with ``x = u (x) conj(u)`` for a future-pointing null ``x``.

    The factor is unique up to a phase; the returned one has its largest
    component real and positive.
    """
    if not x.is_hermitian(atol=max(atol, 1e-10) * max(1.0, x.norm())):
        raise ValueError("null_factor needs a Hermitian element")
    w, v = np.linalg.eigh(0.5 * (x.m + x.m.conj().T))
    scale = max(abs(w).max(), 1e-300)
    if w[0] < -1e-10 * scale:
        raise ValueError("element is not future-pointing null (negative eigenvalue)")
    if w[1] <= 0:
        raise ValueError("zero element has no null factor")
    if abs(w[0]) > 1e-8 * scale:
        raise ValueError("element is not null")
    u = np.sqrt(w[1]) * v[:, 1]
    j = np.argmax(abs(u))
    u = u * np.exp(-1j * np.angle(u[j]))
    return TwoSpinor(u, x.scale_exp / 2)


# --------------------------------------------------------------------------- #
#                             Dirac spinors                                   #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class DiracSpinor:
    """Element of ``W = U + conj(U)*`` stored by its Weyl-basis components."""

    w: np.ndarray
    scale_exp: Fraction = Fraction(0)

    def __post_init__(self):
        w = np.array(self.w, dtype=complex).reshape(4)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "scale_exp", _frac(self.scale_exp))

    @classmethod
    def from_pair(cls, u, lbar) -> "DiracSpinor":
        """Build from ``u`` in ``U`` and ``lbar`` in ``conj(U)*``."""
        uc = u.c if isinstance(u, _Spinor) else np.asarray(u, dtype=complex)
        lc = lbar.c if isinstance(lbar, _Spinor) else np.asarray(lbar, dtype=complex)
        return cls(np.concatenate([uc, -lc]))

    @property
    def u(self) -> TwoSpinor:
        return TwoSpinor(self.w[:2], self.scale_exp)

    @property
    def lbar(self) -> ConjCoSpinor:
        return ConjCoSpinor(-self.w[2:], self.scale_exp)

    @property
    def lam(self) -> CoSpinor:
        return self.lbar.conj()

    def natural(self) -> np.ndarray:
        """Components in the ``(u, lbar)`` layout."""
        return _WEYL_SIGN @ self.w

    def __add__(self, other):
        return DiracSpinor(self.w + other.w, self.scale_exp)

    def __mul__(self, z):
        return DiracSpinor(self.w * z, self.scale_exp)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class CoDiracSpinor:
    """Element of ``W* = U* + conj(U)``: the pair ``(lam, ubar)``."""

    lam: CoSpinor
    ubar: ConjSpinor

    def __call__(self, psi: DiracSpinor) -> complex:
        return pair(self.lam, psi.u) + complex(np.dot(self.ubar.c, psi.lbar.c))


@dataclass(frozen=True, eq=False)
class DiracOperator:
    """Linear operator on ``W`` as a 4x4 matrix in the Weyl basis."""

    matrix: np.ndarray

    def __post_init__(self):
        a = np.array(self.matrix, dtype=complex).reshape(4, 4)
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @classmethod
    def identity(cls) -> "DiracOperator":
        return cls(np.eye(4))

    def natural(self) -> np.ndarray:
        """Matrix in the ``(u, lbar)`` layout."""
        return _WEYL_SIGN @ self.matrix @ _WEYL_SIGN

    def __matmul__(self, other):
        if isinstance(other, DiracOperator):
            return DiracOperator(self.matrix @ other.matrix)
        if isinstance(other, DiracSpinor):
            return DiracSpinor(self.matrix @ other.w, other.scale_exp)
        return NotImplemented

    def __add__(self, other):
        return DiracOperator(self.matrix + other.matrix)

    def __sub__(self, other):
        return DiracOperator(self.matrix - other.matrix)

    def __mul__(self, z):
        return DiracOperator(self.matrix * z)

    __rmul__ = __mul__


def clifford(y: ComplexHVector, eps: EpsilonForm = DEFAULT_EPS) -> DiracOperator:
    """The Clifford map ``gamma[y]``.

    On monomials ``gamma(r (x) sbar)[u, lbar] = sqrt2 (<lbar, sbar> r, <flat r, u> flat sbar)``,
    extended linearly.  In the ``(u, lbar)`` layout this is
    ``sqrt2 [[0, Y], [ebarT Y^T e, 0]]``; the phase of ``eps`` cancels.
    """
    Y = y.m
    lower_block = eps.bar_matrix.T @ Y.T @ eps.matrix
    nat = np.sqrt(2.0) * np.block([[np.zeros((2, 2)), Y], [lower_block, np.zeros((2, 2))]])
    return DiracOperator(_WEYL_SIGN @ nat @ _WEYL_SIGN)


# Hermitian form of the Dirac pairing in Weyl components: k(phi, psi) = phi^H K psi.
DIRAC_FORM = -np.block([[np.zeros((2, 2)), np.eye(2)], [np.eye(2), np.zeros((2, 2))]]).astype(complex)


def dirac_adjoint(psi: DiracSpinor) -> CoDiracSpinor:
    """``(u, lbar) -> (lam, ubar)``."""
    return CoDiracSpinor(psi.lam, psi.u.conj())


def dirac_pairing(phi: DiracSpinor, psi: DiracSpinor) -> complex:
    """``k(phi, psi) = <adjoint(phi), psi>``, antilinear in ``phi``."""
    return complex(phi.w.conj() @ DIRAC_FORM @ psi.w)


# --------------------------------------------------------------------------- #
#                          spinor connections                                 #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class SpinorConnectionCoefficients:
    """``Gamma[..., a, A, B]``; any leading grid axes are allowed."""

    gamma: np.ndarray

    def __post_init__(self):
        g = np.array(self.gamma, dtype=complex)
        if g.shape[-2:] != (2, 2):
            raise ValueError("connection coefficients must end in a 2x2 block")
        object.__setattr__(self, "gamma", g)


def decompose_spinor_connection(Gamma: SpinorConnectionCoefficients):
    """Split ``Gamma_a = (G_a + i Y_a) id + Gamma_tilde_a / 2``.

    Returns ``(G, Y, Gamma_tilde)`` with ``Gamma_tilde`` traceless.
    """
    g = Gamma.gamma
    half_tr = 0.5 * np.trace(g, axis1=-2, axis2=-1)
    traceless = 2.0 * (g - half_tr[..., None, None] * np.eye(2))
    return half_tr.real, half_tr.imag, traceless


def recompose_spinor_connection(G, Y, Gamma_tilde) -> SpinorConnectionCoefficients:
    z = (np.asarray(G) + 1j * np.asarray(Y))[..., None, None] * np.eye(2)
    return SpinorConnectionCoefficients(z + 0.5 * np.asarray(Gamma_tilde))


# --------------------------------------------------------------------------- #
#                           random sampling helpers                           #
# --------------------------------------------------------------------------- #


def random_hermitian(rng: np.random.Generator, scale: float = 1.0) -> ComplexHVector:
    return ComplexHVector.from_components(scale * rng.standard_normal(4))


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_dirac(rng: np.random.Generator) -> DiracSpinor:
    return DiracSpinor(random_complex(rng, 4))
