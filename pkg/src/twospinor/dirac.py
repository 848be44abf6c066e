"""Mass shells, the momentum-dependent Dirac splitting and Dirac frames.

Momenta are handled through their contravariant form ``p#`` in the fixed
Pauli frame: ``p# = p0 tau_0 + p_perp . (tau_1, tau_2, tau_3)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import sqrtm

from .spinors import (
    DEFAULT_EPS,
    ComplexHVector,
    DiracOperator,
    DiracSpinor,
    EpsilonForm,
    SIGMA,
    clifford,
    dirac_pairing,
    pair,
    sharp,
)


class DegenerateSpinor(ValueError):
    """The spinor has ``<lam, u> = 0`` (or non-real where reality is required)."""


def energy(m: float, p_perp) -> float:
    """``E_m(p_perp) = sqrt(m**2 + |p_perp|**2)``."""
    if m < 0:
        raise ValueError("mass must be nonnegative")
    p = np.asarray(p_perp, dtype=float).reshape(3)
    return float(np.sqrt(m * m + p @ p))


@dataclass(frozen=True, eq=False)
class OnShellMomentum:
    m: float
    p_perp: np.ndarray

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("mass must be nonnegative")
        p = np.array(self.p_perp, dtype=float).reshape(3)
        p.setflags(write=False)
        object.__setattr__(self, "p_perp", p)
        object.__setattr__(self, "m", float(self.m))

    @property
    def p0(self) -> float:
        return energy(self.m, self.p_perp)

    def components(self) -> np.ndarray:
        return np.concatenate([[self.p0], self.p_perp])

    def vector(self) -> ComplexHVector:
        """``p#`` as an element of ``H`` (scale exponent -1)."""
        return ComplexHVector.from_components(self.components(), scale_exp=-1)


def dirac_projectors(p: OnShellMomentum, eps: EpsilonForm = DEFAULT_EPS):
    """``P+-(p) = (1 +- gamma[p#]/m) / 2``, projectors onto ``W+-_p``."""
    if p.m <= 0:
        raise ValueError("Dirac splitting needs m > 0; massless momenta belong to the optical module")
    g = clifford(ComplexHVector.from_components(p.components()), eps).matrix / p.m
    one = np.eye(4)
    return DiracOperator(0.5 * (one + g)), DiracOperator(0.5 * (one - g))


@dataclass(frozen=True, eq=False)
class DiracFrame:
    """``(u_1, u_2, v_1, v_2)`` adapted to ``W+_p + W-_p``."""

    p: OnShellMomentum
    u: tuple
    v: tuple

    def matrix(self) -> np.ndarray:
        """Columns ``u_1, u_2, v_1, v_2`` in Weyl components."""
        return np.column_stack([s.w for s in (*self.u, *self.v)])


def boost_basis(p: OnShellMomentum, rotation: Optional[np.ndarray] = None) -> np.ndarray:
    """Columns of a 2-spinor basis in which ``p#`` is proportional to ``tau_0``.

    ``B B^H = (p . sigma) / m`` with ``det B = 1``; the default is the positive
    Hermitian square root.  An optional unitary ``rotation`` with unit
    determinant is applied on the right (little-group freedom).
    """
    if p.m <= 0:
        raise ValueError("Dirac frame needs m > 0")
    ps = np.einsum("l,lab->ab", p.components(), SIGMA) / p.m
    B = sqrtm(ps)
    B = 0.5 * (B + B.conj().T)
    if rotation is not None:
        R = np.asarray(rotation, dtype=complex)
        if not np.allclose(R.conj().T @ R, np.eye(2), atol=1e-12):
            raise ValueError("rotation must be unitary")
        if not np.isclose(np.linalg.det(R), 1.0, atol=1e-12):
            raise ValueError("rotation must have unit determinant")
        B = B @ R
    return B


def dirac_frame_at(
    p: OnShellMomentum,
    rotation: Optional[np.ndarray] = None,
    eps: EpsilonForm = DEFAULT_EPS,
) -> DiracFrame:
    """Dirac frame at ``p``.

    With ``zeta_A(p)`` the boosted basis and ``zeta^A(p)`` its dual,
    ``u_A = (zeta_A, conj(zeta)^A)/sqrt2`` and ``v_A = (zeta_A, -conj(zeta)^A)/sqrt2``.
    """
    B = boost_basis(p, rotation)
    dual = np.conj(np.linalg.inv(B))  # rows: components of conj(zeta)^A
    s = 1 / np.sqrt(2.0)
    u = tuple(DiracSpinor.from_pair(s * B[:, a], s * dual[a]) for a in range(2))
    v = tuple(DiracSpinor.from_pair(s * B[:, a], -s * dual[a]) for a in range(2))
    return DiracFrame(p, u, v)


def _lam_u(psi: DiracSpinor) -> complex:
    return pair(psi.lam, psi.u)


def tau_of(psi: DiracSpinor, eps: EpsilonForm = DEFAULT_EPS) -> ComplexHVector:
    """``tau = (u (x) ubar + lam# (x) lbar#) / (sqrt2 |<lam, u>|)``."""
    lu = _lam_u(psi)
    if abs(lu) <= 1e-14 * max(1.0, float(np.vdot(psi.w, psi.w).real)):
        raise DegenerateSpinor("<lam, u> = 0: no timelike reconstruction")
    lam_sharp = sharp(eps, psi.lam).c
    m = np.outer(psi.u.c, psi.u.c.conj()) + np.outer(lam_sharp, lam_sharp.conj())
    return ComplexHVector(m / (np.sqrt(2.0) * abs(lu)))


def splitting_sign(psi: DiracSpinor, atol: float = 1e-10) -> int:
    """``+1`` if ``<lam, u>`` is real positive, ``-1`` if real negative."""
    lu = _lam_u(psi)
    if abs(lu) == 0:
        raise DegenerateSpinor("<lam, u> = 0")
    if abs(lu.imag) > atol * abs(lu):
        raise DegenerateSpinor("<lam, u> is not real")
    return 1 if lu.real > 0 else -1


def momentum_from_state(psi: DiracSpinor, m: float, eps: EpsilonForm = DEFAULT_EPS) -> OnShellMomentum:
    """Recover the momentum of a free electron or positron internal state.

    Both ``W+_p`` and ``W-_p`` states give the positive-energy shell point
    ``p# = m tau(psi)``.
    """
    splitting_sign(psi)
    x = tau_of(psi, eps).components().real * m
    return OnShellMomentum(m, x[1:])


@dataclass(frozen=True)
class GeneralizedFermionLabel:
    species: str  # "electron" | "positron"
    momentum_index: int
    spin: int
    p0: float

    def __post_init__(self):
        if self.species not in ("electron", "positron"):
            raise ValueError("species must be electron or positron")


def generalized_frame_phase(label, t: float) -> complex:
    """``exp(-i p0 t)``; ``label`` may be a label object or the energy itself."""
    p0 = label.p0 if hasattr(label, "p0") else float(label)
    return complex(np.exp(-1j * p0 * t))


def random_on_shell(rng: np.random.Generator, m: float, scale: float = 2.0) -> OnShellMomentum:
    return OnShellMomentum(m, scale * rng.standard_normal(3))


def random_eligible_spinor(rng: np.random.Generator, sign: Optional[int] = None) -> DiracSpinor:
    """Random ``(u, lbar)`` with ``<lam, u>`` real and nonzero."""
    u = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    lam = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    lu = lam @ u
    if sign is None:
        sign = 1 if rng.random() < 0.5 else -1
    lam = lam * np.exp(-1j * np.angle(lu)) * sign
    return DiracSpinor.from_pair(u, np.conj(lam))


def frame_orthonormality(frame: DiracFrame) -> np.ndarray:
    """Gram matrix of the frame under the Dirac pairing."""
    vecs = (*frame.u, *frame.v)
    return np.array([[dirac_pairing(a, b) for b in vecs] for a in vecs])
