"""The QED point interaction and its two-spinor form.

Photon arguments ``A`` are passed as ``A#``, i.e. as elements of
``C (x) H`` (use :func:`twospinor.optical.hvector_of` to convert a covector).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .dirac import DegenerateSpinor, OnShellMomentum, splitting_sign, tau_of
from .spinors import (
    DEFAULT_EPS,
    ComplexHVector,
    DiracOperator,
    DiracSpinor,
    EpsilonForm,
    _metric_tensor,
    clifford,
    dirac_pairing,
    metric_g,
    pair,
    sharp,
)


@dataclass(frozen=True)
class VertexCoupling:
    e: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.e):
            raise ValueError("coupling must be finite")


def ell_int(phi: DiracSpinor, A: ComplexHVector, psi: DiracSpinor, coupling: VertexCoupling = VertexCoupling(),
            eps: EpsilonForm = DEFAULT_EPS) -> complex:
    """``l_int(phibar, A, psi) = -e <phibar, gamma[A#] psi>``."""
    return -coupling.e * dirac_pairing(phi, clifford(A, eps) @ psi)


def current_vector(phi: DiracSpinor, psi: DiracSpinor, eps: EpsilonForm = DEFAULT_EPS) -> ComplexHVector:
    """``u (x) vbar + mu# (x) lbar#`` for ``phi = (v, mubar)``, ``psi = (u, lbar)``."""
    u = psi.u.c
    v = phi.u.c
    mu_sharp = sharp(eps, phi.lam).c
    lbar_sharp = sharp(eps, psi.lbar).c
    return ComplexHVector(np.outer(u, v.conj()) + np.outer(mu_sharp, lbar_sharp))


def vertex_two_spinor(phi: DiracSpinor, A: ComplexHVector, psi: DiracSpinor, eps: EpsilonForm = DEFAULT_EPS) -> complex:
    """``<phibar, gamma[A#] psi> = sqrt2 g(A#, u (x) vbar + mu# (x) lbar#)``."""
    return np.sqrt(2.0) * metric_g(A, current_vector(phi, psi, eps), eps)


def vertex_monomial(phi: DiracSpinor, r, s, psi: DiracSpinor, eps: EpsilonForm = DEFAULT_EPS) -> complex:
    """Two-spinor expansion for ``A# = r (x) sbar``:
    ``sqrt2 (<mu, r><lbar, sbar> + eps(u, r) conj(eps)(vbar, sbar))``."""
    r = np.asarray(getattr(r, "c", r), dtype=complex)
    s = np.asarray(getattr(s, "c", s), dtype=complex)
    mu_r = phi.lam.c @ r
    lbar_sbar = psi.lbar.c @ s.conj()
    e_ur = psi.u.c @ eps.matrix @ r
    eb_vs = phi.u.c.conj() @ eps.bar_matrix @ s.conj()
    return complex(np.sqrt(2.0) * (mu_r * lbar_sbar + e_ur * eb_vs))


@dataclass(frozen=True, eq=False)
class VertexResult:
    amplitude: complex
    kernel_basis: np.ndarray  # (3, 2, 2): annihilating elements of C (x) H, orthonormal


def vertex_kernel(phi: DiracSpinor, psi: DiracSpinor, eps: EpsilonForm = DEFAULT_EPS, atol: float = 1e-13) -> np.ndarray:
    """Orthonormal basis (Frobenius) of ``{A : <phibar, gamma[A#] psi> = 0}``.

    This is the ``g``-orthogonal complement of a single vector, so it has
    complex dimension 3.
    """
    w = current_vector(phi, psi, eps)
    if w.norm() <= atol * max(1.0, np.linalg.norm(phi.w) * np.linalg.norm(psi.w)):
        raise DegenerateSpinor("current vector vanishes; amplitude map is zero")
    row = np.einsum("ab,abcd->cd", w.m, _metric_tensor(eps)).reshape(1, 4)
    basis = null_space(row)  # (4, 3)
    return basis.T.reshape(-1, 2, 2)


def vertex(phi: DiracSpinor, A: ComplexHVector, psi: DiracSpinor, coupling: VertexCoupling = VertexCoupling(),
           eps: EpsilonForm = DEFAULT_EPS) -> VertexResult:
    return VertexResult(ell_int(phi, A, psi, coupling, eps), vertex_kernel(phi, psi, eps))


def _tau_flat_part(psi: DiracSpinor, eps: EpsilonForm) -> ComplexHVector:
    # ((u (x) ubar)^flat + lam (x) lbar) / |<lam,u>| raised back to H equals sqrt2 tau(psi)
    return np.sqrt(2.0) * tau_of(psi, eps)


def k_vertex_vector(phi: DiracSpinor, psi: DiracSpinor, m: float, sign: int, eps: EpsilonForm = DEFAULT_EPS) -> ComplexHVector:
    """``k#`` for ``k = (m/sqrt2)[(...)_psi/|<lam,u>| +- (...)_phi/|<mu,v>|]``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return (m / np.sqrt(2.0)) * (_tau_flat_part(psi, eps) + sign * _tau_flat_part(phi, eps))


def k_vertex_theorem(phi: DiracSpinor, psi: DiracSpinor, sign: int, m: float = 1.0, eps: EpsilonForm = DEFAULT_EPS):
    """Return ``(matrix_path, expansion)`` for ``(1/m) <phibar, gamma[k#] psi>``.

    ``expansion`` is the closed two-spinor form
    ``<mu,u>(<lbar,ubar>/|<lam,u>| +- <mubar,vbar>/|<mu,v>|)
    + <lbar,vbar>(<lam,u>/|<lam,u>| +- <mu,v>/|<mu,v>|)``.
    """
    k = k_vertex_vector(phi, psi, m, sign, eps)
    direct = dirac_pairing(phi, clifford(k, eps) @ psi) / m
    lu = pair(psi.lam, psi.u)
    mv = pair(phi.lam, phi.u)
    if lu == 0 or mv == 0:
        raise DegenerateSpinor("<lam,u> and <mu,v> must be nonzero")
    mu_u = pair(phi.lam, psi.u)
    lbar_vbar = complex(psi.lbar.c @ phi.u.c.conj())
    expansion = mu_u * (np.conj(lu) / abs(lu) + sign * np.conj(mv) / abs(mv)) + lbar_vbar * (
        lu / abs(lu) + sign * mv / abs(mv)
    )
    return complex(direct), complex(expansion)


def gauge_shift_invariance(phi: DiracSpinor, psi: DiracSpinor, A: ComplexHVector, c: complex, m: float = 1.0,
                           coupling: VertexCoupling = VertexCoupling(), eps: EpsilonForm = DEFAULT_EPS):
    """Amplitudes with ``A`` and with ``A + c k``, ``k`` the algebraic sum of momenta.

    ``phi`` and ``psi`` must be eigenstates of their Dirac splittings.  Same
    species (equal splitting signs) use the momentum difference, mutual
    antiparticles the sum.
    """
    try:
        s_psi = splitting_sign(psi)
        s_phi = splitting_sign(phi)
    except DegenerateSpinor as exc:
        raise ValueError("off-shell input: spinors must lie in a Dirac splitting eigenspace") from exc
    sign = -1 if s_psi == s_phi else 1
    k = k_vertex_vector(phi, psi, m, sign, eps)
    amp = ell_int(phi, A, psi, coupling, eps)
    shifted = ell_int(phi, A + c * k, psi, coupling, eps)
    return amp, shifted


def propagator_factor(p_perp, m: float, species: str, eps: EpsilonForm = DEFAULT_EPS) -> DiracOperator:
    """``1 +- gamma[E_m(p_perp) + p_perp] / m`` (plus for electrons, minus for positrons)."""
    if m <= 0:
        raise ValueError("propagator factor needs m > 0")
    sgn = {"electron": 1, "positron": -1}[species]
    p = OnShellMomentum(m, p_perp)
    g = clifford(p.vector(), eps).matrix / m
    return DiracOperator(np.eye(4) + sgn * g)


# --------------------------------------------------------------------------- #
#                            the eight vertices                               #
# --------------------------------------------------------------------------- #

_PSI_SLOT = ("absorb_electron", "emit_positron")
_PHOTON_SLOT = ("absorb", "emit")
_PHI_SLOT = ("emit_electron", "absorb_positron")


@dataclass(frozen=True)
class VertexDescriptor:
    """One of the eight uses of ``l_int`` as absorption or emission.

    ``psi`` slot: incoming electron or outgoing positron.  ``phi`` slot:
    outgoing electron or incoming positron.  The photon is absorbed with
    ``A# = b#`` or emitted with the Hermitian-conjugate polarisation.
    """

    psi: str
    photon: str
    phi: str

    @property
    def name(self) -> str:
        return f"{self.psi}|{self.photon}_photon|{self.phi}"

    def legs(self):
        """``[(species, 'absorb'|'emit', slot)]`` in the order psi, photon, phi."""
        out = []
        out.append(("electron", "absorb", "psi") if self.psi == "absorb_electron" else ("positron", "emit", "psi"))
        out.append(("photon", self.photon, "photon"))
        out.append(("electron", "emit", "phi") if self.phi == "emit_electron" else ("positron", "absorb", "phi"))
        return out

    def charge_balance(self) -> tuple[int, int]:
        """(charge absorbed, charge emitted) in units of the positron charge."""
        q = {"electron": -1, "positron": 1, "photon": 0}
        absorbed = sum(q[s] for s, d, _ in self.legs() if d == "absorb")
        emitted = sum(q[s] for s, d, _ in self.legs() if d == "emit")
        return absorbed, emitted

    def adjoint(self) -> "VertexDescriptor":
        """Descriptor with every absorption and emission exchanged."""
        psi = "absorb_electron" if self.phi == "emit_electron" else "emit_positron"
        phi = "emit_electron" if self.psi == "absorb_electron" else "absorb_positron"
        photon = "emit" if self.photon == "absorb" else "absorb"
        return VertexDescriptor(psi, photon, phi)

    def n_absorbed(self) -> int:
        return sum(1 for _, d, _ in self.legs() if d == "absorb")


def enumerate_vertices() -> list[VertexDescriptor]:
    return [VertexDescriptor(a, b, c) for a in _PSI_SLOT for b in _PHOTON_SLOT for c in _PHI_SLOT]


def vertex_by_name(name: str) -> VertexDescriptor:
    for d in enumerate_vertices():
        if d.name == name:
            return d
    raise KeyError(name)


__all__ = [
    "VertexCoupling",
    "VertexDescriptor",
    "VertexResult",
    "current_vector",
    "ell_int",
    "enumerate_vertices",
    "gauge_shift_invariance",
    "k_vertex_theorem",
    "k_vertex_vector",
    "propagator_factor",
    "vertex",
    "vertex_by_name",
    "vertex_kernel",
    "vertex_monomial",
    "vertex_two_spinor",
]
