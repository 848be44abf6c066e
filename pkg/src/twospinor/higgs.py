"""Higgs vacuum, the splittings it induces and the Higgs potential.

Internal spaces ``F_R``, ``F_L`` carry positive Hermitian metrics ``h_R``,
``h_L``.  A vacuum ``H0 : F_R -> F_L`` is a maximal-rank conformal isometry,
``H0^dagger h_L H0 = (mu^2 / n_R) h_R``.  All adjoints below are taken with
respect to these metrics, e.g. the adjoint of ``xi`` on ``F_L`` is
``h_L^-1 xi^dagger h_L``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

ISOMETRY_ATOL = 1e-12


def _check_metric(h: np.ndarray, name: str) -> np.ndarray:
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    if not np.allclose(h, h.conj().T, atol=1e-13):
        raise ValueError(f"{name} must be Hermitian")
    if np.min(np.linalg.eigvalsh(h)) <= 0:
        raise ValueError(f"{name} must be positive definite")
    return h


@dataclass(frozen=True, eq=False)
class InternalSpaces:
    n_R: int
    n_L: int
    h_R: np.ndarray = None
    h_L: np.ndarray = None

    def __post_init__(self):
        if self.n_R < 1 or self.n_L < 1:
            raise ValueError("fiber dimensions must be positive")
        h_R = np.eye(self.n_R, dtype=complex) if self.h_R is None else self.h_R
        h_L = np.eye(self.n_L, dtype=complex) if self.h_L is None else self.h_L
        h_R = _check_metric(h_R, "h_R")
        h_L = _check_metric(h_L, "h_L")
        if h_R.shape[0] != self.n_R or h_L.shape[0] != self.n_L:
            raise ValueError("metric shapes do not match the fiber dimensions")
        object.__setattr__(self, "h_R", h_R)
        object.__setattr__(self, "h_L", h_L)


def random_metric(rng: np.random.Generator, n: int, spread: float = 0.5) -> np.ndarray:
    """A random positive Hermitian metric near the identity."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    a = np.eye(n) + spread * z / np.sqrt(2 * n)
    return a @ a.conj().T


def _adjoint_L(spaces: InternalSpaces, xi: np.ndarray) -> np.ndarray:
    return np.linalg.solve(spaces.h_L, xi.conj().T @ spaces.h_L)


@dataclass(frozen=True, eq=False)
class HiggsVacuum:
    H0: np.ndarray
    mu: float
    spaces: InternalSpaces

    def __post_init__(self):
        H0 = np.asarray(self.H0, dtype=complex)
        sp = self.spaces
        if H0.shape != (sp.n_L, sp.n_R):
            raise ValueError("H0 must be an n_L x n_R matrix")
        if not self.mu > 0:
            raise ValueError("mu must be positive")
        if np.linalg.matrix_rank(H0) != sp.n_R:
            raise ValueError("H0 is rank deficient")
        object.__setattr__(self, "H0", H0)
        object.__setattr__(self, "mu", float(self.mu))
        r = self.isometry_residual()
        if r > ISOMETRY_ATOL * max(1.0, self.mu**2):
            raise ValueError(f"H0 is not conformally isometric (residual {r:.2e})")

    def isometry_residual(self) -> float:
        sp = self.spaces
        lhs = self.H0.conj().T @ sp.h_L @ self.H0
        return float(np.max(np.abs(lhs - (self.mu**2 / sp.n_R) * sp.h_R)))

    def contraction(self) -> float:
        """``<H0bar, H0>``, which equals ``mu^2``."""
        return hermitian_contraction(self.H0, self.spaces)

    def isometry(self) -> np.ndarray:
        """``J = (sqrt(n_R) / mu) H0``, an isometry ``F_R -> F_L``."""
        return (np.sqrt(self.spaces.n_R) / self.mu) * self.H0

    def to_dict(self) -> dict:
        sp = self.spaces
        return {
            "n_R": sp.n_R,
            "n_L": sp.n_L,
            "mu": self.mu,
            "H0": _cplx(self.H0),
            "h_R": _cplx(sp.h_R),
            "h_L": _cplx(sp.h_L),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HiggsVacuum":
        sp = InternalSpaces(d["n_R"], d["n_L"], _uncplx(d["h_R"]), _uncplx(d["h_L"]))
        return cls(_uncplx(d["H0"]), d["mu"], sp)


def _cplx(a: np.ndarray) -> dict:
    a = np.asarray(a)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def _uncplx(d: dict) -> np.ndarray:
    return np.array(d["re"], dtype=float) + 1j * np.array(d["im"], dtype=float)


def vacuum_to_json(vac: HiggsVacuum) -> str:
    return json.dumps(vac.to_dict(), sort_keys=True)


def vacuum_from_json(text: str) -> HiggsVacuum:
    return HiggsVacuum.from_dict(json.loads(text))


def hermitian_contraction(phi: np.ndarray, spaces: InternalSpaces) -> float:
    """``<phibar, phi> = tr(h_R^-1 phi^dagger h_L phi)``."""
    phi = np.asarray(phi, dtype=complex)
    return float(np.trace(np.linalg.solve(spaces.h_R, phi.conj().T @ spaces.h_L @ phi)).real)


def make_vacuum(spaces: InternalSpaces, mu: float, seed: int | None = None) -> HiggsVacuum:
    """Random vacuum ``(mu / sqrt(n_R)) L_L^-dagger W L_R^dagger`` with ``W`` a random isometry."""
    if spaces.n_R > spaces.n_L:
        raise ValueError("a maximal-rank vacuum needs n_R <= n_L")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((spaces.n_L, spaces.n_R)) + 1j * rng.standard_normal((spaces.n_L, spaces.n_R))
    W, _ = np.linalg.qr(z)
    L_R = np.linalg.cholesky(spaces.h_R)
    L_L = np.linalg.cholesky(spaces.h_L)
    H0 = (mu / np.sqrt(spaces.n_R)) * np.linalg.solve(L_L.conj().T, W @ L_R.conj().T)
    return HiggsVacuum(H0, mu, spaces)


def relating_unitary(v1: HiggsVacuum, v2: HiggsVacuum) -> np.ndarray:
    """An ``h_L``-unitary ``U`` on ``F_L`` with ``U H0_1 = H0_2``."""
    if v1.spaces is not v2.spaces and not (
        np.allclose(v1.spaces.h_L, v2.spaces.h_L) and np.allclose(v1.spaces.h_R, v2.spaces.h_R)
    ):
        raise ValueError("vacua live on different internal spaces")
    if not np.isclose(v1.mu, v2.mu):
        raise ValueError("vacua have different mu")
    sp = v1.spaces
    L_L = np.linalg.cholesky(sp.h_L)
    L_R = np.linalg.cholesky(sp.h_R)

    def _full(v):
        W = L_L.conj().T @ v.isometry() @ np.linalg.inv(L_R.conj().T)
        Q, _ = np.linalg.qr(np.hstack([W, np.eye(sp.n_L)]))
        return np.hstack([W, Q[:, sp.n_R:sp.n_L]])

    U_hat = _full(v2) @ _full(v1).conj().T
    return np.linalg.solve(L_L.conj().T, U_hat @ L_L.conj().T)


def split_FL(vac: HiggsVacuum):
    """``(P', P_perp)``: ``h_L``-orthogonal projectors onto ``H0(F_R)`` and its complement."""
    H0 = vac.H0
    h_L = vac.spaces.h_L
    G = H0.conj().T @ h_L @ H0
    P = H0 @ np.linalg.solve(G, H0.conj().T @ h_L)
    return P, np.eye(vac.spaces.n_L) - P


@dataclass(frozen=True)
class MatterMultiplet:
    Psi_R: np.ndarray  # (n_R, 2)
    Psi_L: np.ndarray  # (n_L, 2)

    def __post_init__(self):
        object.__setattr__(self, "Psi_R", np.asarray(self.Psi_R, dtype=complex))
        object.__setattr__(self, "Psi_L", np.asarray(self.Psi_L, dtype=complex))
        if self.Psi_R.ndim != 2 or self.Psi_L.ndim != 2 or self.Psi_R.shape[1] != 2 or self.Psi_L.shape[1] != 2:
            raise ValueError("matter blocks must have shapes (n_R, 2) and (n_L, 2)")


@dataclass(frozen=True, eq=False)
class MatterDecomposition:
    psi_R: np.ndarray  # right-handed part of the Dirac field psi
    psi_prime_R: np.ndarray  # H0-image part of Psi_L, pulled back to F_R
    nu: np.ndarray  # P_perp Psi_L

    def to_dict(self) -> dict:
        return {"psi_R": _cplx(self.psi_R), "psi_prime_R": _cplx(self.psi_prime_R), "nu": _cplx(self.nu)}


def decompose_matter(Psi: MatterMultiplet, vac: HiggsVacuum) -> MatterDecomposition:
    """``Psi = (Psi_R, Psi'_R, Psi_perp) = (psi, nu)``.

    ``Psi'_R`` is ``P' Psi_L`` pulled back through the isometry
    ``J = (sqrt(n_R)/mu) H0``.
    """
    sp = vac.spaces
    if Psi.Psi_R.shape[0] != sp.n_R or Psi.Psi_L.shape[0] != sp.n_L:
        raise ValueError("matter field shape does not match the internal spaces")
    P, Pp = split_FL(vac)
    J = vac.isometry()
    pull = np.linalg.solve(sp.h_R, J.conj().T @ sp.h_L)
    return MatterDecomposition(Psi.Psi_R.copy(), pull @ P @ Psi.Psi_L, Pp @ Psi.Psi_L)


def recompose_matter(dec: MatterDecomposition, vac: HiggsVacuum) -> MatterMultiplet:
    return MatterMultiplet(dec.psi_R, vac.isometry() @ dec.psi_prime_R + dec.nu)


@dataclass(frozen=True, eq=False)
class LieDecomposition:
    xi_prime: np.ndarray  # P' xi P'
    xi_plus: np.ndarray  # P_perp xi P'
    xi_minus: np.ndarray  # P' xi P_perp
    xi_perp: np.ndarray  # P_perp xi P_perp

    def recompose(self) -> np.ndarray:
        return self.xi_prime + self.xi_plus + self.xi_minus + self.xi_perp

    def to_dict(self) -> dict:
        return {k: _cplx(getattr(self, k)) for k in ("xi_prime", "xi_plus", "xi_minus", "xi_perp")}


def is_h_antihermitian(xi: np.ndarray, spaces: InternalSpaces, atol: float = 1e-12) -> bool:
    xi = np.asarray(xi, dtype=complex)
    r = xi.conj().T @ spaces.h_L + spaces.h_L @ xi
    return bool(np.max(np.abs(r)) <= atol * max(1.0, np.max(np.abs(xi))))


def decompose_lie(xi: np.ndarray, vac: HiggsVacuum) -> LieDecomposition:
    xi = np.asarray(xi, dtype=complex)
    if xi.shape != (vac.spaces.n_L, vac.spaces.n_L):
        raise ValueError("xi must act on F_L")
    if not is_h_antihermitian(xi, vac.spaces):
        raise ValueError("xi is not anti-Hermitian with respect to h_L")
    P, Pp = split_FL(vac)
    return LieDecomposition(P @ xi @ P, Pp @ xi @ P, P @ xi @ Pp, Pp @ xi @ Pp)


def adjoint_residual(dec: LieDecomposition, spaces: InternalSpaces) -> float:
    """``|| (xi^-)^dagger + xi^+ ||`` with the ``h_L``-adjoint."""
    return float(np.max(np.abs(_adjoint_L(spaces, dec.xi_minus) + dec.xi_plus)))


def random_lie_element(rng: np.random.Generator, spaces: InternalSpaces) -> np.ndarray:
    """Random ``h_L``-anti-Hermitian ``xi = L^-dagger A L^dagger`` with ``A`` anti-Hermitian."""
    n = spaces.n_L
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    A = 0.5 * (z - z.conj().T)
    L = np.linalg.cholesky(spaces.h_L)
    return np.linalg.solve(L.conj().T, A @ L.conj().T)


def lie_algebra_basis(spaces: InternalSpaces) -> list[np.ndarray]:
    """A real basis of the ``h_L``-anti-Hermitian matrices (real dimension ``n_L^2``)."""
    n = spaces.n_L
    L = np.linalg.cholesky(spaces.h_L)
    out = []
    for i in range(n):
        for j in range(n):
            A = np.zeros((n, n), dtype=complex)
            if i == j:
                A[i, i] = 1j
            elif i < j:
                A[i, j], A[j, i] = 1, -1
            else:
                A[i, j], A[j, i] = 1j, 1j
            out.append(np.linalg.solve(L.conj().T, A @ L.conj().T))
    return out


def block_dimensions(vac: HiggsVacuum) -> dict:
    """Real dimensions of the images of ``xi -> xi'``, ``xi^+``, ``xi_perp``."""
    decs = [decompose_lie(x, vac) for x in lie_algebra_basis(vac.spaces)]

    def rank(name):
        rows = np.array([np.concatenate([getattr(d, name).real.ravel(), getattr(d, name).imag.ravel()]) for d in decs])
        return int(np.linalg.matrix_rank(rows, tol=1e-10))

    return {"prime": rank("xi_prime"), "plus": rank("xi_plus"), "perp": rank("xi_perp")}


def higgs_potential(phi: np.ndarray, vac: HiggsVacuum, lam: float) -> float:
    """``lam (2 mu^2 <phibar,phi> - <phibar,phi>^2)``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    q = hermitian_contraction(phi, vac.spaces)
    return float(lam * (2.0 * vac.mu**2 * q - q * q))


def radial_derivative(vac: HiggsVacuum, lam: float, step: float = 1e-3) -> tuple[float, float]:
    """Central-difference ``d/ds V(s H0)`` at ``s = 1`` with step ``step`` and ``step/2``."""

    def d(hs):
        return (higgs_potential((1 + hs) * vac.H0, vac, lam) - higgs_potential((1 - hs) * vac.H0, vac, lam)) / (2 * hs)

    return d(step), d(step / 2)
