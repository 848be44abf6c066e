"""Grid-sampled gauge fields on a periodic 4D chart.

The chart is a periodic box with ``N`` nodes per axis and spacing
``h = 2 pi / N``.  In the chosen frame the flat reference connection has
vanishing coefficients, so a connection is just its coefficient field
``alpha_a``, an anti-Hermitian ``n x n`` matrix per node and per direction.

Conventions
-----------
* curvature ``F_ab = d_a alpha_b - d_b alpha_a + [alpha_a, alpha_b]``
* gauge transformation ``alpha' = K alpha K^-1 - (dK) K^-1``, which is the
  sign that makes ``F' = K F K^-1``
* ``(alpha ^bar beta)_ab = ([alpha_a, beta_b] - [alpha_b, beta_a]) / 2``
* derivatives are second-order central differences with periodic wrap
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass

import numpy as np

from .optical import NullCovector
from .spinors import ETA, SIGMA, SpinorConnectionCoefficients, decompose_spinor_connection

ANTIHERMITIAN_ATOL = 1e-12
UNITARY_ATOL = 1e-12
MIN_NODES = 3


class GridError(ValueError):
    """Grid shape or spacing is unusable."""


def _dagger(x: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(x, -1, -2))


def project_antihermitian(x: np.ndarray) -> np.ndarray:
    """``(x - x^dagger) / 2`` on the trailing matrix axes."""
    return 0.5 * (x - _dagger(x))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def is_antihermitian(x: np.ndarray, atol: float = ANTIHERMITIAN_ATOL) -> bool:
    return bool(np.max(np.abs(x + _dagger(x)), initial=0.0) <= atol)


# --------------------------------------------------------------------------- #
#                              Lie algebra bases                              #
# --------------------------------------------------------------------------- #


def su2_basis() -> np.ndarray:
    """``l_i = -(i/2) sigma_i``, so that ``[l_j, l_k] = eps_ijk l_i``."""
    return -0.5j * SIGMA[1:]


def u1_basis() -> np.ndarray:
    return np.array([[[1j]]])


def structure_constants(basis: np.ndarray) -> np.ndarray:
    """``c[i, j, k]`` with ``[l_j, l_k] = c^i_jk l_i``, solved in the real span."""
    basis = np.asarray(basis, dtype=complex)
    d = basis.shape[0]
    M = np.concatenate([basis.reshape(d, -1).real, basis.reshape(d, -1).imag], axis=1).T
    c = np.zeros((d, d, d))
    for j in range(d):
        for k in range(d):
            br = commutator(basis[j], basis[k]).reshape(-1)
            rhs = np.concatenate([br.real, br.imag])
            c[:, j, k] = np.linalg.lstsq(M, rhs, rcond=None)[0]
    return c


def lie_components(xi: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Real coefficients of ``xi`` (``(..., n, n)``) in ``basis``."""
    basis = np.asarray(basis, dtype=complex)
    d = basis.shape[0]
    M = np.concatenate([basis.reshape(d, -1).real, basis.reshape(d, -1).imag], axis=1).T
    flat = np.asarray(xi).reshape(*np.shape(xi)[:-2], -1)
    rhs = np.concatenate([flat.real, flat.imag], axis=-1)
    pinv = np.linalg.pinv(M)
    return rhs @ pinv.T


# --------------------------------------------------------------------------- #
#                                 grid fields                                 #
# --------------------------------------------------------------------------- #


def _check_grid(dims, h):
    if len(dims) != 4:
        raise GridError("the chart must be four-dimensional")
    if min(dims) < MIN_NODES:
        raise GridError(f"grid too small: need at least {MIN_NODES} nodes per axis")
    if not h > 0:
        raise GridError("grid spacing must be positive")


@dataclass(frozen=True, eq=False)
class ConnectionField:
    """``alpha`` with shape ``(N0, N1, N2, N3, 4, n, n)``."""

    alpha: np.ndarray
    h: float

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=complex)
        if a.ndim != 7 or a.shape[4] != 4 or a.shape[5] != a.shape[6]:
            raise GridError("connection coefficients must have shape (N0,N1,N2,N3,4,n,n)")
        _check_grid(a.shape[:4], self.h)
        if not is_antihermitian(a, ANTIHERMITIAN_ATOL * max(1.0, float(np.max(np.abs(a), initial=0.0)))):
            raise ValueError("connection coefficients must be anti-Hermitian")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "h", float(self.h))

    @property
    def dims(self):
        return self.alpha.shape[:4]

    @property
    def n(self) -> int:
        return self.alpha.shape[-1]

    @classmethod
    def zeros(cls, N: int, n: int, h: float | None = None) -> "ConnectionField":
        h = 2 * np.pi / N if h is None else h
        return cls(np.zeros((N, N, N, N, 4, n, n), dtype=complex), h)


@dataclass(frozen=True, eq=False)
class GaugeTransformField:
    """Unitary ``K`` with shape ``(N0, N1, N2, N3, n, n)``."""

    K: np.ndarray
    h: float

    def __post_init__(self):
        K = np.asarray(self.K, dtype=complex)
        if K.ndim != 6 or K.shape[4] != K.shape[5]:
            raise GridError("gauge transformation must have shape (N0,N1,N2,N3,n,n)")
        _check_grid(K.shape[:4], self.h)
        err = np.max(np.abs(_dagger(K) @ K - np.eye(K.shape[-1])))
        if err > UNITARY_ATOL:
            raise ValueError(f"gauge transformation is not unitary (residual {err:.2e})")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "h", float(self.h))

    @classmethod
    def constant(cls, K: np.ndarray, N: int, h: float | None = None) -> "GaugeTransformField":
        h = 2 * np.pi / N if h is None else h
        K = np.asarray(K, dtype=complex)
        return cls(np.broadcast_to(K, (N, N, N, N) + K.shape).copy(), h)


@dataclass(frozen=True, eq=False)
class FieldStrength:
    """``F`` with shape ``(N0, N1, N2, N3, 4, 4, n, n)``, antisymmetric in the form indices."""

    F: np.ndarray
    h: float

    def antisymmetry_residual(self) -> float:
        return float(np.max(np.abs(self.F + np.swapaxes(self.F, 4, 5))))


def central_diff(field: np.ndarray, axis: int, h: float) -> np.ndarray:
    """Periodic second-order central difference along a grid axis."""
    return (np.roll(field, -1, axis=axis) - np.roll(field, 1, axis=axis)) / (2.0 * h)


def curvature(alpha: ConnectionField) -> FieldStrength:
    a = alpha.alpha
    h = alpha.h
    n = alpha.n
    F = np.zeros(a.shape[:4] + (4, 4, n, n), dtype=complex)
    for i in range(4):
        for j in range(i + 1, 4):
            f = central_diff(a[..., j, :, :], i, h) - central_diff(a[..., i, :, :], j, h)
            f = f + commutator(a[..., i, :, :], a[..., j, :, :])
            f = project_antihermitian(f)
            F[..., i, j, :, :] = f
            F[..., j, i, :, :] = -f
    return FieldStrength(F, h)


def gauge_transform(alpha: ConnectionField, K: GaugeTransformField) -> ConnectionField:
    """``alpha'_a = K alpha_a K^-1 - (d_a K) K^-1``."""
    if alpha.dims != K.K.shape[:4] or alpha.n != K.K.shape[-1]:
        raise GridError("connection and gauge transformation live on different grids")
    if not np.isclose(alpha.h, K.h):
        raise GridError("grid spacings differ")
    Kd = _dagger(K.K)
    out = np.empty_like(alpha.alpha)
    for a in range(4):
        dK = central_diff(K.K, a, alpha.h)
        out[..., a, :, :] = K.K @ alpha.alpha[..., a, :, :] @ Kd - dK @ Kd
    return ConnectionField(project_antihermitian(out), alpha.h)


def invariant_scalar(F: FieldStrength) -> np.ndarray:
    """``s = sum_ab eta^aa eta^bb tr(F_ab F_ab)`` per node (real)."""
    d = np.diag(ETA)
    w = np.outer(d, d)
    tr = np.einsum("...abij,...abji->...ab", F.F, F.F)
    return np.einsum("ab,...ab->...", w, tr).real


# --------------------------------------------------------------------------- #
#                            smooth random samples                            #
# --------------------------------------------------------------------------- #


def grid_coordinates(N: int) -> tuple[np.ndarray, float]:
    """Node coordinates ``(N, N, N, N, 4)`` of the periodic box and its spacing."""
    h = 2 * np.pi / N
    x = np.arange(N) * h
    X = np.stack(np.meshgrid(x, x, x, x, indexing="ij"), axis=-1)
    return X, h


def _smooth_scalars(rng: np.random.Generator, X: np.ndarray, count: int, n_modes: int = 2) -> np.ndarray:
    # sum of low-frequency plane waves with random phases, shape (..., count)
    out = np.zeros(X.shape[:-1] + (count,))
    for c in range(count):
        for _ in range(n_modes):
            kvec = rng.integers(-1, 2, size=4)
            if not kvec.any():
                kvec[rng.integers(4)] = 1
            out[..., c] += rng.uniform(-1, 1) * np.sin(X @ kvec + rng.uniform(0, 2 * np.pi))
    return out


def random_antihermitian(rng: np.random.Generator, n: int, size=()) -> np.ndarray:
    """Random anti-Hermitian matrices with unit Frobenius norm."""
    z = rng.standard_normal(tuple(size) + (n, n)) + 1j * rng.standard_normal(tuple(size) + (n, n))
    z = project_antihermitian(z)
    return z / np.linalg.norm(z, axis=(-2, -1), keepdims=True)


def random_smooth_connection(rng: np.random.Generator, N: int, n: int, amplitude: float = 0.5) -> ConnectionField:
    X, h = grid_coordinates(N)
    gens = random_antihermitian(rng, n, (4, n * n))
    coeff = _smooth_scalars(rng, X, 4 * n * n).reshape(X.shape[:-1] + (4, n * n))
    alpha = (amplitude / n) * np.einsum("...ag,agij->...aij", coeff, gens)
    return ConnectionField(project_antihermitian(alpha), h)


def unitary_from_hermitian(H: np.ndarray) -> np.ndarray:
    """``exp(i H)`` for a batch of Hermitian matrices."""
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * w)[..., None, :]) @ _dagger(V)


def random_smooth_gauge(rng: np.random.Generator, N: int, n: int, amplitude: float = 0.5) -> GaugeTransformField:
    X, h = grid_coordinates(N)
    gens = 1j * random_antihermitian(rng, n, (n * n,))
    coeff = _smooth_scalars(rng, X, n * n)
    H = (amplitude / n) * np.einsum("...g,gij->...ij", coeff, gens)
    H = 0.5 * (H + _dagger(H))
    return GaugeTransformField(unitary_from_hermitian(H), h)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    H = 1j * random_antihermitian(rng, n)
    return unitary_from_hermitian(0.5 * (H + H.conj().T))


def abelian_pure_gauge(f: np.ndarray, h: float, xi0: np.ndarray) -> ConnectionField:
    """``alpha_a = (d_a f) xi0`` for a scalar field ``f`` and fixed ``xi0`` in the algebra."""
    xi0 = np.asarray(xi0, dtype=complex)
    grads = np.stack([central_diff(f, a, h) for a in range(4)], axis=-1)
    return ConnectionField(grads[..., None, None] * xi0, h)


def invariant_scalar_of(alpha: ConnectionField) -> np.ndarray:
    """``invariant_scalar(curvature(alpha))`` without storing all of ``F``."""
    a = alpha.alpha
    d = np.diag(ETA)
    s = np.zeros(alpha.dims)
    for i in range(4):
        for j in range(i + 1, 4):
            f = central_diff(a[..., j, :, :], i, alpha.h) - central_diff(a[..., i, :, :], j, alpha.h)
            f = project_antihermitian(f + commutator(a[..., i, :, :], a[..., j, :, :]))
            s += 2.0 * d[i] * d[j] * np.einsum("...ij,...ji->...", f, f).real
    return s


def gauge_drift(alpha: ConnectionField, K: GaugeTransformField, norm: str = "rms") -> float:
    """Size of ``s(alpha) - s(alpha')`` over the grid (``"rms"`` or ``"max"``)."""
    diff = invariant_scalar_of(alpha) - invariant_scalar_of(gauge_transform(alpha, K))
    if norm == "max":
        return float(np.max(np.abs(diff)))
    return float(np.sqrt(np.mean(diff**2)))


def loglog_slope(h, err) -> float:
    """Least-squares slope of ``log err`` against ``log h``."""
    return float(np.polyfit(np.log(np.asarray(h)), np.log(np.asarray(err)), 1)[0])


def refinement_study(seed: int, sizes=(16, 20, 24), n: int = 2, amplitude: float = 0.5, norm: str = "rms"):
    """Gauge-drift of the invariant scalar on a sequence of grids.

    The same smooth fields (fixed random modes) are sampled at every ``N``.
    The RMS drift approximates an integral over the chart and so does not
    depend on which nodes a given grid happens to hit.
    Returns ``(h_values, drifts, slope)``.
    """
    hs, errs = [], []
    for N in sizes:
        rng = np.random.default_rng(seed)
        alpha = random_smooth_connection(rng, N, n, amplitude)
        K = random_smooth_gauge(rng, N, n, amplitude)
        hs.append(alpha.h)
        errs.append(gauge_drift(alpha, K, norm))
    return hs, errs, loglog_slope(hs, errs)


# --------------------------------------------------------------------------- #
#                         products and radiative classes                      #
# --------------------------------------------------------------------------- #


def barwedge(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """``(alpha ^bar beta)_ab`` for algebra-valued covectors of shape ``(4, n, n)``."""
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    if alpha.shape != beta.shape or alpha.ndim != 3 or alpha.shape[0] != 4:
        raise ValueError("barwedge needs two (4, n, n) covectors of the same algebra")
    ab = np.einsum("aij,bjk->abik", alpha, beta)
    ba = np.einsum("bij,ajk->abik", beta, alpha)
    c = ab - ba  # [alpha_a, beta_b]
    return 0.5 * (c - np.swapaxes(c, 0, 1))


def barwedge_structure(alpha_c: np.ndarray, beta_c: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Component form ``(c^i_jk alpha^j_a beta^k_b - (a<->b)) / 2``; shapes ``(4, d)`` -> ``(4, 4, d)``."""
    alpha_c = np.asarray(alpha_c)
    beta_c = np.asarray(beta_c)
    if alpha_c.shape != beta_c.shape or alpha_c.shape[1] != c.shape[0]:
        raise ValueError("dimension mismatch between components and structure constants")
    t = np.einsum("ijk,aj,bk->abi", c, alpha_c, beta_c)
    return 0.5 * (t - np.swapaxes(t, 0, 1))


@dataclass(frozen=True, eq=False)
class RadiativeGaugeClass:
    """A null covector ``k`` and a constant horizontal algebra-valued covector ``alpha``."""

    k: NullCovector
    alpha: np.ndarray  # (4, n, n), lower form index

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=complex)
        if a.ndim != 3 or a.shape[0] != 4:
            raise ValueError("alpha must have shape (4, n, n)")
        contraction = np.einsum("a,aij->ij", ETA @ self.k.k, a)
        if np.max(np.abs(contraction)) > 1e-12 * max(1.0, np.max(np.abs(a))):
            raise ValueError("horizontality violated: k# contracted with alpha is nonzero")
        object.__setattr__(self, "alpha", a)

    def shifted(self, chi: np.ndarray) -> "RadiativeGaugeClass":
        """``(k, alpha + k (x) chi)``."""
        return RadiativeGaugeClass(self.k, self.alpha + np.einsum("a,ij->aij", self.k.k, chi))


def wedge_k(k: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """``(k ^ alpha)_ab = k_a alpha_b - k_b alpha_a``."""
    t = np.einsum("a,bij->abij", k, alpha)
    return t - np.swapaxes(t, 0, 1)


def rho(kc: RadiativeGaugeClass) -> np.ndarray:
    """``rho[k, alpha] = i k ^ alpha + alpha ^bar alpha``, shape ``(4, 4, n, n)``."""
    return 1j * wedge_k(kc.k.k, kc.alpha) + barwedge(kc.alpha, kc.alpha)


def rho_shift_discrepancy(kc: RadiativeGaugeClass, chi: np.ndarray) -> float:
    """``max |rho[k, alpha + k chi] - rho[k, alpha]|``; zero for an abelian algebra."""
    return float(np.max(np.abs(rho(kc.shifted(chi)) - rho(kc))))


def horizontal_projection(k: NullCovector, alpha: np.ndarray) -> np.ndarray:
    """Remove the part of ``alpha`` not annihilated by ``k#``, using a transverse auxiliary."""
    k_up = ETA @ k.k
    # auxiliary covector n with n(k#) = 1: the time covector scaled
    n = np.array([1.0, 0, 0, 0]) / k_up[0]
    c = np.einsum("a,aij->ij", k_up, alpha)
    return alpha - np.einsum("a,ij->aij", n, c)


def class_equivalent(c1: RadiativeGaugeClass, c2: RadiativeGaugeClass, atol: float = 1e-10) -> bool:
    """Whether ``c2.alpha - c1.alpha = k (x) chi`` for some ``chi`` (least-squares residual test)."""
    if not np.allclose(c1.k.k, c2.k.k, rtol=0, atol=1e-14):
        raise ValueError("classes have different null covectors")
    k = c1.k.k
    D = c2.alpha - c1.alpha
    chi = np.einsum("a,aij->ij", k, D) / (k @ k)
    resid = np.max(np.abs(D - np.einsum("a,ij->aij", k, chi)), initial=0.0)
    scale = max(1.0, np.max(np.abs(c1.alpha)), np.max(np.abs(c2.alpha)))
    return bool(resid < atol * scale)


# --------------------------------------------------------------------------- #
#                 dilaton / electromagnetic parts of a spinor connection      #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True, eq=False)
class DilatonEMDecomposition:
    G: np.ndarray  # (..., 4)
    Y: np.ndarray  # (..., 4)
    Gamma_tilde: np.ndarray  # (..., 4, 2, 2)
    dG: np.ndarray  # (..., 4, 4)
    F_em: np.ndarray  # (..., 4, 4), 2 dY
    flatness_residual: float


def exterior_derivative(A: np.ndarray, h: float) -> np.ndarray:
    """``(dA)_ab = d_a A_b - d_b A_a`` for a covector field ``(N0, N1, N2, N3, 4)``."""
    out = np.zeros(A.shape + (4,), dtype=A.dtype)
    for a in range(4):
        for b in range(4):
            if a != b:
                out[..., a, b] = central_diff(A[..., b], a, h) - central_diff(A[..., a], b, h)
    return out


def decompose_internal_dilaton_em(Gamma: SpinorConnectionCoefficients, h: float) -> DilatonEMDecomposition:
    """Per-node split of a spinor connection grid ``(N0, N1, N2, N3, 4, 2, 2)``."""
    g = np.asarray(Gamma.gamma)
    if g.ndim != 7 or g.shape[4] != 4:
        raise GridError("spinor connection grid must have shape (N0,N1,N2,N3,4,2,2)")
    _check_grid(g.shape[:4], h)
    G, Y, Gt = decompose_spinor_connection(Gamma)
    dG = exterior_derivative(G, h)
    F_em = 2.0 * exterior_derivative(Y, h)
    return DilatonEMDecomposition(G, Y, Gt, dG, F_em, float(np.max(np.abs(dG))))


# --------------------------------------------------------------------------- #
#                                serialization                                #
# --------------------------------------------------------------------------- #

_MAGIC = b"TSGF"
_KINDS = {"connection": 0, "transform": 1, "strength": 2}
_KIND_NAMES = {v: k for k, v in _KINDS.items()}
_HEADER = struct.Struct("<4sIIIIIId")


def _field_payload(field):
    if isinstance(field, ConnectionField):
        return "connection", field.alpha, field.h
    if isinstance(field, GaugeTransformField):
        return "transform", field.K, field.h
    if isinstance(field, FieldStrength):
        return "strength", field.F, field.h
    raise TypeError(f"cannot serialize {type(field).__name__}")


def _rebuild(kind: str, data: np.ndarray, h: float):
    if kind == "connection":
        return ConnectionField(data, h)
    if kind == "transform":
        return GaugeTransformField(data, h)
    return FieldStrength(data, h)


def _trailing_shape(kind: str, n: int):
    return {"connection": (4, n, n), "transform": (n, n), "strength": (4, 4, n, n)}[kind]


def to_bytes(field) -> bytes:
    """Header ``(magic, kind, dims, n, h)`` then row-major little-endian complex pairs."""
    kind, data, h = _field_payload(field)
    dims = data.shape[:4]
    n = data.shape[-1]
    header = _HEADER.pack(_MAGIC, _KINDS[kind], *dims, n, h)
    body = np.ascontiguousarray(data, dtype="<c16").view("<f8").tobytes()
    return header + body


def from_bytes(blob: bytes):
    magic, kind_id, n0, n1, n2, n3, n, h = _HEADER.unpack_from(blob)
    if magic != _MAGIC:
        raise ValueError("not a gauge-field blob")
    kind = _KIND_NAMES[kind_id]
    shape = (n0, n1, n2, n3) + _trailing_shape(kind, n)
    flat = np.frombuffer(blob, dtype="<f8", offset=_HEADER.size)
    if flat.size != 2 * int(np.prod(shape)):
        raise ValueError("blob body does not match its header")
    data = flat.view("<c16").reshape(shape).astype(complex)
    return _rebuild(kind, data, h)


def to_json(field) -> str:
    kind, data, h = _field_payload(field)
    doc = {
        "kind": kind,
        "dims": list(data.shape[:4]),
        "n": data.shape[-1],
        "h": h,
        "re": data.real.tolist(),
        "im": data.imag.tolist(),
    }
    return json.dumps(doc, sort_keys=True)


def from_json(text: str):
    doc = json.loads(text)
    data = np.array(doc["re"], dtype=float) + 1j * np.array(doc["im"], dtype=float)
    expected = tuple(doc["dims"]) + _trailing_shape(doc["kind"], doc["n"])
    if data.shape != expected:
        raise ValueError("JSON field data does not match its declared shape")
    return _rebuild(doc["kind"], data, doc["h"])
