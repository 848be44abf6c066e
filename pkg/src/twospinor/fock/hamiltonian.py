"""Assembly of the interaction Hamiltonian from the vertex and the kernel.

Every QED vertex descriptor contributes

    coef = l_int(phi, A, psi) * Lambda-magnitude * w^(r/2 - 1) * (ladder factors)

with ``psi``, ``A``, ``phi`` the free internal states of the three legs and
the ladder operators applied in the order ``O_phi O_gamma O_psi`` (the
``psi`` slot acts first).  The factor ``w^(r/2)`` converts the generalized
basis to unit-normalized lattice modes; together with the ``1/w`` of the
lattice delta it leaves ``w^(r/2 - 1)``.

The time dependence is the kernel phase, which on matrix elements reads
``<f| h(t) |i> = exp(-i (E_f - E_i) t) <f| V |i>`` with ``E`` the free
energy of a configuration.  Absorbed modes are always taken from the
configuration acted on, so the vertex is normal ordered.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from ..dirac import OnShellMomentum, dirac_frame_at
from ..optical import hvector_of, transverse_modes
from ..spinors import DIRAC_FORM, clifford, pauli_basis
from ..vertex import VertexDescriptor, enumerate_vertices
from .kernel import build_kernel
from .lattice import MomentumLattice
from .states import BOSON, FERMION, Config, ParticleMode, annihilate, create, qed_species

# M[l] = K gamma[tau_l]: l_int(phi, A, psi) = -e sum_l A^l phi^H M[l] psi
_PAIRING_GAMMA = np.array([DIRAC_FORM @ clifford(t).matrix for t in pauli_basis()])


@dataclass(frozen=True, eq=False)
class FockModel:
    lattice: MomentumLattice = field(default_factory=MomentumLattice)
    fermion_mass: float = 1.0
    boson_mass: float = 0.0
    coupling: float = 1.0
    l: float = 1.0
    n_max: int = 4
    descriptors: tuple = field(default_factory=lambda: tuple(enumerate_vertices()))

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")
        if not np.isfinite(self.coupling):
            raise ValueError("coupling must be finite")

    @cached_property
    def species(self) -> dict:
        return qed_species(self.fermion_mass, self.boson_mass)

    @cached_property
    def masses(self) -> dict:
        return {k: s.mass for k, s in self.species.items()}

    def statistics(self, mode: ParticleMode) -> str:
        return self.species[mode.species].statistics

    def energy(self, mode: ParticleMode) -> float:
        p = self.lattice.momentum(mode.k)
        return float(np.sqrt(self.masses[mode.species] ** 2 + p @ p))

    def config_energy(self, cfg: Config) -> float:
        return float(sum(self.energy(m) for m in cfg.modes()))

    def config_momentum(self, cfg: Config) -> np.ndarray:
        return np.sum([np.asarray(m.k) for m in cfg.modes()], axis=0) if cfg.n_particles() else np.zeros(3, int)

    def is_valid_mode(self, mode: ParticleMode) -> bool:
        if mode.species not in self.species or not self.lattice.contains(mode.k):
            return False
        if not 0 <= mode.a < self.species[mode.species].internal_dim:
            return False
        return self.masses[mode.species] > 0 or any(mode.k)

    # -- free internal states ------------------------------------------------

    @cached_property
    def _frames(self) -> dict:
        return {}

    def dirac_spinor(self, species: str, k) -> np.ndarray:
        """Weyl components of ``u_a(p)`` (electron) or ``v_a(p)`` (positron), rows ``a``."""
        key = (species, tuple(k))
        if key not in self._frames:
            fr = dirac_frame_at(OnShellMomentum(self.fermion_mass, self.lattice.momentum(k)))
            self._frames[("electron", tuple(k))] = np.array([s.w for s in fr.u])
            self._frames[("positron", tuple(k))] = np.array([s.w for s in fr.v])
        return self._frames[key]

    @cached_property
    def _pols(self) -> dict:
        return {}

    def polarization(self, k) -> np.ndarray:
        """Contravariant components of ``b_a#`` for the absorbed boson, rows ``a``."""
        k = tuple(k)
        if k not in self._pols:
            bp, bm = transverse_modes(self.lattice.momentum(k), self.boson_mass)
            self._pols[k] = np.array([hvector_of(b).components() for b in (bp, bm)])
        return self._pols[k]

    def ell(self, phi: np.ndarray, A: np.ndarray, psi: np.ndarray) -> complex:
        """``l_int = -e <phibar, gamma[A#] psi>`` from Weyl components and ``A#`` components."""
        return complex(-self.coupling * (A @ (phi.conj() @ _PAIRING_GAMMA @ psi)))

    def kernel_factor(self, e_psi: float, e_gamma: float, e_phi: float) -> float:
        """``l^6 (8 p0 p0 p0)^(-1/2) w^(1/2)``."""
        w = self.lattice.weight
        return float(self.l**6 / np.sqrt(8.0 * e_psi * e_gamma * e_phi) * np.sqrt(w))

    def kernel_for(self, d: VertexDescriptor, t: float = 0.0):
        """The kernel of a descriptor: legs psi, photon, phi, absorbed legs lowered."""
        legs = [(sp_, direction == "absorb") for sp_, direction, _ in d.legs()]
        return build_kernel(legs, self.lattice, self.masses, t, self.l)


# --------------------------------------------------------------------------- #
#                           action on configurations                          #
# --------------------------------------------------------------------------- #


def _slot_plan(d: VertexDescriptor):
    # (species, absorbed?) in application order psi, photon, phi
    return (
        ("electron", True) if d.psi == "absorb_electron" else ("positron", False),
        ("photon", d.photon == "absorb"),
        ("positron", True) if d.phi == "absorb_positron" else ("electron", False),
    )


def _occupied(cfg: Config, species: str):
    if species == "photon":
        return [m for m, _ in cfg.bosons if m.species == species]
    return [m for m in cfg.fermions if m.species == species]


def _free_momenta(model: FockModel, total: np.ndarray, n_free: int):
    """All lattice assignments of ``n_free`` momenta summing to ``total``."""
    pts = model.lattice.points
    if n_free == 0:
        if not total.any():
            yield ()
        return
    if n_free == 1:
        k = tuple(int(c) for c in total)
        if model.lattice.contains(k):
            yield (k,)
        return
    for k1 in pts:
        for rest in _free_momenta(model, total - np.asarray(k1), n_free - 1):
            yield (k1,) + rest


@dataclass
class VAction:
    """``V |cfg>`` split into kept and overflowing (``> n_max``) configurations."""

    kept: dict
    overflow: dict


def apply_V(model: FockModel, cfg: Config, descriptors=None) -> VAction:
    kept: dict = {}
    overflow: dict = {}
    descriptors = model.descriptors if descriptors is None else descriptors
    for d in descriptors:
        plan = _slot_plan(d)
        absorbed_choices = [_occupied(cfg, s) if absorb else [None] for s, absorb in plan]
        for m_psi in absorbed_choices[0]:
            for m_gam in absorbed_choices[1]:
                for m_phi in absorbed_choices[2]:
                    fixed = (m_psi, m_gam, m_phi)
                    total = np.zeros(3, dtype=int)
                    for m in fixed:
                        if m is not None:
                            total += np.asarray(m.k)
                    free_slots = [i for i, m in enumerate(fixed) if m is None]
                    for ks in _free_momenta(model, total, len(free_slots)):
                        _emit_terms(model, cfg, plan, fixed, free_slots, ks, kept, overflow)
    return VAction(kept, overflow)


def _emit_terms(model, cfg, plan, fixed, free_slots, ks, kept, overflow):
    mom = [m.k if m is not None else None for m in fixed]
    for i, k in zip(free_slots, ks):
        mom[i] = k
    if model.boson_mass == 0 and not any(mom[1]):
        return
    e = [np.sqrt(model.masses[plan[i][0]] ** 2 + np.sum(model.lattice.momentum(mom[i]) ** 2)) for i in range(3)]
    kfac = model.kernel_factor(*e)
    sp_psi = model.dirac_spinor(plan[0][0], mom[0])
    sp_phi = model.dirac_spinor(plan[2][0], mom[2])
    pol = model.polarization(mom[1])
    ranges = [[fixed[i].a] if fixed[i] is not None else range(2) for i in range(3)]
    for a_psi in ranges[0]:
        for a_gam in ranges[1]:
            A = pol[a_gam] if plan[1][1] else pol[a_gam].conj()
            for a_phi in ranges[2]:
                modes = (
                    ParticleMode(plan[0][0], mom[0], a_psi),
                    ParticleMode("photon", mom[1], a_gam),
                    ParticleMode(plan[2][0], mom[2], a_phi),
                )
                factor = 1.0
                state = cfg
                for (species, absorb), m in zip(plan, modes):
                    stat = BOSON if species == "photon" else FERMION
                    r = annihilate(m, state, stat) if absorb else create(m, state, stat)
                    if r is None:
                        factor = 0.0
                        break
                    f, state = r
                    factor *= f
                if factor == 0.0:
                    continue
                coef = factor * kfac * model.ell(sp_phi[a_phi], A, sp_psi[a_psi])
                if coef == 0:
                    continue
                target = overflow if state.n_particles() > model.n_max else kept
                target[state] = target.get(state, 0) + coef


# --------------------------------------------------------------------------- #
#                           truncated basis and matrix                        #
# --------------------------------------------------------------------------- #


def truncated_basis(model: FockModel, start, depth: int):
    """Configurations reachable from ``start`` within ``depth`` vertex applications.

    Returns ``(basis, levels, actions)``: the ordered basis, the depth of each
    configuration and ``V`` applied to every configuration of depth < ``depth``.
    """
    start = [start] if isinstance(start, Config) else list(start)
    levels = {c: 0 for c in start}
    order = list(start)
    actions = {}
    queue = deque(start)
    while queue:
        c = queue.popleft()
        if levels[c] >= depth:
            continue
        act = apply_V(model, c)
        actions[c] = act
        for c2 in act.kept:
            if c2 not in levels:
                levels[c2] = levels[c] + 1
                order.append(c2)
                queue.append(c2)
    return order, levels, actions


@dataclass(eq=False)
class FockHamiltonian:
    """``h(t) = exp(-i E t) V exp(i E t)`` on a truncated basis."""

    model: FockModel
    basis: list
    V: sp.csr_matrix
    energies: np.ndarray
    overflow_weight: float
    asymmetry: float

    @cached_property
    def index(self) -> dict:
        return {c: i for i, c in enumerate(self.basis)}

    @cached_property
    def _coo(self):
        coo = self.V.tocoo()
        return coo.row, coo.col, coo.data, self.energies[coo.row] - self.energies[coo.col]

    def at(self, t: float) -> sp.csr_matrix:
        r, c, data, dE = self._coo
        n = len(self.basis)
        return sp.csr_matrix((data * np.exp(-1j * dE * t), (r, c)), shape=(n, n))

    __call__ = at

    def vector(self, state) -> np.ndarray:
        """Dense amplitude vector of a configuration or ``{cfg: amp}`` map."""
        v = np.zeros(len(self.basis), dtype=complex)
        items = {state: 1.0}.items() if isinstance(state, Config) else state.items()
        for cfg, amp in items:
            v[self.index[cfg]] += amp
        return v

    def momentum_conserving(self) -> bool:
        coo = self.V.tocoo()
        for r, c in zip(coo.row, coo.col):
            if not np.array_equal(self.model.config_momentum(self.basis[r]), self.model.config_momentum(self.basis[c])):
                return False
        return True


def assemble_hamiltonian(model: FockModel, start, depth: int = 1, symmetrize: bool = False) -> FockHamiltonian:
    """Truncated ``h`` around ``start``.

    A vertex changes the particle number by an odd amount, so configurations
    at equal depth never couple; ``V`` on the depth-limited basis is therefore
    fixed by its action on the interior plus Hermitian conjugation.
    ``asymmetry`` is ``max |V - V^dagger|`` measured on interior columns,
    before any symmetrization.
    """
    basis, levels, actions = truncated_basis(model, start, depth)
    idx = {c: i for i, c in enumerate(basis)}
    n = len(basis)
    rows, cols, vals = [], [], []
    overflow = 0.0
    for c, act in actions.items():
        j = idx[c]
        for c2, v in act.kept.items():
            rows.append(idx[c2])
            cols.append(j)
            vals.append(v)
        overflow += sum(abs(v) ** 2 for v in act.overflow.values())
    raw = sp.csr_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(n, n))
    interior = np.array([levels[c] < depth for c in basis])
    both = sp.diags(interior.astype(float))
    block = both @ raw @ both
    asym = float(np.max(np.abs((block - block.conj().T).data), initial=0.0))
    # complete boundary columns from the interior rows by conjugation
    boundary_rows = sp.diags((~interior).astype(float)) @ raw
    V = raw + boundary_rows.conj().T
    if symmetrize:
        V = 0.5 * (V + V.conj().T)
    V = sp.csr_matrix(V)
    V.eliminate_zeros()
    E = np.array([model.config_energy(c) for c in basis])
    return FockHamiltonian(model, basis, V, E, overflow, asym)
