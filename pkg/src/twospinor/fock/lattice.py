"""Finite momentum lattices standing in for mass shells.

A lattice is ``Delta Z^3 cap [-L, L]^3`` with quadrature weight
``w = Delta^3`` per node.  Lattice points are addressed by integer triples
``k``; the momentum is ``p_perp = Delta k``.

Generalized (delta-like) basis semi-densities become ``delta / w`` on a node,
their duals plain Kronecker deltas, so ``sum_p w conj(f) g`` reproduces the
continuum contraction rule.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class MomentumLattice:
    spacing: float = 1.0
    half_extent: float = 2.0

    def __post_init__(self):
        if not self.spacing > 0:
            raise ValueError("lattice spacing must be positive")
        if self.half_extent < 0:
            raise ValueError("half extent must be nonnegative")

    @property
    def kmax(self) -> int:
        return int(np.floor(self.half_extent / self.spacing + 1e-9))

    @property
    def weight(self) -> float:
        return self.spacing**3

    @cached_property
    def points(self) -> tuple:
        """Integer triples, lexicographically ordered."""
        r = range(-self.kmax, self.kmax + 1)
        return tuple(itertools.product(r, r, r))

    @cached_property
    def index(self) -> dict:
        return {k: i for i, k in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def contains(self, k) -> bool:
        return all(abs(c) <= self.kmax for c in k)

    def momentum(self, k) -> np.ndarray:
        return self.spacing * np.asarray(k, dtype=float)

    def momenta(self) -> np.ndarray:
        return self.spacing * np.array(self.points, dtype=float)


def leray_weight(p0: float, lattice: MomentumLattice) -> float:
    """Discrete Leray form ``w / (2 p0)`` at a node with energy ``p0``."""
    if not p0 > 0:
        raise ValueError("on-shell energy must be positive")
    return lattice.weight / (2.0 * p0)


def generalized_contract(f: np.ndarray, g: np.ndarray, lattice: MomentumLattice) -> complex:
    """``sum_p w conj(f_a(p)) g^a(p)`` for arrays of shape ``(len(lattice), dim)``."""
    f = np.asarray(f)
    g = np.asarray(g)
    if f.shape != g.shape or f.shape[0] != len(lattice):
        raise ValueError("semi-densities live on different lattices")
    return complex(lattice.weight * np.vdot(f, g))


def basis_semidensity(lattice: MomentumLattice, k, alpha: int, dim: int, dual: bool = False) -> np.ndarray:
    """``B_{k alpha}`` (value ``1/w`` at the node) or, with ``dual``, ``B^{k alpha}`` (value 1)."""
    out = np.zeros((len(lattice), dim), dtype=complex)
    out[lattice.index[tuple(k)], alpha] = 1.0 if dual else 1.0 / lattice.weight
    return out
