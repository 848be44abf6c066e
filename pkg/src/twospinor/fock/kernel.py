"""The momentum-conserving interaction kernel.

For ``r`` legs with all indices up,

    Lambda^{p' p'' ...} = l^(2r) (2^r p0' p0'' ...)^(-1/2) exp(-i (p0' + p0'' + ...) t) delta(p' + p'' + ...)

and lowering a leg flips the sign of its ``p0`` in the exponential and of its
``p_perp`` in the delta.  Upper legs are emitted particles, lowered legs are
absorbed ones.  On a lattice the delta is the Kronecker delta divided by the
node weight ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .lattice import MomentumLattice


@dataclass(frozen=True)
class KernelLeg:
    species: str
    lowered: bool = False

    @property
    def sign(self) -> int:
        return -1 if self.lowered else 1


@dataclass(frozen=True, eq=False)
class InteractionKernel:
    legs: tuple
    lattice: MomentumLattice
    masses: dict
    l: float = 1.0
    t: float = 0.0

    @property
    def arity(self) -> int:
        return len(self.legs)

    def at(self, t: float) -> "InteractionKernel":
        return replace(self, t=float(t))

    def _check(self, ks):
        if len(ks) != self.arity:
            raise ValueError("one lattice point per leg is required")

    def energies(self, ks) -> np.ndarray:
        self._check(ks)
        out = []
        for leg, k in zip(self.legs, ks):
            p = self.lattice.momentum(k)
            out.append(np.sqrt(self.masses[leg.species] ** 2 + p @ p))
        return np.array(out)

    def conserves(self, ks) -> bool:
        """Lattice momentum conservation with the leg signs."""
        self._check(ks)
        total = np.zeros(3, dtype=int)
        for leg, k in zip(self.legs, ks):
            total += leg.sign * np.asarray(k, dtype=int)
        return not total.any()

    def magnitude(self, ks) -> float:
        """``l^(2r) (2^r prod p0)^(-1/2)``, without the delta."""
        p0 = self.energies(ks)
        if np.any(p0 <= 0):
            raise ValueError("a massless leg sits at zero momentum")
        return float(self.l ** (2 * self.arity) / np.sqrt(2.0**self.arity * np.prod(p0)))

    def phase(self, ks) -> complex:
        p0 = self.energies(ks)
        s = np.array([leg.sign for leg in self.legs])
        return complex(np.exp(-1j * (s @ p0) * self.t))

    def entry(self, ks) -> complex:
        """Full kernel value, including the lattice delta ``Kronecker / w``."""
        if not self.conserves(ks):
            return 0j
        return self.magnitude(ks) * self.phase(ks) / self.lattice.weight

    def lower(self, i: int) -> "InteractionKernel":
        """Move leg ``i`` down (or back up)."""
        legs = list(self.legs)
        legs[i] = KernelLeg(legs[i].species, not legs[i].lowered)
        return replace(self, legs=tuple(legs))


def build_kernel(legs, lattice: MomentumLattice, masses: dict, t: float = 0.0, l: float = 1.0) -> InteractionKernel:
    """Kernel for the given legs; ``legs`` may hold ``KernelLeg`` or ``(species, lowered)`` pairs."""
    legs = tuple(leg if isinstance(leg, KernelLeg) else KernelLeg(*leg) for leg in legs)
    if not legs:
        raise ValueError("a kernel needs at least one leg")
    for leg in legs:
        if leg.species not in masses:
            raise ValueError(f"unknown species {leg.species!r}")
    return InteractionKernel(legs, lattice, dict(masses), float(l), float(t))
