"""Particle modes, occupation configurations and ladder operators.

A configuration is a pair ``(fermions, bosons)``: a sorted tuple of occupied
fermionic modes and a sorted tuple of ``(mode, count)`` for bosons.  The
fermionic state it names is ``a+_{m1} a+_{m2} ... |0>`` with ``m1 < m2 < ...``,
so creating mode ``m`` costs the sign ``(-1)^(number of occupied modes
before m)``.  Bosonic states are normalized, ``prod (a+)^n / sqrt(n!) |0>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

FERMION = "fermion"
BOSON = "boson"


@dataclass(frozen=True)
class Species:
    name: str
    mass: float
    statistics: str
    internal_dim: int = 2
    charge: int = 0

    def __post_init__(self):
        if self.statistics not in (FERMION, BOSON):
            raise ValueError("statistics must be 'fermion' or 'boson'")
        if self.mass < 0:
            raise ValueError("mass must be nonnegative")
        if self.internal_dim < 1:
            raise ValueError("internal dimension must be positive")


def qed_species(fermion_mass: float = 1.0, boson_mass: float = 0.0) -> dict:
    """Electron, positron and a (possibly massive) vector boson with two transverse states."""
    if not fermion_mass > 0:
        raise ValueError("the Dirac splitting needs a positive fermion mass")
    return {
        "electron": Species("electron", fermion_mass, FERMION, 2, -1),
        "positron": Species("positron", fermion_mass, FERMION, 2, 1),
        "photon": Species("photon", boson_mass, BOSON, 2, 0),
    }


@dataclass(frozen=True, order=True)
class ParticleMode:
    species: str
    k: tuple
    a: int  # internal index (spin or polarisation)

    def __repr__(self) -> str:
        return f"{self.species}{list(self.k)}:{self.a}"


class Config(NamedTuple):
    fermions: tuple = ()
    bosons: tuple = ()

    def n_particles(self) -> int:
        return len(self.fermions) + sum(c for _, c in self.bosons)

    def modes(self):
        """Every occupied mode, bosons repeated by their count."""
        out = list(self.fermions)
        for m, c in self.bosons:
            out.extend([m] * c)
        return out

    def count(self, mode: ParticleMode) -> int:
        if mode in self.fermions:
            return 1
        for m, c in self.bosons:
            if m == mode:
                return c
        return 0

    def to_json(self) -> list:
        return [[m.species, list(m.k), m.a] for m in self.modes()]


VACUUM = Config()


def create(mode: ParticleMode, cfg: Config, statistics: str):
    """``a+_mode |cfg>`` as ``(factor, cfg')``, or ``None`` for zero."""
    if statistics == FERMION:
        occ = cfg.fermions
        if mode in occ:
            return None
        before = sum(1 for m in occ if m < mode)
        new = tuple(sorted(occ + (mode,)))
        return (-1.0 if before % 2 else 1.0), Config(new, cfg.bosons)
    bos = dict(cfg.bosons)
    n = bos.get(mode, 0)
    bos[mode] = n + 1
    return float(np.sqrt(n + 1)), Config(cfg.fermions, tuple(sorted(bos.items())))


def annihilate(mode: ParticleMode, cfg: Config, statistics: str):
    """``a_mode |cfg>`` as ``(factor, cfg')``, or ``None`` for zero."""
    if statistics == FERMION:
        occ = cfg.fermions
        if mode not in occ:
            return None
        before = sum(1 for m in occ if m < mode)
        new = tuple(m for m in occ if m != mode)
        return (-1.0 if before % 2 else 1.0), Config(new, cfg.bosons)
    bos = dict(cfg.bosons)
    n = bos.get(mode, 0)
    if n == 0:
        return None
    if n == 1:
        del bos[mode]
    else:
        bos[mode] = n - 1
    return float(np.sqrt(n)), Config(cfg.fermions, tuple(sorted(bos.items())))


def config_from_modes(modes, statistics_of) -> Config:
    """The configuration ``a+_{m1} ... a+_{mn} |0>`` up to its sign and norm.

    Returns ``(factor, cfg)`` where ``a+_{m1} ... a+_{mn} |0> = factor |cfg>``;
    ``factor`` is 0 if a fermionic mode repeats.
    """
    factor = 1.0
    cfg = VACUUM
    for m in reversed(list(modes)):
        r = create(m, cfg, statistics_of(m))
        if r is None:
            return 0.0, cfg
        f, cfg = r
        factor *= f
    return factor, cfg


@dataclass
class FockState:
    """Finite superposition ``sum c |cfg>`` with a particle-number cap."""

    amplitudes: dict = field(default_factory=dict)
    n_max: int | None = None

    def __post_init__(self):
        if self.n_max is not None:
            for cfg in self.amplitudes:
                if cfg.n_particles() > self.n_max:
                    raise ValueError("configuration exceeds the truncation")

    @classmethod
    def basis(cls, cfg: Config, n_max: int | None = None) -> "FockState":
        return cls({cfg: 1.0 + 0j}, n_max)

    @classmethod
    def vacuum(cls, n_max: int | None = None) -> "FockState":
        return cls.basis(VACUUM, n_max)

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(c) ** 2 for c in self.amplitudes.values())))

    def inner(self, other: "FockState") -> complex:
        """``<self|other>``."""
        return complex(sum(np.conj(c) * other.amplitudes.get(k, 0) for k, c in self.amplitudes.items()))

    def add(self, cfg: Config, c: complex) -> None:
        self.amplitudes[cfg] = self.amplitudes.get(cfg, 0) + c

    def apply(self, op, mode: ParticleMode, statistics: str) -> tuple["FockState", float]:
        """Apply ``create`` or ``annihilate``; returns the new state and the dropped weight."""
        out = FockState({}, self.n_max)
        dropped = 0.0
        for cfg, c in self.amplitudes.items():
            r = op(mode, cfg, statistics)
            if r is None:
                continue
            f, new = r
            if self.n_max is not None and new.n_particles() > self.n_max:
                dropped += abs(f * c) ** 2
                continue
            out.add(new, f * c)
        return out, dropped
