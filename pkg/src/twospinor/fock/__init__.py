"""Desk-scale Fock space: lattices, ladder operators, the QED interaction and its evolution."""

from .dynamics import (
    EvolutionOperator,
    ScatteringAmplitude,
    dyson_second_order,
    evolve,
    first_order_integral,
    scattering_amplitude,
    second_order_integral,
    step_halving_ratio,
    t_sweep,
)
from .hamiltonian import FockHamiltonian, FockModel, apply_V, assemble_hamiltonian, truncated_basis
from .kernel import InteractionKernel, KernelLeg, build_kernel
from .lattice import MomentumLattice, basis_semidensity, generalized_contract, leray_weight
from .scenario import ScenarioError, demo_names, load_demo, load_scenario, run_scenario
from .states import VACUUM, Config, FockState, ParticleMode, Species, annihilate, config_from_modes, create

__all__ = [
    "VACUUM",
    "Config",
    "EvolutionOperator",
    "FockHamiltonian",
    "FockModel",
    "FockState",
    "InteractionKernel",
    "KernelLeg",
    "MomentumLattice",
    "ParticleMode",
    "ScatteringAmplitude",
    "ScenarioError",
    "Species",
    "annihilate",
    "apply_V",
    "assemble_hamiltonian",
    "basis_semidensity",
    "build_kernel",
    "config_from_modes",
    "create",
    "demo_names",
    "dyson_second_order",
    "evolve",
    "first_order_integral",
    "generalized_contract",
    "leray_weight",
    "load_demo",
    "load_scenario",
    "run_scenario",
    "scattering_amplitude",
    "second_order_integral",
    "step_halving_ratio",
    "t_sweep",
    "truncated_basis",
]
