"""Scenario files and scattering reports.

A scenario is a JSON object::

    {
      "name": "...",
      "lattice": {"spacing": 1.0, "half_extent": 2.0},
      "species": {"fermion": {"mass": 1.0}, "boson": {"mass": 0.0}},
      "coupling": 0.1, "l": 1.0, "n_max": 4,
      "window": {"T": 10.0, "sweep": [5.0, 10.0, 20.0]},
      "in":  [["electron", [0, 0, 0], 0]],
      "out": [["electron", [0, 0, 0], 0]],
      "evolve": {"depth": 1, "steps": [25, 50, 100], "symmetrize": false}
    }

Modes are ``[species, lattice triple, internal index]``; ``evolve`` is optional.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .dynamics import dyson_second_order, evolve, loglog_slope, t_sweep
from .hamiltonian import FockModel, assemble_hamiltonian
from .lattice import MomentumLattice
from .states import Config, ParticleMode, config_from_modes


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario."""


def _require(doc: dict, key: str):
    if key not in doc:
        raise ScenarioError(f"scenario is missing {key!r}")
    return doc[key]


def model_from_scenario(doc: dict) -> FockModel:
    lat = doc.get("lattice", {})
    spc = doc.get("species", {})
    try:
        return FockModel(
            lattice=MomentumLattice(float(lat.get("spacing", 1.0)), float(lat.get("half_extent", 2.0))),
            fermion_mass=float(spc.get("fermion", {}).get("mass", 1.0)),
            boson_mass=float(spc.get("boson", {}).get("mass", 0.0)),
            coupling=float(doc.get("coupling", 1.0)),
            l=float(doc.get("l", 1.0)),
            n_max=int(doc.get("n_max", 4)),
        )
    except (TypeError, ValueError) as exc:
        raise ScenarioError(str(exc)) from exc


def config_from_list(model: FockModel, items) -> Config:
    modes = []
    for item in items:
        try:
            species, k, a = item
            mode = ParticleMode(str(species), tuple(int(c) for c in k), int(a))
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"bad mode entry {item!r}") from exc
        if len(mode.k) != 3 or not model.is_valid_mode(mode):
            raise ScenarioError(f"mode {item!r} is not a valid lattice mode")
        modes.append(mode)
    factor, cfg = config_from_modes(modes, model.statistics)
    if factor == 0:
        raise ScenarioError("a fermionic mode is occupied twice")
    if cfg.n_particles() > model.n_max:
        raise ScenarioError("state exceeds the truncation n_max")
    return cfg


def load_scenario(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc


def demo_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files(__package__).joinpath("scenarios").iterdir()
                  if p.name.endswith(".json"))


def load_demo(name: str) -> dict:
    f = resources.files(__package__).joinpath("scenarios", f"{name}.json")
    if not f.is_file():
        raise ScenarioError(f"unknown demo {name!r}; available: {', '.join(demo_names())}")
    return json.loads(f.read_text())


def _finite(x):
    """JSON has no NaN; undefined diagnostics are reported as null."""
    return float(x) if np.isfinite(x) else None


def _c(z: complex) -> dict:
    return {"re": float(np.real(z)), "im": float(np.imag(z)), "abs": float(abs(z))}


def run_scenario(doc: dict) -> dict:
    """Amplitudes, T-sweep, truncation loss and (optionally) evolution diagnostics."""
    model = model_from_scenario(doc)
    cin = config_from_list(model, _require(doc, "in"))
    cout = config_from_list(model, _require(doc, "out"))
    window = doc.get("window", {})
    T = float(window.get("T", 10.0))
    sweep = sorted(set(float(x) for x in window.get("sweep", [T / 2, T, 2 * T])) | {T})
    if min(sweep) <= 0:
        raise ScenarioError("windows must be positive")
    amps = {a.T: a for a in t_sweep(model, cin, cout, sweep)}
    main = amps[T]
    rows = [
        {"T": a.T, "first_abs": abs(a.first), "second_abs": abs(a.second), "total_abs": abs(a.total)}
        for a in amps.values()
    ]
    report = {
        "scenario": doc.get("name", "unnamed"),
        "model": {
            "spacing": model.lattice.spacing,
            "half_extent": model.lattice.half_extent,
            "lattice_points": len(model.lattice),
            "fermion_mass": model.fermion_mass,
            "boson_mass": model.boson_mass,
            "coupling": model.coupling,
            "l": model.l,
            "n_max": model.n_max,
        },
        "in": cin.to_json(),
        "out": cout.to_json(),
        "energy_in": model.config_energy(cin),
        "energy_out": model.config_energy(cout),
        "amplitude": {
            "T": T,
            "zeroth": _c(main.zeroth),
            "first": _c(main.first),
            "second": _c(main.second),
            "total": _c(main.total),
            "n_intermediate": main.n_intermediate,
        },
        "t_sweep": rows,
        "slopes": {
            "first_vs_T": _finite(loglog_slope([r["T"] for r in rows], [r["first_abs"] for r in rows])),
            "second_vs_T": _finite(loglog_slope([r["T"] for r in rows], [r["second_abs"] for r in rows])),
        },
        "truncation": {"dropped_mass": main.dropped_mass, "n_max": model.n_max},
    }
    if "evolve" in doc:
        report["evolution"] = _evolution_report(model, cin, cout, T, doc["evolve"])
    return report


def _evolution_report(model: FockModel, cin: Config, cout: Config, T: float, opts: dict) -> dict:
    depth = int(opts.get("depth", 1))
    steps = [int(s) for s in opts.get("steps", [25, 50, 100])]
    if len(steps) < 3 or min(steps) < 1:
        raise ScenarioError("evolve.steps needs at least three positive step counts")
    H = assemble_hamiltonian(model, cin, depth, symmetrize=bool(opts.get("symmetrize", False)))
    if cout not in H.index:
        raise ScenarioError("out state is not in the truncated basis; raise evolve.depth")
    psi0 = H.vector(cin)
    t0, t1 = -T / 2, T / 2
    runs = [evolve(H, t0, t1, n, psi0) for n in steps]
    errs = [np.linalg.norm(runs[i].matrix - runs[-1].matrix) for i in range(len(runs) - 1)]
    ratio = float(np.linalg.norm(runs[0].matrix - runs[1].matrix) / np.linalg.norm(runs[1].matrix - runs[2].matrix)) \
        if np.linalg.norm(runs[1].matrix - runs[2].matrix) > 0 else float("nan")
    dy = dyson_second_order(H, t0, t1, steps[-1], psi0)
    j = H.index[cout]
    return {
        "basis_size": len(H.basis),
        "depth": depth,
        "nonzeros": int(H.V.nnz),
        "hermiticity_asymmetry": H.asymmetry,
        "momentum_conserving": H.momentum_conserving(),
        "steps": steps,
        "step_halving_ratio": _finite(ratio),
        "errors_vs_finest": [float(e) for e in errs],
        "norm_defect": runs[-1].unitarity_defect(),
        "amplitude_evolve": _c(runs[-1].element(j)),
        "amplitude_dyson2": _c(dy.element(j)),
        "evolve_minus_dyson2": float(abs(runs[-1].element(j) - dy.element(j))),
        "overflow_weight": H.overflow_weight,
    }


def sweep_csv(report: dict) -> str:
    lines = ["T,first_abs,second_abs,total_abs"]
    for r in report["t_sweep"]:
        lines.append(f"{r['T']!r},{r['first_abs']!r},{r['second_abs']!r},{r['total_abs']!r}")
    return "\n".join(lines) + "\n"
