"""Command-line front end: ``twospinor verify | vertex | scatter | decompose``.

Every command writes one JSON document (keys sorted) to stdout or ``--out``.
Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from pathlib import Path

import numpy as np

from . import dirac, higgs, optical, verify
from .dirac import DegenerateSpinor
from .fock import scenario as fscen
from .spinors import ComplexHVector, DiracSpinor
from .vertex import VertexCoupling, ell_int, k_vertex_theorem, vertex, vertex_two_spinor

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
VANISH_TOL = 1e-12


class InputError(ValueError):
    """Malformed command input; maps to exit code 2."""


# --------------------------------------------------------------------------- #
#                                   helpers                                   #
# --------------------------------------------------------------------------- #


def _complex_array(obj, shape, what: str) -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj:
        raise InputError(f"{what}: expected {{'re': ..., 'im': ...}}")
    try:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{what}: {exc}") from exc
    if re.shape != tuple(shape) or im.shape != tuple(shape):
        raise InputError(f"{what}: expected shape {tuple(shape)}, got {re.shape} and {im.shape}")
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise InputError(f"{what}: non-finite entries")
    return re + 1j * im


def _cjson(z) -> dict:
    z = np.asarray(z, dtype=complex)
    return {"re": np.round(z.real, 15).tolist(), "im": np.round(z.imag, 15).tolist()}


def _dirac_input(obj, what: str, m: float) -> DiracSpinor:
    if not isinstance(obj, dict):
        raise InputError(f"{what}: expected an object")
    if "w" in obj:
        return DiracSpinor(_complex_array(obj["w"], (4,), f"{what}.w"))
    try:
        species = obj["species"]
        p = np.asarray(obj.get("p", [0.0, 0.0, 0.0]), dtype=float).reshape(3)
        spin = int(obj.get("spin", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{what}: need 'w' or 'species'/'p'/'spin' ({exc})") from exc
    if species not in ("electron", "positron") or spin not in (0, 1):
        raise InputError(f"{what}: species must be electron|positron and spin 0|1")
    frame = dirac.dirac_frame_at(dirac.OnShellMomentum(m, p))
    return (frame.u if species == "electron" else frame.v)[spin]


def _photon_input(obj) -> ComplexHVector:
    if not isinstance(obj, dict):
        raise InputError("A: expected an object")
    if "covector" in obj:
        beta = _complex_array(obj["covector"], (4,), "A.covector")
        return optical.hvector_of(beta)
    return ComplexHVector(_complex_array(obj, (2, 2), "A"))


def _parse_tol(items) -> dict:
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            key, val = "*", key
        elif not key:
            raise InputError(f"--tol {item!r}: empty check name")
        try:
            out[key] = float(val)
        except ValueError as exc:
            raise InputError(f"--tol {item!r}: not a number") from exc
    return out


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _emit(doc: dict, args) -> None:
    if not args.no_timestamp:
        doc = dict(doc, generated=_dt.datetime.now(_dt.timezone.utc).isoformat())
    text = json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------- #
#                                  commands                                   #
# --------------------------------------------------------------------------- #


def cmd_verify(args) -> int:
    overrides = _parse_tol(args.tol)
    names = verify.SUITES if args.suite == "all" else (args.suite,)
    reports = [verify.run_suite(s, args.seed, overrides) for s in names]
    passed = all(r.passed for r in reports)
    doc = {
        "command": "verify",
        "seed": args.seed,
        "suites": [r.to_dict() for r in reports],
        "passed": passed,
    }
    _emit(doc, args)
    return EXIT_OK if passed else EXIT_FAIL


def vertex_report(doc: dict) -> dict:
    """Amplitude report for a vertex input document (see README)."""
    if not isinstance(doc, dict):
        raise InputError("vertex input must be a JSON object")
    try:
        m = float(doc.get("mass", 1.0))
        e = float(doc.get("coupling", 1.0))
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    for key in ("phi", "psi", "A"):
        if key not in doc:
            raise InputError(f"vertex input is missing {key!r}")
    phi = _dirac_input(doc["phi"], "phi", m)
    psi = _dirac_input(doc["psi"], "psi", m)
    A = _photon_input(doc["A"])
    out = {"command": "vertex", "mass": m, "coupling": e}
    try:
        res = vertex(phi, A, psi, VertexCoupling(e))
        out["kernel_basis"] = [_cjson(b) for b in res.kernel_basis]
        amp = res.amplitude
    except DegenerateSpinor:
        amp = ell_int(phi, A, psi, VertexCoupling(e))
        out["kernel_basis"] = None
    two = -e * vertex_two_spinor(phi, A, psi)
    out["amplitude_matrix"] = _cjson(amp)
    out["amplitude_two_spinor"] = _cjson(two)
    out["path_difference"] = float(abs(amp - two))
    try:
        s_psi, s_phi = dirac.splitting_sign(psi), dirac.splitting_sign(phi)
    except DegenerateSpinor:
        out["theorem"] = None
        return out
    thm = {"psi_sign": s_psi, "phi_sign": s_phi}
    for label, sign in (("minus", -1), ("plus", 1)):
        direct, expansion = k_vertex_theorem(phi, psi, sign, m)
        thm[f"k_{label}_matrix"] = _cjson(direct)
        thm[f"k_{label}_expansion"] = _cjson(expansion)
        thm[f"k_{label}_vanishes"] = bool(abs(direct) < VANISH_TOL and abs(expansion) < VANISH_TOL)
    out["theorem"] = thm
    out["k_minus_vanishes"] = thm["k_minus_vanishes"]
    out["k_plus_vanishes"] = thm["k_plus_vanishes"]
    return out


def cmd_vertex(args) -> int:
    _emit(vertex_report(_read_json(args.input)), args)
    return EXIT_OK


def cmd_scatter(args) -> int:
    target = args.scenario
    try:
        if Path(target).suffix == ".json" or Path(target).exists():
            if not Path(target).is_file():
                raise InputError(f"scenario file {target} not found")
            doc = fscen.load_scenario(target)
        else:
            doc = fscen.load_demo(target)
        report = fscen.run_scenario(doc)
    except fscen.ScenarioError as exc:
        raise InputError(str(exc)) from exc
    report = dict(report, command="scatter")
    if args.csv:
        Path(args.csv).write_text(fscen.sweep_csv(report))
    _emit(report, args)
    return EXIT_OK


def decompose_report(doc: dict, seed: int) -> dict:
    try:
        n_R, n_L = int(doc.get("n_R", 1)), int(doc.get("n_L", 2))
        mu = float(doc.get("mu", 1.0))
        lam = float(doc.get("lambda", 1.0))
        h_R = np.asarray(doc["h_R"], dtype=float) if "h_R" in doc else None
        h_L = np.asarray(doc["h_L"], dtype=float) if "h_L" in doc else None
        spaces = higgs.InternalSpaces(n_R, n_L, h_R, h_L)
        vac = higgs.make_vacuum(spaces, mu, seed)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    rng = np.random.default_rng(seed)
    if "xi" in doc:
        xi = _complex_array(doc["xi"], (n_L, n_L), "xi")
        if not higgs.is_h_antihermitian(xi, spaces):
            raise InputError("xi is not anti-Hermitian for h_L")
    else:
        xi = higgs.random_lie_element(rng, spaces)
    if "Psi_R" in doc or "Psi_L" in doc:
        Psi = higgs.MatterMultiplet(_complex_array(doc.get("Psi_R"), (n_R, 2), "Psi_R"),
                                    _complex_array(doc.get("Psi_L"), (n_L, 2), "Psi_L"))
    else:
        Psi = higgs.MatterMultiplet(rng.standard_normal((n_R, 2)) + 1j * rng.standard_normal((n_R, 2)),
                                    rng.standard_normal((n_L, 2)) + 1j * rng.standard_normal((n_L, 2)))
    P, Pperp = higgs.split_FL(vac)
    lie = higgs.decompose_lie(xi, vac)
    matter = higgs.decompose_matter(Psi, vac)
    back = higgs.recompose_matter(matter, vac)
    d_full, d_half = higgs.radial_derivative(vac, lam)
    return {
        "command": "decompose",
        "seed": seed,
        "vacuum": vac.to_dict(),
        "isometry_residual": vac.isometry_residual(),
        "contraction": vac.contraction(),
        "projector_image": _cjson(P),
        "projector_complement": _cjson(Pperp),
        "block_dimensions": higgs.block_dimensions(vac),
        "xi": _cjson(xi),
        "lie": lie.to_dict(),
        "adjoint_residual": higgs.adjoint_residual(lie, spaces),
        "lie_recompose_residual": float(np.max(np.abs(lie.recompose() - xi))),
        "matter": matter.to_dict(),
        "matter_recompose_residual": float(max(np.max(np.abs(back.Psi_R - Psi.Psi_R)),
                                               np.max(np.abs(back.Psi_L - Psi.Psi_L)))),
        "potential": {"lambda": lam, "value_at_vacuum": higgs.higgs_potential(vac.H0, vac, lam),
                      "radial_derivative": d_full, "radial_derivative_half_step": d_half},
    }


def cmd_decompose(args) -> int:
    doc = _read_json(args.input) if args.input else {}
    for key in ("n_R", "n_L", "mu"):
        val = getattr(args, key)
        if val is not None:
            doc[key] = val
    _emit(decompose_report(doc, args.seed), args)
    return EXIT_OK


# --------------------------------------------------------------------------- #


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twospinor", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--no-timestamp", action="store_true", help="omit the generation time (byte-stable output)")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("--suite", default="all", choices=verify.SUITES + ("all",))
    p.add_argument("--tol", action="append", metavar="[CHECK=]VALUE",
                   help="tolerance override for one check, or for all checks without a name")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("vertex", parents=[common], help="evaluate the QED vertex for a JSON input")
    p.add_argument("input")
    p.set_defaults(func=cmd_vertex)

    p = sub.add_parser("scatter", parents=[common], help="run a scattering scenario (file or demo name)")
    p.add_argument("scenario", help=f"scenario JSON file or one of: {', '.join(fscen.demo_names())}")
    p.add_argument("--csv", help="also write the window sweep as CSV")
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("decompose", parents=[common], help="symmetry-breaking decomposition")
    p.add_argument("input", nargs="?", help="optional JSON with n_R, n_L, mu, lambda, h_R, h_L, xi, Psi_R, Psi_L")
    p.add_argument("--n-R", dest="n_R", type=int)
    p.add_argument("--n-L", dest="n_L", type=int)
    p.add_argument("--mu", type=float)
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"twospinor {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
