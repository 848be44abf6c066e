"""Verification suites behind ``twospinor verify``.

Each suite samples its inputs from a seeded generator, measures residuals of
the module invariants and compares them with tolerances.  Every check carries
an anchor naming the property it tests, or ``plumbing`` for artifact-only
checks.  Some quantities are measured without a verdict; they go into
``measurements``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import dirac, gauge, higgs, optical, spinors, vertex
from .fock import dynamics as fdyn
from .fock import hamiltonian as fham
from .fock import kernel as fker
from .fock import states as fst
from .fock.lattice import MomentumLattice

SUITES = ("core", "dirac", "photon", "vertex", "gauge", "higgs", "fock")


@dataclass
class Check:
    name: str
    anchor: str
    tolerance: float
    residual: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "tolerance": self.tolerance,
            "residual": float(self.residual),
            "passed": self.passed,
        }


@dataclass
class VerificationReport:
    suite: str
    seed: int
    checks: list = field(default_factory=list)
    measurements: dict = field(default_factory=dict)
    environment: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "environment": self.environment,
            "checks": [c.to_dict() for c in self.checks],
            "measurements": self.measurements,
            "passed": self.passed,
        }


class _Builder:
    def __init__(self, suite: str, seed: int, overrides: dict | None):
        self.report = VerificationReport(suite, seed)
        self.overrides = overrides or {}

    def check(self, name: str, anchor: str, tol: float, residual: float) -> None:
        tol = float(self.overrides.get(name, self.overrides.get("*", tol)))
        self.report.checks.append(Check(name, anchor, tol, float(residual)))

    def measure(self, name: str, value) -> None:
        self.report.measurements[name] = value


# --------------------------------------------------------------------------- #


def _suite_core(b: _Builder, rng: np.random.Generator, n: int = 1000):
    eps0 = spinors.make_epsilon(0.0)
    eps1 = spinors.make_epsilon(1.234)
    worst = 0.0
    theta = 0.0
    for _ in range(n):
        x = spinors.random_hermitian(rng)
        y = spinors.random_hermitian(rng)
        gx = spinors.clifford(x, eps0).matrix
        gy = spinors.clifford(y, eps0).matrix
        g = spinors.metric_g(x, y, eps0)
        worst = max(worst, np.max(np.abs(gx @ gy + gy @ gx - 2 * g * np.eye(4))))
        theta = max(theta, np.max(np.abs(gx - spinors.clifford(x, eps1).matrix)), abs(g - spinors.metric_g(x, y, eps1)))
    b.check("clifford_relation", "clifford map", 1e-12, worst)
    b.check("epsilon_phase_independence", "clifford map", 1e-14, theta)
    basis = spinors.pauli_basis()
    gram = np.array([[spinors.metric_g(s, t) for t in basis] for s in basis])
    b.check("pauli_orthonormal", "lorentz metric", 1e-14, np.max(np.abs(gram - spinors.ETA)))
    ev = np.linalg.eigvalsh(spinors.DIRAC_FORM)
    b.check("dirac_form_signature", "dirac pairing signature", 0.0, abs(int(np.sum(ev > 0)) - 2) + abs(int(np.sum(ev < 0)) - 2))
    u = spinors.TwoSpinor(spinors.random_complex(rng, 2))
    sf = spinors.sharp(eps1, spinors.flat(eps1, u)).c
    b.check("sharp_flat_minus_identity", "index gymnastics", 1e-14, np.max(np.abs(sf + u.c)))


def _suite_dirac(b: _Builder, rng: np.random.Generator, n: int = 100, m: float = 1.0):
    proj = frame = rt = 0.0
    for _ in range(n):
        p = dirac.random_on_shell(rng, m, scale=1.0)
        Pp, Pm = (P.matrix for P in dirac.dirac_projectors(p))
        proj = max(
            proj,
            np.max(np.abs(Pp @ Pp - Pp)),
            np.max(np.abs(Pm @ Pm - Pm)),
            np.max(np.abs(Pp + Pm - np.eye(4))),
            abs(np.trace(Pp) - 2),
            abs(np.trace(Pm) - 2),
        )
        fr = dirac.dirac_frame_at(p)
        g = spinors.clifford(p.vector()).matrix
        for s in fr.u:
            frame = max(frame, np.max(np.abs(g @ s.w - m * s.w)))
            rt = max(rt, np.max(np.abs(dirac.momentum_from_state(s, m).p_perp - p.p_perp)))
        for s in fr.v:
            frame = max(frame, np.max(np.abs(g @ s.w + m * s.w)))
            rt = max(rt, np.max(np.abs(dirac.momentum_from_state(s, m).p_perp - p.p_perp)))
    b.check("projector_algebra", "dirac splitting", 1e-12, proj)
    b.check("frame_eigen_residual", "dirac splitting", 1e-12, frame)
    b.check("momentum_round_trip", "momentum reconstruction", 1e-10, rt)
    norm = sign = 0.0
    for _ in range(10 * n):
        psi = dirac.random_eligible_spinor(rng)
        tau = dirac.tau_of(psi)
        norm = max(norm, abs(spinors.metric_g(tau, tau) - 1))
        s = dirac.splitting_sign(psi)
        sign = max(sign, np.max(np.abs(spinors.clifford(tau).matrix @ psi.w - s * psi.w)) / np.linalg.norm(psi.w))
    b.check("tau_unit_timelike", "momentum reconstruction", 1e-12, norm)
    b.check("splitting_sign_law", "momentum reconstruction", 1e-12, sign)


def _horizontal(rng, k: optical.NullCovector) -> np.ndarray:
    beta = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    n = np.array([1.0, 0, 0, 0])
    return beta - optical.g_sharp(k.k, beta) / optical.g_sharp(k.k, n) * n


def _suite_photon(b: _Builder, rng: np.random.Generator, n: int = 1000):
    eig = quot = 0.0
    agree = 0
    for _ in range(n):
        k = optical.NullCovector.from_momentum(rng.standard_normal(3))
        beta = _horizontal(rng, k)
        bp, bm = optical.selfdual_split(k, beta)
        eig = max(
            eig,
            np.max(np.abs(optical.canonical_rep(k, -1j * optical.hodge_B(k, bp) - bp))),
            np.max(np.abs(optical.canonical_rep(k, -1j * optical.hodge_B(k, bm) + bm))),
        )
        c = complex(rng.standard_normal(), rng.standard_normal())
        shifted = beta + c * k.k
        quot = max(quot, np.max(np.abs(optical.canonical_rep(k, optical.hodge_B(k, shifted) - optical.hodge_B(k, beta)))))
        kappa = optical.null_factorize(k)
        lam = spinors.TwoSpinor(spinors.random_complex(rng, 2))
        left = rng.random() < 0.5
        x = spinors.ComplexHVector.monomial(kappa, lam) if left else spinors.ComplexHVector.monomial(lam, kappa)
        cov = optical.covector_of(x)
        char = optical.two_spinor_character(k, cov).kind
        sp_, sm_ = optical.selfdual_split(k, cov)
        hodge_left = np.linalg.norm(sp_ if optical.KAPPA_LEFT_EIGENVALUE == -1 else sm_) < 1e-10 * np.linalg.norm(cov)
        hodge_right = np.linalg.norm(sm_ if optical.KAPPA_LEFT_EIGENVALUE == -1 else sp_) < 1e-10 * np.linalg.norm(cov)
        expected = "left" if left else "right"
        agree += int(char == expected and (hodge_left if left else hodge_right))
    b.check("hodge_eigen_residual", "self-dual split", 1e-12, eig)
    b.check("quotient_invariance", "optical quotient", 1e-12, quot)
    b.check("spinor_vs_hodge_disagreements", "self-dual split", 0.0, n - agree)


def _suite_vertex(b: _Builder, rng: np.random.Generator, n: int = 1000, m: float = 1.0):
    paths = 0.0
    for _ in range(n):
        phi = spinors.random_dirac(rng)
        psi = spinors.random_dirac(rng)
        A = spinors.ComplexHVector(spinors.random_complex(rng, (2, 2)))
        d = spinors.dirac_pairing(phi, spinors.clifford(A) @ psi)
        paths = max(paths, abs(d - vertex.vertex_two_spinor(phi, A, psi)))
    b.check("matrix_vs_two_spinor", "vertex identity", 1e-12, paths)
    vanish = 0.0
    for s_psi, s_phi in ((1, 1), (-1, -1), (1, -1), (-1, 1)):
        for _ in range(n // 4):
            psi = dirac.random_eligible_spinor(rng, s_psi)
            phi = dirac.random_eligible_spinor(rng, s_phi)
            sign = -1 if s_psi == s_phi else 1
            direct, expansion = vertex.k_vertex_theorem(phi, psi, sign, m)
            vanish = max(vanish, abs(direct), abs(expansion))
    b.check("vanishing_cases", "vertex vanishing", 1e-12, vanish)
    shift = 0.0
    for _ in range(n // 2):
        p1 = dirac.random_on_shell(rng, m, scale=0.5)
        p2 = dirac.random_on_shell(rng, m, scale=0.5)
        f1 = dirac.dirac_frame_at(p1)
        f2 = dirac.dirac_frame_at(p2)
        psi = (f1.u + f1.v)[rng.integers(4)]
        phi = (f2.u + f2.v)[rng.integers(4)]
        A = spinors.ComplexHVector(spinors.random_complex(rng, (2, 2)) / 2)
        c = complex(rng.standard_normal(), rng.standard_normal()) / 2
        a0, a1 = vertex.gauge_shift_invariance(phi, psi, A, c, m)
        shift = max(shift, abs(a0 - a1))
    b.check("gauge_shift_invariance", "vertex gauge shift", 1e-12, shift)
    b.check("descriptor_count", "plumbing", 0.0, abs(len(vertex.enumerate_vertices()) - 8))


def _suite_gauge(b: _Builder, rng: np.random.Generator, sizes=(16, 20, 24)):
    hs, errs, slope = gauge.refinement_study(int(rng.integers(2**31)), sizes)
    b.check("gauge_drift_slope", "gauge invariance of curvature scalars", 0.3, abs(slope - 2.0))
    b.measure("gauge_drift", {"h": hs, "drift": errs, "slope": slope})
    N = 16
    alpha = gauge.random_smooth_connection(rng, N, 2)
    K = gauge.GaugeTransformField.constant(gauge.random_unitary(rng, 2), N)
    b.check("constant_conjugation", "gauge invariance of curvature scalars", 1e-12, gauge.gauge_drift(alpha, K, "max"))
    k = optical.NullCovector.from_momentum(rng.standard_normal(3))
    ab = gauge.horizontal_projection(k, 1j * rng.standard_normal((4, 1, 1)))
    kc = gauge.RadiativeGaugeClass(k, ab)
    b.check("abelian_rho_class_function", "curvature-like tensor", 1e-13,
            gauge.rho_shift_discrepancy(kc, 1j * rng.standard_normal((1, 1))))
    basis = gauge.su2_basis()
    c = gauge.structure_constants(basis)
    ac, bc = rng.standard_normal((4, 3)), rng.standard_normal((4, 3))
    A = np.einsum("aj,jkl->akl", ac, basis)
    B = np.einsum("aj,jkl->akl", bc, basis)
    diff = gauge.barwedge(A, B) - np.einsum("abi,ikl->abkl", gauge.barwedge_structure(ac, bc, c), basis)
    b.check("barwedge_structure_constants", "barwedge product", 1e-13, np.max(np.abs(diff)))
    na = gauge.RadiativeGaugeClass(k, gauge.horizontal_projection(k, A))
    b.measure("nonabelian_rho_discrepancy", gauge.rho_shift_discrepancy(na, basis[0]))


def _suite_higgs(b: _Builder, rng: np.random.Generator, n: int = 1000, lam: float = 0.7, mu: float = 1.3):
    adj = iso = 0.0
    for nr, nl in ((1, 2), (2, 3)):
        sp_ = higgs.InternalSpaces(nr, nl, higgs.random_metric(rng, nr), higgs.random_metric(rng, nl))
        vac = higgs.make_vacuum(sp_, mu, int(rng.integers(2**31)))
        iso = max(iso, vac.isometry_residual())
        for _ in range(n):
            adj = max(adj, higgs.adjoint_residual(higgs.decompose_lie(higgs.random_lie_element(rng, sp_), vac), sp_))
    b.check("xi_minus_adjoint", "lie algebra splitting", 1e-12, adj)
    b.check("conformal_isometry", "higgs vacuum", 1e-12, iso)
    b.check("potential_at_vacuum", "higgs potential", 1e-10, abs(higgs.higgs_potential(vac.H0, vac, lam) - lam * mu**4))
    d1, d2 = higgs.radial_derivative(vac, lam, 1e-3)
    # the quartic's central difference has a pure step^2 error, removed by one Richardson step
    b.check("potential_radially_stationary", "higgs potential", 1e-10, abs((4 * d2 - d1) / 3))
    b.measure("radial_derivative", {"step": d1, "half_step": d2, "ratio": float(d1 / d2) if d2 else None})


def _suite_fock(b: _Builder, rng: np.random.Generator):
    # ladder algebra
    modes = [fst.ParticleMode("electron", (i, 0, 0), a) for i in range(2) for a in range(2)]
    anti = 0.0
    for _ in range(50):
        occ = tuple(sorted(m for m in modes if rng.random() < 0.5))
        cfg = fst.Config(occ, ())
        for m1 in modes:
            for m2 in modes:
                # {a_m1, a+_m2} |cfg> = delta |cfg>
                tot = {}
                for first, second in ((fst.create, fst.annihilate), (fst.annihilate, fst.create)):
                    r = first(m2 if first is fst.create else m1, cfg, fst.FERMION)
                    if r is None:
                        continue
                    f1, c1 = r
                    r2 = second(m1 if second is fst.annihilate else m2, c1, fst.FERMION)
                    if r2 is None:
                        continue
                    f2, c2 = r2
                    tot[c2] = tot.get(c2, 0) + f1 * f2
                expect = {cfg: 1.0} if m1 == m2 else {}
                keys = set(tot) | set(expect)
                anti = max(anti, max((abs(tot.get(k, 0) - expect.get(k, 0)) for k in keys), default=0.0))
    b.check("fermion_anticommutator", "fermionic ladder algebra", 0.0, anti)
    # kernel
    lat = MomentumLattice(1.0, 1.0)
    masses = {"electron": 1.0, "positron": 1.0, "photon": 0.0}
    kern = fker.build_kernel([("electron", False), ("photon", False), ("positron", False)], lat, masses)
    bad = sum(abs(kern.entry(ks)) for ks in (((1, 0, 0), (0, 1, 0), (0, 0, 0)), ((1, 0, 0), (1, 0, 0), (0, 0, 0))))
    b.check("kernel_conservation", "interaction kernel", 0.0, bad)
    # RK4 convergence on a time-dependent scalar h
    a = lambda t: 0.8 + 0.5 * np.sin(1.3 * t)  # noqa: E731
    h = lambda t: np.array([[a(t)]])  # noqa: E731
    ratio = fdyn.step_halving_ratio(h, 0.0, 3.0, 8)
    b.check("rk4_step_halving_ratio", "evolution equation", 16 * 0.2, abs(ratio - 16))
    exact = np.exp(-1j * (0.8 * 3.0 + 0.5 * (1 - np.cos(3.9)) / 1.3))
    b.check("rk4_scalar_oracle", "evolution equation", 1e-9, abs(fdyn.evolve(h, 0.0, 3.0, 400).matrix[0, 0] - exact))
    # resonant one-vertex amplitude against an independent hand assembly
    model = fham.FockModel(lattice=lat, boson_mass=2.0, coupling=0.01)
    boson = fst.Config((), ((fst.ParticleMode("photon", (0, 0, 0), 0), 1),))
    out = fst.Config((fst.ParticleMode("electron", (0, 0, 0), 0), fst.ParticleMode("positron", (0, 0, 0), 1)), ())
    T = 10.0
    amp = fdyn.scattering_amplitude(model, boson, out, T)
    b.check("resonant_first_order", "scattering operator", 1e-8, abs(amp.first - _hand_resonance(model, T)))
    H = fham.assemble_hamiltonian(model, boson, 1)
    b.check("hamiltonian_hermiticity", "plumbing", 1e-14, H.asymmetry)
    b.measure("resonance_basis_size", len(H.basis))
    H1 = fham.assemble_hamiltonian(replace(model, coupling=1.0), boson, 1)
    gs = (0.005, 0.01, 0.02)
    diffs, slope = fdyn.dyson_coupling_scan(H1, H1.vector(boson), T, gs)
    b.check("evolve_minus_dyson2_slope", "scattering operator", 0.3, abs(slope - 3.0))
    b.measure("evolve_minus_dyson2", {"coupling": list(gs), "difference": diffs, "slope": slope})


def _hand_resonance(model: fham.FockModel, T: float) -> complex:
    """``-i T V_fi`` for boson at rest -> electron (spin 0) + positron (spin 1) at rest."""
    fr = dirac.dirac_frame_at(dirac.OnShellMomentum(model.fermion_mass, np.zeros(3)))
    bp, _ = optical.transverse_modes(np.zeros(3), model.boson_mass)
    ell = vertex.ell_int(fr.u[0], optical.hvector_of(bp), fr.v[1], vertex.VertexCoupling(model.coupling))
    kern = fker.build_kernel([("positron", False), ("photon", True), ("electron", False)], model.lattice, model.masses)
    zero = (0, 0, 0)
    V = ell * kern.entry((zero, zero, zero)) * model.lattice.weight ** 1.5
    return -1j * T * V


_RUNNERS = {
    "core": _suite_core,
    "dirac": _suite_dirac,
    "photon": _suite_photon,
    "vertex": _suite_vertex,
    "gauge": _suite_gauge,
    "higgs": _suite_higgs,
    "fock": _suite_fock,
}


def run_suite(name: str, seed: int = 0, overrides: dict | None = None) -> VerificationReport:
    if name not in _RUNNERS:
        raise KeyError(name)
    b = _Builder(name, seed, overrides)
    rng = np.random.default_rng([seed, SUITES.index(name)])
    _RUNNERS[name](b, rng)
    b.report.environment = {"seed": seed}
    return b.report


def run_all(seed: int = 0, overrides: dict | None = None) -> list[VerificationReport]:
    return [run_suite(s, seed, overrides) for s in SUITES]
