"""Time evolution, the second-order Dyson series and finite-window scattering.

``U`` solves ``dU/dt = -i h(t) U`` with ``U(t0) = 1``.  ``h_of_t`` is any
callable returning a (dense or sparse) matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .hamiltonian import FockModel, apply_V
from .states import Config

SMALL_PHASE = 1e-3


@dataclass(frozen=True, eq=False)
class EvolutionOperator:
    matrix: np.ndarray  # operator, or a state vector when evolving a single state
    t0: float
    t1: float
    steps: int

    def unitarity_defect(self) -> float:
        U = self.matrix
        if U.ndim == 1:
            return float(abs(np.vdot(U, U).real - 1.0))
        return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))

    def element(self, i: int, j: int = 0) -> complex:
        return complex(self.matrix[i] if self.matrix.ndim == 1 else self.matrix[i, j])


def _identity_like(h0, psi0):
    if psi0 is not None:
        return np.array(psi0, dtype=complex)
    return np.eye(h0.shape[0], dtype=complex)


def evolve(h_of_t, t0: float, t1: float, steps: int, psi0=None) -> EvolutionOperator:
    """Classical fourth-order Runge-Kutta for ``dU/dt = -i h(t) U``."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    dt = (t1 - t0) / steps
    h0 = h_of_t(t0)
    y = _identity_like(h0, psi0)

    def f(t, y, h=None):
        return -1j * ((h_of_t(t) if h is None else h) @ y)

    t = t0
    hcur = h0
    for _ in range(steps):
        hmid = h_of_t(t + dt / 2)
        hnext = h_of_t(t + dt)
        k1 = f(t, y, hcur)
        k2 = f(t, y + dt / 2 * k1, hmid)
        k3 = f(t, y + dt / 2 * k2, hmid)
        k4 = f(t, y + dt * k3, hnext)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
        hcur = hnext
    return EvolutionOperator(y, t0, t1, steps)


def dyson_second_order(h_of_t, t0: float, t1: float, steps: int = 200, psi0=None) -> EvolutionOperator:
    """``1 - i int h + (-i)^2 int int_{t' < t} h(t) h(t')``.

    The two iterated integrals solve ``D1' = -i h``, ``D2' = -i h D1`` and are
    integrated with the same fourth-order scheme as :func:`evolve`.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    dt = (t1 - t0) / steps
    h0 = h_of_t(t0)
    one = _identity_like(h0, psi0)
    D1 = np.zeros_like(one)
    D2 = np.zeros_like(one)
    t = t0
    hcur = h0
    for _ in range(steps):
        hmid = h_of_t(t + dt / 2)
        hnext = h_of_t(t + dt)
        a1 = -1j * (hcur @ one)
        b1 = -1j * (hcur @ D1)
        a2 = -1j * (hmid @ one)
        b2 = -1j * (hmid @ (D1 + dt / 2 * a1))
        b3 = -1j * (hmid @ (D1 + dt / 2 * a2))
        a4 = -1j * (hnext @ one)
        b4 = -1j * (hnext @ (D1 + dt * a2))
        D1 = D1 + dt / 6 * (a1 + 4 * a2 + a4)
        D2 = D2 + dt / 6 * (b1 + 2 * b2 + 2 * b3 + b4)
        t += dt
        hcur = hnext
    return EvolutionOperator(one + D1 + D2, t0, t1, steps)


def step_halving_ratio(h_of_t, t0: float, t1: float, steps: int, psi0=None) -> float:
    """``|U_n - U_2n| / |U_2n - U_4n|``; about 16 for a fourth-order scheme."""
    u1 = evolve(h_of_t, t0, t1, steps, psi0).matrix
    u2 = evolve(h_of_t, t0, t1, 2 * steps, psi0).matrix
    u4 = evolve(h_of_t, t0, t1, 4 * steps, psi0).matrix
    return float(np.linalg.norm(u1 - u2) / np.linalg.norm(u2 - u4))


# --------------------------------------------------------------------------- #
#                          closed-form time integrals                         #
# --------------------------------------------------------------------------- #


def first_order_integral(omega: float, t0: float, t1: float) -> complex:
    """``int_{t0}^{t1} exp(-i omega t) dt``."""
    T = t1 - t0
    z = -1j * omega * T
    if abs(z) < SMALL_PHASE:
        series = sum(z**n / factorial(n + 1) for n in range(8))
        return complex(np.exp(-1j * omega * t0) * T * series)
    return complex((np.exp(-1j * omega * t1) - np.exp(-1j * omega * t0)) / (-1j * omega))


def _moment(n: int, omega: float, t0: float, t1: float) -> complex:
    # int_{t0}^{t1} (t - t0)^n exp(-i omega t) dt by Gauss-Legendre
    T = t1 - t0
    nodes = 32 + n + int(abs(omega) * T)
    x, w = np.polynomial.legendre.leggauss(nodes)
    t = t0 + 0.5 * T * (x + 1)
    return complex(0.5 * T * np.sum(w * (t - t0) ** n * np.exp(-1j * omega * t)))


def second_order_integral(omega1: float, omega2: float, t0: float, t1: float) -> complex:
    """``int_{t0}^{t1} dt2 exp(-i omega2 t2) int_{t0}^{t2} dt1 exp(-i omega1 t1)``."""
    T = t1 - t0
    if abs(omega1 * T) >= SMALL_PHASE:
        a = first_order_integral(omega1 + omega2, t0, t1)
        b = np.exp(-1j * omega1 * t0) * first_order_integral(omega2, t0, t1)
        return complex((a - b) / (-1j * omega1))
    z = -1j * omega1
    total = sum(z**n / factorial(n + 1) * _moment(n + 1, omega2, t0, t1) for n in range(8))
    return complex(np.exp(-1j * omega1 * t0) * total)


# --------------------------------------------------------------------------- #
#                              scattering amplitude                           #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class ScatteringAmplitude:
    T: float
    zeroth: complex
    first: complex
    second: complex
    n_intermediate: int
    dropped_mass: float  # first-order probability pushed above n_max

    @property
    def total(self) -> complex:
        return self.zeroth + self.first + self.second


def _coupling_data(model: FockModel, cfg: Config, cache: dict | None):
    if cache is not None and cfg in cache:
        return cache[cfg]
    act = apply_V(model, cfg)
    if cache is not None:
        cache[cfg] = act
    return act


def scattering_amplitude(model: FockModel, in_cfg: Config, out_cfg: Config, T: float, cache: dict | None = None
                         ) -> ScatteringAmplitude:
    """``<out| U(T/2, -T/2) |in>`` through second order in ``h``.

    Intermediate states are those reached from both ``in`` and ``out`` by one
    application of ``V``; the time integrals are done in closed form.
    """
    if not T > 0:
        raise ValueError("window must be positive")
    t0, t1 = -T / 2, T / 2
    act_in = _coupling_data(model, in_cfg, cache)
    act_out = _coupling_data(model, out_cfg, cache)
    E_in = model.config_energy(in_cfg)
    E_out = model.config_energy(out_cfg)
    zeroth = 1.0 + 0j if in_cfg == out_cfg else 0j
    first = -1j * act_in.kept.get(out_cfg, 0) * first_order_integral(E_out - E_in, t0, t1)
    second = 0j
    common = act_in.kept.keys() & act_out.kept.keys()
    for m in common:
        E_m = model.config_energy(m)
        v_out_m = np.conj(act_out.kept[m])  # <out|V|m> by hermiticity
        second += -v_out_m * act_in.kept[m] * second_order_integral(E_m - E_in, E_out - E_m, t0, t1)
    dropped = sum(
        abs(v * first_order_integral(model.config_energy(c) - E_in, t0, t1)) ** 2 for c, v in act_in.overflow.items()
    )
    return ScatteringAmplitude(float(T), complex(zeroth), complex(first), complex(second), len(common), float(dropped))


def t_sweep(model: FockModel, in_cfg: Config, out_cfg: Config, windows) -> list[ScatteringAmplitude]:
    cache: dict = {}
    return [scattering_amplitude(model, in_cfg, out_cfg, T, cache) for T in windows]


def loglog_slope(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        return float("nan")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def dyson_coupling_scan(H, psi0, T: float, couplings, steps: int = 200):
    """``|evolve - dyson2|`` for ``h -> g h`` over ``couplings``.

    ``H`` should be assembled at unit coupling.  Returns the differences and
    their log-log slope against ``g``; the truncation error is third order.
    """
    t0, t1 = -T / 2, T / 2
    diffs = []
    for g in couplings:
        def h(t, g=g):
            return g * H(t)

        u = evolve(h, t0, t1, steps, psi0).matrix
        d = dyson_second_order(h, t0, t1, steps, psi0).matrix
        diffs.append(float(np.linalg.norm(u - d)))
    return diffs, loglog_slope(couplings, diffs)
