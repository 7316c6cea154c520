"""Detuning pulse schedules and Floquet-cycle propagation.

A schedule holds one period of the drive: delta-function detuning pulses on
top of free evolution under (Omega/2) H_PXP. A detuning pulse of weight w
multiplies the state by exp(+i w N) (the Hamiltonian carries -Delta(t) N, so
the integrated delta gives a positive phase on the Rydberg number).

The echo places pi kicks at tau/4 and 3tau/4; the parameterized perturbation
adds weights (gamma-theta, epsilon, theta, epsilon) at (0, tau/4, tau/2,
3tau/4). The start-of-cycle pulse is assigned to t=0; at coincident times the
perturbation phase is applied before the pi kick (they commute, the order
just fixes the event log).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .basis import ConstrainedBasis
from .krylov import expm_multiply_hermitian
from .observables import ObservableSeries, check_normalized
from .operators import SparseOperator, build_pxp, number_diagonal

ECHO = "echo_pi"
PERTURBATION = "perturbation"

_KIND_ORDER = {PERTURBATION: 0, ECHO: 1}


@dataclass(frozen=True)
class Pulse:
    time: float
    weight: float
    kind: str


@dataclass(frozen=True)
class DriveParams:
    epsilon: float
    gamma: float
    theta: float


@dataclass(frozen=True)
class PulseSchedule:
    """One Floquet period of detuning events plus the Rabi frequency."""

    omega: float
    tau: float
    pulses: tuple[Pulse, ...]
    params: DriveParams | None = None

    def __post_init__(self):
        if self.omega <= 0 or self.tau <= 0:
            raise ValueError("omega and tau must be positive")
        last = (-1.0, -1)
        for p in self.pulses:
            if not 0.0 <= p.time < self.tau:
                raise ValueError(f"pulse time {p.time} outside [0, tau)")
            if not math.isfinite(p.weight):
                raise ValueError("pulse weights must be finite")
            key = (p.time, _KIND_ORDER[p.kind])
            if key < last:
                raise ValueError("pulses must be sorted by time (perturbation before echo)")
            last = key

    def perturbation_pulses(self) -> tuple[Pulse, ...]:
        return tuple(p for p in self.pulses if p.kind == PERTURBATION)

    def to_config(self) -> dict:
        cfg = {"omega": self.omega, "tau": self.tau}
        if self.params is not None:
            cfg.update(
                epsilon=self.params.epsilon,
                gamma=self.params.gamma,
                theta=self.params.theta,
            )
        else:
            cfg["pulses"] = [[p.time, p.weight, p.kind] for p in self.pulses]
        return cfg

    @staticmethod
    def from_config(cfg: dict) -> "PulseSchedule":
        if "pulses" in cfg:
            pulses = tuple(Pulse(t, w, kind) for t, w, kind in cfg["pulses"])
            return PulseSchedule(cfg["omega"], cfg["tau"], pulses)
        return build_perturbed_schedule(
            cfg["omega"], cfg["tau"], cfg.get("epsilon", 0.0),
            cfg.get("gamma", 0.0), cfg.get("theta", 0.0),
        )


def build_echo_schedule(omega: float, tau: float, pi_sign: float = +1.0) -> PulseSchedule:
    """Two pi kicks per period, at tau/4 and 3tau/4. U(tau) = identity."""
    pulses = (
        Pulse(tau / 4, pi_sign * math.pi, ECHO),
        Pulse(3 * tau / 4, pi_sign * math.pi, ECHO),
    )
    return PulseSchedule(omega, tau, pulses, params=DriveParams(0.0, 0.0, 0.0))


def build_perturbed_schedule(omega: float, tau: float, epsilon: float,
                             gamma: float, theta: float,
                             pi_sign: float = +1.0) -> PulseSchedule:
    """Echo plus the four-pulse perturbation family.

    Per period: (0, gamma-theta), (tau/4, epsilon), (tau/2, theta),
    (3tau/4, epsilon), merged with the pi kicks. Zero-weight perturbation
    pulses are kept so the event log is parameter-independent.
    """
    pulses = (
        Pulse(0.0, gamma - theta, PERTURBATION),
        Pulse(tau / 4, epsilon, PERTURBATION),
        Pulse(tau / 4, pi_sign * math.pi, ECHO),
        Pulse(tau / 2, theta, PERTURBATION),
        Pulse(3 * tau / 4, epsilon, PERTURBATION),
        Pulse(3 * tau / 4, pi_sign * math.pi, ECHO),
    )
    return PulseSchedule(omega, tau, pulses, params=DriveParams(epsilon, gamma, theta))


def effective_time(t: float, tau: float) -> float:
    """Net H_PXP evolution time accumulated by the echo frame at lab time t."""
    if not 0.0 <= t <= tau:
        raise ValueError(f"t={t} outside [0, tau={tau}]")
    return abs(abs(t - tau / 4) - tau / 2) - tau / 4


# ---------------------------------------------------------------------------
# Propagation backends
# ---------------------------------------------------------------------------

DENSE = "dense_eigen"
KRYLOV = "krylov"

_eig_cache: dict[tuple[int, str], tuple[np.ndarray, np.ndarray]] = {}


def pxp_eigensystem(basis: ConstrainedBasis) -> tuple[np.ndarray, np.ndarray]:
    """Cached dense eigendecomposition of H_PXP, one per (L, bc)."""
    key = (basis.L, basis.bc)
    if key not in _eig_cache:
        h = build_pxp(basis).toarray().real
        _eig_cache[key] = np.linalg.eigh(h)
    return _eig_cache[key]


class Propagator:
    """Free evolution exp(-i t (Omega/2) H_PXP) plus diagonal pulse kicks.

    Immutable and shareable; each call owns its state vector.
    """

    def __init__(self, basis: ConstrainedBasis, omega: float,
                 backend: str = DENSE, krylov_tol: float = 1e-11):
        if backend not in (DENSE, KRYLOV):
            raise ValueError(f"unknown backend {backend!r}")
        self.basis = basis
        self.omega = omega
        self.backend = backend
        self.krylov_tol = krylov_tol
        self.n_diag = number_diagonal(basis)
        if backend == DENSE:
            self._evals, self._evecs = pxp_eigensystem(basis)
            self._h = None
        else:
            self._h = build_pxp(basis).matrix
            self._evals = self._evecs = None

    def free(self, psi: np.ndarray, t: float) -> np.ndarray:
        if t == 0.0:
            return psi
        scale = 0.5 * self.omega
        if self.backend == DENSE:
            # V is real; split re/im to avoid upcasting the matrix per call
            V = self._evecs
            coef = V.T @ psi.real + 1j * (V.T @ psi.imag)
            coef *= np.exp(-1j * t * scale * self._evals)
            return V @ coef.real + 1j * (V @ coef.imag)
        return expm_multiply_hermitian(
            lambda v: scale * (self._h @ v), psi, t, tol=self.krylov_tol)

    def kick(self, psi: np.ndarray, weight: float) -> np.ndarray:
        return np.exp(1j * weight * self.n_diag) * psi


def propagate_cycle(state: np.ndarray, schedule: PulseSchedule,
                    prop: Propagator) -> np.ndarray:
    """Advance one Floquet period: free H_PXP evolution between the pulses."""
    check_normalized(state)
    psi = state
    t = 0.0
    for pulse in schedule.pulses:
        if pulse.time > t:
            psi = prop.free(psi, pulse.time - t)
            t = pulse.time
        psi = prop.kick(psi, pulse.weight)
    if schedule.tau > t:
        psi = prop.free(psi, schedule.tau - t)
    return psi


def make_propagator(basis: ConstrainedBasis, schedule: PulseSchedule,
                    backend: str = DENSE) -> Propagator:
    return Propagator(basis, schedule.omega, backend=backend)


ObservableSet = dict[str, Callable[[np.ndarray], float | np.ndarray]]


def stroboscopic_run(state0: np.ndarray, schedule: PulseSchedule,
                     n_cycles: int, observable_set: ObservableSet,
                     prop: Propagator | None = None,
                     basis: ConstrainedBasis | None = None,
                     backend: str = DENSE,
                     snapshot_stride: int = 0) -> ObservableSeries:
    """Record observables after each full Floquet cycle (t = 0 included)."""
    if n_cycles < 0:
        raise ValueError("n_cycles must be >= 0")
    if prop is None:
        if basis is None:
            raise ValueError("pass either a Propagator or a basis")
        prop = make_propagator(basis, schedule, backend)
    series = ObservableSeries.empty(observable_set, metadata={
        "kind": "stroboscopic",
        "schedule": schedule.to_config(),
        "n_cycles": n_cycles,
    })
    psi = state0.astype(complex)
    series.append(0.0, psi, observable_set)
    if snapshot_stride:
        series.snapshots[0] = psi.copy()
    for n in range(1, n_cycles + 1):
        psi = propagate_cycle(psi, schedule, prop)
        series.append(n * schedule.tau, psi, observable_set)
        if snapshot_stride and n % snapshot_stride == 0:
            series.snapshots[n] = psi.copy()
    return series


def micromotion_run(state0: np.ndarray, schedule: PulseSchedule,
                    samples_per_cycle: int, n_cycles: int,
                    observable_set: ObservableSet,
                    prop: Propagator | None = None,
                    basis: ConstrainedBasis | None = None,
                    backend: str = DENSE) -> ObservableSeries:
    """Sample observables on a uniform sub-cycle grid, kicking at crossings.

    The grid step is tau/(samples_per_cycle - 1), so samples_per_cycle=2
    reduces to the stroboscopic endpoints. Pulses at a sample time are
    applied before the sample is recorded.
    """
    if samples_per_cycle < 2:
        raise ValueError("samples_per_cycle must be >= 2")
    if n_cycles < 0:
        raise ValueError("n_cycles must be >= 0")
    if prop is None:
        if basis is None:
            raise ValueError("pass either a Propagator or a basis")
        prop = make_propagator(basis, schedule, backend)
    tau = schedule.tau
    offsets = np.linspace(0.0, tau, samples_per_cycle)
    series = ObservableSeries.empty(observable_set, metadata={
        "kind": "micromotion",
        "schedule": schedule.to_config(),
        "n_cycles": n_cycles,
        "samples_per_cycle": samples_per_cycle,
    })
    psi = state0.astype(complex)
    series.append(0.0, psi, observable_set)
    for n in range(n_cycles):
        t_local = 0.0
        events = list(schedule.pulses)
        sample_times = [s for s in offsets[1:]]
        for target in sample_times:
            while events and events[0].time <= target + 1e-12 * tau:
                pulse = events.pop(0)
                if pulse.time > t_local:
                    psi = prop.free(psi, pulse.time - t_local)
                    t_local = pulse.time
                psi = prop.kick(psi, pulse.weight)
            if target > t_local:
                psi = prop.free(psi, target - t_local)
                t_local = target
            series.append(n * tau + target, psi, observable_set)
    return series
