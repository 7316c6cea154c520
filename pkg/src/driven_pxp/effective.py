"""Effective Floquet Hamiltonian: conjugated operators, the two-term
Floquet-Magnus expansion of the pulse drive, closed-form coefficients, and
empirical comparison against the exact cycle unitary.

Operators here are dense: the number operator conjugated by H_PXP evolution
fills in, so sparsity buys nothing.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .basis import ConstrainedBasis
from .drive import (PulseSchedule, Propagator, effective_time, propagate_cycle,
                    pxp_eigensystem)
from .observables import check_normalized
from .operators import (SparseOperator, build_number, build_pxp, build_pxyp,
                        build_ziz, number_diagonal)


def conjugated_number(basis: ConstrainedBasis, omega: float, t_prime: float
                      ) -> np.ndarray:
    """N conjugated by PXP evolution: exp(+i t' (O/2) H) N exp(-i t' (O/2) H).

    Exact at any t' via the cached eigendecomposition; Hermitian with the
    same spectrum as N.
    """
    evals, V = pxp_eigensystem(basis)
    n_diag = number_diagonal(basis)
    M = (V.T * n_diag) @ V  # N in the PXP eigenbasis
    phase = np.exp(1j * t_prime * 0.5 * omega * evals)
    Mt = (phase[:, None] * M) * phase.conj()[None, :]
    return V @ Mt @ V.T


@dataclass(frozen=True)
class EffectiveCoefficients:
    """Coefficient triple of the engineered model H_F."""

    J: float
    h: float
    g: float
    source: str = "closed_form"
    warnings: tuple[str, ...] = field(default=())


def closed_form_coefficients(omega: float, tau: float, epsilon: float,
                             gamma: float, theta: float) -> EffectiveCoefficients:
    """Quadratic-order coefficients of the engineered Hamiltonian.

    J = (gamma + 2 epsilon)/tau - 3 epsilon Omega^2 tau / 32
    h = -epsilon Omega^2 tau / 32
    g = -epsilon (theta + epsilon) Omega / 8

    The formulas assume Omega*tau/4 < 1; outside that a validity warning is
    attached (and emitted), not an error.
    """
    notes: list[str] = []
    if omega * tau / 4 > 1.0:
        msg = (f"Omega*tau/4 = {omega * tau / 4:.3f} > 1: quadratic-order "
               "coefficients are outside their validity range")
        notes.append(msg)
        warnings.warn(msg, stacklevel=2)
    J = (gamma + 2 * epsilon) / tau - 3 * epsilon * omega**2 * tau / 32
    h = -epsilon * omega**2 * tau / 32
    g = -epsilon * (theta + epsilon) * omega / 8
    return EffectiveCoefficients(J=J, h=h, g=g, source="closed_form",
                                 warnings=tuple(notes))


def pure_hopping_params(epsilon: float) -> tuple[float, float, float]:
    """(epsilon, gamma, theta) of the -2*epsilon = gamma = 2*theta family.

    theta = -epsilon makes g vanish exactly; gamma = -2*epsilon cancels the
    (gamma + 2 epsilon)/tau part of J. The quadratic-order J = 3h remnant of
    the closed form is reported, not suppressed.
    """
    return epsilon, -2.0 * epsilon, -epsilon


def assemble_hf(coeffs: EffectiveCoefficients, basis: ConstrainedBasis
                ) -> SparseOperator:
    """-J N - h H_PXYP + g H_PXP + (h/4) H_ZIZ on the given basis."""
    mat = (-coeffs.J) * build_number(basis).matrix \
        + (-coeffs.h) * build_pxyp(basis).matrix \
        + coeffs.g * build_pxp(basis).matrix \
        + (coeffs.h / 4.0) * build_ziz(basis).matrix
    return SparseOperator(dim=basis.dim, matrix=mat.tocsr(), hermitian=True,
                          basis_tag=basis.tag)


def magnus_hf(basis: ConstrainedBasis, schedule: PulseSchedule, order: int
              ) -> np.ndarray:
    """Floquet-Magnus effective Hamiltonian of the perturbation pulses.

    Order 0: -(1/tau) sum_j w_j Ntilde(t'_j); order 1 adds
    (1/(2 i tau)) sum_{j>l} w_j w_l [Ntilde(t'_j), Ntilde(t'_l)] with pulses
    indexed in time order, matching the start-of-cycle event log used by
    propagate_cycle. The echo kicks define the frame and do not enter.
    """
    if order not in (0, 1):
        raise ValueError(f"unsupported Magnus order {order}")
    pulses = schedule.perturbation_pulses()
    conj = {}
    for p in pulses:
        tp = effective_time(p.time, schedule.tau)
        if tp not in conj:
            conj[tp] = conjugated_number(basis, schedule.omega, tp)
    H = np.zeros((basis.dim, basis.dim), dtype=complex)
    for p in pulses:
        H -= (p.weight / schedule.tau) * conj[effective_time(p.time, schedule.tau)]
    if order >= 1:
        for j in range(len(pulses)):
            Nj = conj[effective_time(pulses[j].time, schedule.tau)]
            for l in range(j):
                Nl = conj[effective_time(pulses[l].time, schedule.tau)]
                comm = Nj @ Nl - Nl @ Nj
                H += (pulses[j].weight * pulses[l].weight / (2j * schedule.tau)) * comm
    return H


def twisted_frame_generator(basis: ConstrainedBasis, schedule: PulseSchedule
                            ) -> np.ndarray:
    """Leading generator of the parity-restoring frame at theta = gamma/2:
    -(epsilon/4) (Ntilde(tau/4) - Ntilde(-tau/4))."""
    if schedule.params is None:
        raise ValueError("schedule must carry (epsilon, gamma, theta) parameters")
    eps = schedule.params.epsilon
    Np = conjugated_number(basis, schedule.omega, schedule.tau / 4)
    Nm = conjugated_number(basis, schedule.omega, -schedule.tau / 4)
    return -(eps / 4.0) * (Np - Nm)


# ---------------------------------------------------------------------------
# Dense cycle unitary and comparisons
# ---------------------------------------------------------------------------

def floquet_unitary(schedule: PulseSchedule, basis: ConstrainedBasis) -> np.ndarray:
    """Dense one-cycle unitary, composed segment by segment."""
    evals, V = pxp_eigensystem(basis)
    n_diag = number_diagonal(basis)
    scale = 0.5 * schedule.omega

    def free(U, dt):
        return V @ (np.exp(-1j * dt * scale * evals)[:, None] * (V.T @ U))

    U = np.eye(basis.dim, dtype=complex)
    t = 0.0
    for p in schedule.pulses:
        if p.time > t:
            U = free(U, p.time - t)
            t = p.time
        U = np.exp(1j * p.weight * n_diag)[:, None] * U
    if schedule.tau > t:
        U = free(U, schedule.tau - t)
    return U


def rotating_frame_unitary(schedule: PulseSchedule, basis: ConstrainedBasis
                           ) -> np.ndarray:
    """Product of exp(+i w_j Ntilde(t'_j)) over perturbation pulses in time
    order. Equals the lab-frame cycle unitary exactly (the echo closes the
    frame at stroboscopic times)."""
    U = np.eye(basis.dim, dtype=complex)
    for p in schedule.perturbation_pulses():
        Nt = conjugated_number(basis, schedule.omega, effective_time(p.time, schedule.tau))
        w, W = np.linalg.eigh(Nt)
        factor = (W * np.exp(1j * p.weight * w)) @ W.conj().T
        U = factor @ U
    return U


def principal_log_generator(U: np.ndarray, tau: float,
                            phase_margin: float = 0.02) -> np.ndarray:
    """(i/tau) log U on the principal branch.

    Guards against branch ambiguity: the eigenphase spread must stay inside
    (-pi, pi) with the given margin.
    """
    phases = np.angle(np.linalg.eigvals(U))
    if np.max(np.abs(phases)) > math.pi * (1.0 - phase_margin):
        raise ValueError(
            f"eigenphase spread {np.max(np.abs(phases)):.3f} too close to the "
            "branch cut; reduce pulse weights or tau")
    return 1j * sla.logm(U) / tau


def magnus_log_distance(schedule: PulseSchedule, basis: ConstrainedBasis,
                        order: int = 1) -> float:
    """Frobenius distance between (i/tau) log U_F and the Magnus truncation."""
    U = floquet_unitary(schedule, basis)
    G = principal_log_generator(U, schedule.tau)
    H = magnus_hf(basis, schedule, order)
    return float(np.linalg.norm(G - H))


def hf_evolution_eig(hf: np.ndarray | SparseOperator) -> tuple[np.ndarray, np.ndarray]:
    mat = hf.toarray() if isinstance(hf, SparseOperator) else np.asarray(hf)
    herm_dev = np.max(np.abs(mat - mat.conj().T))
    if herm_dev > 1e-10:
        raise ValueError(f"effective Hamiltonian not Hermitian (dev {herm_dev:.2e})")
    return np.linalg.eigh(mat)


def compare_floquet_vs_hf(schedule: PulseSchedule,
                          hf: np.ndarray | SparseOperator | EffectiveCoefficients,
                          state0: np.ndarray,
                          n_cycles: int,
                          basis: ConstrainedBasis,
                          prop: Propagator | None = None) -> np.ndarray:
    """Per-cycle squared overlap of exact Floquet and effective evolution.

    Returns fidelities at n = 0..n_cycles; entry 0 is 1 by construction.
    """
    check_normalized(state0)
    if isinstance(hf, EffectiveCoefficients):
        hf = assemble_hf(hf, basis)
    evals, V = hf_evolution_eig(hf)
    if prop is None:
        prop = Propagator(basis, schedule.omega)
    step_phase = np.exp(-1j * schedule.tau * evals)
    psi = state0.astype(complex)
    chi = V.conj().T @ psi  # effective state in the H_F eigenbasis
    fids = [1.0]
    for _ in range(n_cycles):
        psi = propagate_cycle(psi, schedule, prop)
        chi = step_phase * chi
        overlap = np.vdot(V @ chi, psi)
        fids.append(float(abs(overlap) ** 2))
    return np.asarray(fids)
