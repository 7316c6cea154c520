"""Analytic two-domain-wall sector of the g=0 effective model.

Domain-wall bookkeeping on the ring: a bond d (sites d, d+1 cyclic) hosts a
wall iff the two occupations are equal; walls live in unit cell u = floor(d/2)
and their type is the bond parity d mod 2. With the Z2 excitation on site 0,
odd bonds carry Z2 -> Z2' walls and even bonds Z2' -> Z2 walls. A state with
N = L/2 - 1 Rydberg excitations holds exactly one wall of each type; in the
zero-total-momentum sector, the relative cell coordinate r = 0..L/2-1 turns
the model into an open tridiagonal chain with hop -2h and a +h diagonal
defect at both ends (adjacent-wall configurations).

The pair ansatz psi(r) = e^{ikr} + S(k,-k) e^{-ikr} solves the defect
condition at r=0 exactly with the scattering phase

    S(k,k') = -(e^{-ik} + e^{ik'} + 1) / (e^{ik} + e^{-ik'} + 1),

and the far defect quantizes the momenta through e^{ik(L/2-1)} = +/- S(k,-k).
Both statements are validated against restricted-sector exact
diagonalization to machine precision by validate_two_dw_sector.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .basis import ConstrainedBasis, enumerate_basis, neel_masks
from .operators import build_pxp, build_pxyp, build_ziz, number_diagonal

N_OBC = 2.0
N_PBC = math.sqrt(2.0)


def single_dispersion(k: float | np.ndarray, h: float) -> float | np.ndarray:
    """Single domain-wall band -2h cos k."""
    return -2.0 * h * np.cos(k)


def pair_energies(k: float, kprime: float, h: float, J: float, L: int
                  ) -> tuple[float, float]:
    """(vacuum, two-wall) energies; the L-dependence cancels in differences.

    E_vac = -J L/2 + (h/4) L
    E_pair = -J (L/2 - 1) - 2h (cos k + cos k') + (h/4)(L - 8)
    """
    e_vac = -J * L / 2 + (h / 4) * L
    e_pair = -J * (L / 2 - 1) - 2 * h * (math.cos(k) + math.cos(kprime)) \
        + (h / 4) * (L - 8)
    return e_vac, e_pair


def resonance_offset(k: float | np.ndarray, h: float, J: float):
    """delta(k) = E_{k,-k} - E_vac = J - 2h - 4h cos k."""
    return J - 2.0 * h - 4.0 * h * np.cos(k)


def scattering_phase(k: float, kprime: float) -> complex:
    """Two-wall Bethe scattering phase; unimodular away from the pole."""
    num = cmath.exp(-1j * k) + cmath.exp(1j * kprime) + 1.0
    den = cmath.exp(1j * k) + cmath.exp(-1j * kprime) + 1.0
    if abs(den) < 1e-12:
        raise ZeroDivisionError(
            f"scattering phase singular at (k, k') = ({k}, {kprime})")
    return -num / den


def coupling_lambda(k: float | np.ndarray, g: float, bc: str = "periodic"):
    """Matrix element between the Neel state and the normalized pair state:
    g (N_bc/2) 4i sin k / (2 e^{ik} + 1); vanishes with the group velocity."""
    nbc = N_PBC if bc == "periodic" else N_OBC
    k = np.asarray(k, dtype=float)
    out = g * (nbc / 2.0) * 4j * np.sin(k) / (2.0 * np.exp(1j * k) + 1.0)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class TwoDWValidation:
    """Quantized pair momenta and their comparison against restricted ED."""

    L: int
    h: float
    J: float
    roots: np.ndarray
    bethe_energies: np.ndarray
    ed_energies: np.ndarray
    max_energy_mismatch: float
    max_residual: float
    max_lambda_mismatch: float
    max_closure_defect: float
    vacuum_energy: float
    delta_finite_size: np.ndarray  # delta(k_m) vs (E_ED - E_vac), reported


def _two_wall_relative_coordinate(bits: int, L: int) -> int:
    occ = [(bits >> i) & 1 for i in range(L)]
    walls = [d for d in range(L) if occ[d] == occ[(d + 1) % L]]
    if len(walls) != 2:
        raise ValueError("configuration is not in the two-wall sector")
    d_odd = next(d for d in walls if d % 2 == 1)
    d_even = next(d for d in walls if d % 2 == 0)
    u_odd = ((d_odd + 1) // 2) % (L // 2)
    u_even = d_even // 2
    return (u_even - u_odd) % (L // 2)


def quantized_pair_momenta(L: int) -> np.ndarray:
    """Roots of e^{ik(L/2-1)} = +/- S(k,-k) in (0, pi).

    Writing S(k,-k) = exp(i(pi - 2 theta(k))) with theta = arg(2e^{ik}+1),
    the closure reads k(L/2-1) + 2 theta(k) = m pi; the left side is
    monotone, giving exactly L/2 roots for m = 1..L/2. The end defect (+h
    against hop 2h) is too weak to bind, so no complex roots occur.
    """
    M = L // 2

    def theta(k):
        return math.atan2(2 * math.sin(k), 2 * math.cos(k) + 1)

    roots = []
    for m in range(1, M + 1):
        def f(k, m=m):
            return k * (M - 1) + 2 * theta(k) - m * math.pi
        lo, hi = 1e-12, math.pi - 1e-12
        if f(lo) * f(hi) > 0:
            raise RuntimeError(f"quantization root m={m} failed to bracket")
        roots.append(brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return np.asarray(roots)


def validate_two_dw_sector(L: int, h: float, J: float,
                           g_probe: float = 1.0,
                           basis: ConstrainedBasis | None = None) -> TwoDWValidation:
    """Exact-diagonalization check of dispersion, quantization and coupling.

    Builds -J N - h H_PXYP + (h/4) H_ZIZ restricted to the zero- and
    two-wall sectors of an even periodic chain, projects on total momentum
    zero, and compares against the quantized Bethe pair states.
    """
    if L % 2 or L > 24:
        raise ValueError("needs an even periodic chain with L <= 24")
    if basis is None:
        basis = enumerate_basis(L, "periodic")
    M = L // 2
    n_diag = number_diagonal(basis)
    sector = np.where(n_diag == M - 1)[0]
    Hmat = (-J) * np.diag(n_diag) \
        + (-h) * build_pxyp(basis).toarray() \
        + (h / 4) * build_ziz(basis).toarray()
    Hs = Hmat[np.ix_(sector, sector)]

    rel = np.array([
        _two_wall_relative_coordinate(int(basis.states[i]), L) for i in sector])
    # total-momentum-zero projector: uniform center of mass at fixed r
    P0 = np.zeros((len(sector), M), dtype=complex)
    for a, r in enumerate(rel):
        P0[a, r] = 1.0 / math.sqrt(M)
    ed_energies = np.linalg.eigvalsh(P0.conj().T @ Hs @ P0)

    roots = quantized_pair_momenta(L)
    e_vac = pair_energies(0.0, 0.0, h, J, L)[0]
    bethe = np.sort([pair_energies(k, -k, h, J, L)[1] for k in roots])

    z2_mask, _ = neel_masks(L)
    z2 = np.zeros(basis.dim)
    z2[basis.index_of(z2_mask)] = 1.0
    pxp_z2 = build_pxp(basis).matvec(z2)

    max_res = max_lam = max_closure = 0.0
    deltas = []
    for k in roots:
        S = scattering_phase(k, -k)
        psi_rel = np.exp(1j * k * np.arange(M)) + S * np.exp(-1j * k * np.arange(M))
        amp = psi_rel[rel]
        e_pair = pair_energies(k, -k, h, J, L)[1]
        res = np.linalg.norm(Hs @ amp - e_pair * amp) / np.linalg.norm(amp)
        closure = min(abs(np.exp(1j * k * (M - 1)) - S),
                      abs(np.exp(1j * k * (M - 1)) + S))
        full = np.zeros(basis.dim, dtype=complex)
        full[sector] = amp
        lam_ed = g_probe * (N_PBC / L) * np.vdot(pxp_z2.astype(complex), full)
        lam_th = coupling_lambda(k, g_probe, "periodic")
        max_res = max(max_res, float(res))
        max_closure = max(max_closure, float(closure))
        max_lam = max(max_lam, abs(lam_ed - lam_th))
        deltas.append(resonance_offset(k, h, J))
    mismatch = float(np.max(np.abs(bethe - ed_energies)))
    return TwoDWValidation(
        L=L, h=h, J=J, roots=roots, bethe_energies=bethe,
        ed_energies=ed_energies, max_energy_mismatch=mismatch,
        max_residual=max_res, max_lambda_mismatch=float(max_lam),
        max_closure_defect=max_closure, vacuum_energy=e_vac,
        delta_finite_size=np.asarray(deltas))
