"""Ground-state integral equations of the U(1)-symmetric effective model.

The g=0 engineered Hamiltonian -J N - h H_PXYP + (h/4) H_ZIZ is an
integrable constrained XXZ chain at anisotropy -1/2 (rapidity angle pi/3).
Removing the blockade maps it onto an unconstrained chain of reduced length,
which is why the density constraint and the Luttinger formula carry (1-n0)
factors.

Two Fredholm equations on [-U0, U0] are solved by Gauss-Legendre Nystrom
discretization (the kernel is smooth: its denominator is bounded below by
1/2), with the Fermi boundary U0 fixed by an outer bisection/Brent solve on
the density constraint:

    integral Q = n0/(1-n0)          for n0 <= 1/3   (particle branch)
    integral Q = (1-2n0)/(1-n0)     for n0 >= 1/3   (hole branch)

The two targets agree at n0 = 1/3, where U0 diverges (effective half
filling); the branch threshold is pinned there so that U0, K, and J are
continuous across it.

The chemical potential is the density derivative of the J=0 energy curve,
evaluated with the dressed boundary derivative dC/dU0 = 2 Q(U0) eta(U0):

    J(n0) = -I_eps -/+ 2 sqrt(3) pi h Q(U0) / ((1-n0) eta(U0))

(- on the particle branch, + on the hole branch). This reproduces the exact
phase boundaries J/h -> -3 as n0 -> 0 and J/h -> +6 as n0 -> 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

MU = math.pi / 3          # rapidity angle of the anisotropy -1/2
BRANCH_N0 = 1.0 / 3.0     # effective half filling of the unblockaded chain
U_MAX = 40.0              # constraint saturates to its supremum ~ e^{-U0} here
K_HALF = 0.5              # stability thresholds marked on the phase diagram
K_EIGHTH = 0.125


class BetheConvergenceError(RuntimeError):
    """Outer solve could not bracket or converge the Fermi boundary."""


def driving_term(U: np.ndarray) -> np.ndarray:
    """Bare rapidity density (1/2pi) sin(mu) / (cosh U - cos(mu))."""
    return math.sin(MU) / (np.cosh(U) - math.cos(MU)) / (2 * math.pi)


def kernel(U: np.ndarray) -> np.ndarray:
    """Scattering kernel (1/2pi) sin(2mu) / (cosh U - cos(2mu))."""
    return math.sin(2 * MU) / (np.cosh(U) - math.cos(2 * MU)) / (2 * math.pi)


def bare_dispersion(U: np.ndarray, h: float) -> np.ndarray:
    """-2h sin^2(mu) / (cosh U - cos(mu)); negative for h > 0."""
    return -2.0 * h * math.sin(MU) ** 2 / (np.cosh(U) - math.cos(MU))


@dataclass(frozen=True)
class BetheSolution:
    """Converged quadrature solution at a given ground-state density."""

    n0: float
    branch: int               # 1: particle branch (n0 <= 1/3), 2: hole branch
    U0: float
    nodes: np.ndarray
    weights: np.ndarray
    Q: np.ndarray
    eta: np.ndarray
    Q_boundary: float
    eta_boundary: float
    constraint_target: float
    constraint_residual: float

    @property
    def K(self) -> float:
        return (1.0 - self.n0) ** 2 * self.eta_boundary**2


def _branch(n0: float) -> int:
    return 1 if n0 <= BRANCH_N0 else 2


def constraint_target(n0: float) -> float:
    if _branch(n0) == 1:
        return n0 / (1.0 - n0)
    return (1.0 - 2.0 * n0) / (1.0 - n0)


def _nystrom(U0: float, quad_n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Solve both Fredholm equations on [-U0, U0]; returns nodes, w, Q, eta."""
    x, w = leggauss(quad_n)
    nodes = U0 * x
    weights = U0 * w
    Kmat = kernel(nodes[:, None] - nodes[None, :]) * weights[None, :]
    A = np.eye(quad_n) + Kmat
    Q = np.linalg.solve(A, driving_term(nodes))
    eta = np.linalg.solve(A, np.ones(quad_n))
    return nodes, weights, Q, eta


def _constraint_integral(U0: float, quad_n: int) -> float:
    if U0 <= 0.0:
        return 0.0
    _, weights, Q, _ = _nystrom(U0, quad_n)
    return float(weights @ Q)


def _boundary_values(nodes, weights, Q, eta, U0) -> tuple[float, float]:
    # Nystrom interpolation to the boundary point U0 (nodes are interior)
    kb = kernel(U0 - nodes)
    qb = float(driving_term(np.asarray(U0)) - (kb * weights) @ Q)
    eb = float(1.0 - (kb * weights) @ eta)
    return qb, eb


def solve_integral_equations(n0: float, quad_n: int = 96,
                             tol: float = 1e-12) -> BetheSolution:
    """Solve for (U0, Q, eta) at ground-state density n0 in [0, 1/2].

    Endpoints return the exact degenerate limits (U0 = 0, eta = 1). The
    constraint integral is monotone in U0, so the outer solve brackets by
    geometric growth and finishes with Brent iteration.
    """
    if not 0.0 <= n0 <= 0.5:
        raise ValueError(f"density must lie in [0, 1/2], got {n0}")
    if quad_n < 32:
        raise ValueError("quad_n must be at least 32")
    target = constraint_target(n0)
    if target <= 0.0 or n0 in (0.0, 0.5):
        empty = np.zeros(0)
        return BetheSolution(
            n0=n0, branch=_branch(n0), U0=0.0, nodes=empty, weights=empty,
            Q=empty, eta=empty, Q_boundary=float(driving_term(np.asarray(0.0))),
            eta_boundary=1.0, constraint_target=target, constraint_residual=0.0)

    def f(U0):
        return _constraint_integral(U0, quad_n) - target

    hi = 1.0
    while f(hi) < 0.0:
        hi *= 2.0
        if hi > U_MAX:
            if f(U_MAX) < 0.0:
                raise BetheConvergenceError(
                    f"constraint target {target:.6f} unreachable below U0={U_MAX} "
                    f"(n0={n0}; densities this close to 1/3 need U0 -> infinity)")
            hi = U_MAX
            break
    U0 = brentq(f, hi / 2.0 if hi > 1.0 else 1e-12, hi, xtol=tol, rtol=4 * np.finfo(float).eps)
    nodes, weights, Q, eta = _nystrom(U0, quad_n)
    qb, eb = _boundary_values(nodes, weights, Q, eta, U0)
    return BetheSolution(
        n0=n0, branch=_branch(n0), U0=float(U0), nodes=nodes, weights=weights,
        Q=Q, eta=eta, Q_boundary=qb, eta_boundary=eb, constraint_target=target,
        constraint_residual=float(weights @ Q - target))


def luttinger_K(sol: BetheSolution) -> float:
    """K = (1-n0)^2 eta(U0)^2; 1 in the dilute limit, 1/4 at half filling."""
    return sol.K


def ground_energy(sol: BetheSolution, h: float) -> float:
    """J=0 ground energy per site relative to the empty chain:
    (1-n0) * integral eps(U) Q(U) dU. Nonpositive for h > 0."""
    if h <= 0:
        raise ValueError("h must be positive")
    if sol.U0 == 0.0:
        return 0.0
    return float((1.0 - sol.n0) * (sol.weights @ (bare_dispersion(sol.nodes, h) * sol.Q)))


def chemical_potential(sol: BetheSolution, h: float) -> float:
    """J at which the ground state sits at density n0 (units of the input h).

    J = -I_eps -/+ 2 sqrt(3) pi h Q(U0) / ((1-n0) eta(U0)), the sign given by
    the branch. The eta denominator never vanishes, so no singular points
    arise on (0, 1/2).
    """
    if h <= 0:
        raise ValueError("h must be positive")
    if sol.eta_boundary <= 0.0:
        raise ZeroDivisionError("eta(U0) vanished; solution is not converged")
    if sol.U0 == 0.0:
        i_eps = 0.0
    else:
        i_eps = float(sol.weights @ (bare_dispersion(sol.nodes, h) * sol.Q))
    dressed = 2.0 * math.sqrt(3.0) * math.pi * h * sol.Q_boundary \
        / ((1.0 - sol.n0) * sol.eta_boundary)
    return -i_eps - dressed if sol.branch == 1 else -i_eps + dressed


def phase_diagram(n0_grid: np.ndarray, h: float = 1.0,
                  quad_n: int = 96) -> dict[str, np.ndarray]:
    """Tabulate (n0, U0, K, J/h, E) over a density grid in (0, 1/2).

    Columns come back sorted by n0; the K = 1/2 and K = 1/8 stability
    thresholds are returned alongside for plotting overlays.
    """
    n0_grid = np.sort(np.asarray(n0_grid, dtype=float))
    if n0_grid[0] <= 0.0 or n0_grid[-1] >= 0.5:
        raise ValueError("grid must lie strictly inside (0, 1/2)")
    rows = {"n0": [], "U0": [], "K": [], "J_over_h": [], "E": []}
    for n0 in n0_grid:
        sol = solve_integral_equations(float(n0), quad_n=quad_n)
        rows["n0"].append(sol.n0)
        rows["U0"].append(sol.U0)
        rows["K"].append(luttinger_K(sol))
        rows["J_over_h"].append(chemical_potential(sol, h) / h)
        rows["E"].append(ground_energy(sol, h))
    out = {k: np.asarray(v) for k, v in rows.items()}
    out["K_thresholds"] = np.array([K_HALF, K_EIGHTH])
    out["J_over_h_boundaries"] = np.array([-3.0, 6.0])
    return out
