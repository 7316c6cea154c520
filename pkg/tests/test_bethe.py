import numpy as np
import pytest
import scipy.sparse.linalg as spla

from driven_pxp.basis import enumerate_basis
from driven_pxp.bethe import (BetheConvergenceError, chemical_potential,
                              constraint_target, ground_energy, luttinger_K,
                              phase_diagram, solve_integral_equations)
from driven_pxp.operators import build_pxyp, build_ziz, number_diagonal


class TestSolver:
    def test_dilute_limit(self):
        sol = solve_integral_equations(1e-3)
        assert luttinger_K(sol) == pytest.approx(1.0, abs=0.01)
        assert sol.U0 < 0.05

    def test_half_filling_limit(self):
        sol = solve_integral_equations(0.4999)
        assert luttinger_K(sol) == pytest.approx(0.25, abs=0.01)

    def test_exact_endpoints(self):
        lo = solve_integral_equations(0.0)
        hi = solve_integral_equations(0.5)
        assert lo.U0 == 0.0 and hi.U0 == 0.0
        assert luttinger_K(lo) == pytest.approx(1.0)
        assert luttinger_K(hi) == pytest.approx(0.25)

    def test_quadrature_self_convergence(self):
        a = solve_integral_equations(0.25, quad_n=64)
        b = solve_integral_equations(0.25, quad_n=128)
        assert abs(luttinger_K(a) - luttinger_K(b)) < 1e-6
        assert abs(chemical_potential(a, 1.0) - chemical_potential(b, 1.0)) < 1e-6
        assert abs(ground_energy(a, 1.0) - ground_energy(b, 1.0)) < 1e-6

    def test_constraint_residual_and_symmetry(self):
        sol = solve_integral_equations(0.3, quad_n=96)
        assert abs(sol.constraint_residual) < 1e-9
        # Gauss-Legendre grid is symmetric; Q and eta must be even
        assert np.max(np.abs(sol.Q - sol.Q[::-1])) < 1e-10
        assert np.max(np.abs(sol.eta - sol.eta[::-1])) < 1e-10
        assert np.all(sol.Q > 0)

    def test_branch_threshold_continuity(self):
        # the two constraint targets agree only at n0 = 1/3
        assert constraint_target(1/3 - 1e-12) == pytest.approx(
            constraint_target(1/3 + 1e-12), abs=1e-9)
        below = solve_integral_equations(0.325)
        above = solve_integral_equations(0.342)
        assert below.branch == 1 and above.branch == 2
        assert abs(luttinger_K(below) - luttinger_K(above)) < 0.02

    def test_density_guard(self):
        with pytest.raises(ValueError):
            solve_integral_equations(0.6)
        with pytest.raises(ValueError):
            solve_integral_equations(0.2, quad_n=8)

    def test_unreachable_target_near_third(self):
        with pytest.raises(BetheConvergenceError):
            solve_integral_equations(1/3)


class TestThermodynamics:
    def test_paramagnet_boundary(self):
        sol = solve_integral_equations(1e-3)
        assert chemical_potential(sol, 1.0) == pytest.approx(-3.0, rel=0.01)

    def test_z2_boundary(self):
        sol = solve_integral_equations(0.4999)
        assert chemical_potential(sol, 1.0) == pytest.approx(6.0, rel=0.01)

    def test_energy_negative_inside(self):
        for n0 in (0.1, 0.25, 0.4):
            assert ground_energy(solve_integral_equations(n0), 1.0) < 0.0

    def test_energy_scales_with_h(self):
        sol = solve_integral_equations(0.2)
        assert ground_energy(sol, 2.0) == pytest.approx(2 * ground_energy(sol, 1.0))

    def test_chemical_potential_is_energy_derivative(self):
        # J(n0) = d e0 / d n0, checked against central differences of the
        # independently computed energy curve
        for n0 in (0.15, 0.28, 0.42):
            d = 1e-4
            e_plus = ground_energy(solve_integral_equations(n0 + d, quad_n=128), 1.0)
            e_minus = ground_energy(solve_integral_equations(n0 - d, quad_n=128), 1.0)
            J_fd = (e_plus - e_minus) / (2 * d)
            J = chemical_potential(solve_integral_equations(n0, quad_n=128), 1.0)
            assert J == pytest.approx(J_fd, rel=2e-3, abs=2e-3)

    def test_h_positive_required(self):
        sol = solve_integral_equations(0.2)
        with pytest.raises(ValueError):
            ground_energy(sol, -1.0)


class TestPhaseDiagram:
    def test_table_structure_and_boundaries(self):
        grid = np.concatenate([np.linspace(1e-3, 0.32, 25),
                               np.linspace(0.345, 0.4999, 13)])
        table = phase_diagram(grid, h=1.0)
        jh = table["J_over_h"]
        assert jh[0] == pytest.approx(-3.0, rel=0.01)
        assert jh[-1] == pytest.approx(6.0, rel=0.01)
        assert np.all(np.diff(jh) > 0)           # strictly monotone
        K = table["K"]
        assert K.min() > 0.25 - 0.01 and K.max() < 1.0 + 0.01
        assert np.all(np.diff(K) < 0)            # monotone decreasing in n0
        assert np.max(np.abs(np.diff(K))) < 0.05  # continuous on this grid
        assert np.all(np.diff(table["n0"]) > 0)

    def test_grid_guard(self):
        with pytest.raises(ValueError):
            phase_diagram(np.array([0.0, 0.2]))


@pytest.mark.slow
class TestEDCrossCheck:
    def test_quarter_filling_energy(self):
        # ground state of -h H_PXYP + (h/4) H_ZIZ in the N = L/4 sector,
        # relative to the empty chain, extrapolated in 1/L^2 against the
        # integral-equation energy density
        h = 1.0
        vals = {}
        for L in (12, 16, 20):
            basis = enumerate_basis(L, "periodic")
            n = number_diagonal(basis)
            sector = np.where(n == L // 4)[0]
            H = (-h) * build_pxyp(basis).matrix + (h / 4) * build_ziz(basis).matrix
            Hs = H[np.ix_(sector, sector)]
            if Hs.shape[0] > 400:
                e0 = spla.eigsh(Hs, k=1, which="SA", return_eigenvectors=False)[0]
            else:
                e0 = np.linalg.eigvalsh(Hs.toarray())[0]
            vals[L] = (e0 - h / 4 * L) / L
        bethe = ground_energy(solve_integral_equations(0.25), h)
        L1, L2 = 16, 20
        extrap = (L2**2 * vals[L2] - L1**2 * vals[L1]) / (L2**2 - L1**2)
        assert extrap == pytest.approx(bethe, rel=0.02)
        for L in (12, 16, 20):
            assert vals[L] == pytest.approx(bethe, rel=0.02)
