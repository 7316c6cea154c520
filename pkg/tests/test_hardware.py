import math

import numpy as np
import pytest
import scipy.linalg as sla

from driven_pxp.basis import enumerate_basis, random_state
from driven_pxp.drive import build_perturbed_schedule
from driven_pxp.effective import pure_hopping_params
from driven_pxp.hardware import (DenseStaticIntegrator, MidpointKrylovIntegrator,
                                 SplitStepIntegrator, VdWModel,
                                 blockade_violation_diagonal,
                                 build_vdw_hamiltonian, full_number_diagonal,
                                 interaction_diagonal, sample_schedule)
from driven_pxp.operators import build_pxp, number_diagonal

TAU = 2 * math.pi / 1.3


def fig4_schedule(tau=TAU):
    eps, gamma, theta = pure_hopping_params(0.45)
    return build_perturbed_schedule(1.0, tau, eps, gamma, theta)


class TestVdWModel:
    def test_interaction_values(self):
        model = VdWModel(L=12, omega=1.0, Rb=1.5)
        V = model.interaction_matrix()
        assert V[0, 1] == pytest.approx(1.5**6)          # ~11.39
        assert V[0, 2] == pytest.approx((1.5 / 2) ** 6)  # ~0.178
        assert V[0, 11] == pytest.approx(1.5**6)         # ring distance 1
        assert np.allclose(V, V.T)

    def test_rb_zero_limit(self):
        model = VdWModel(L=6, omega=1.0, Rb=1e-3)
        H = build_vdw_hamiltonian(model).toarray()
        free = sum(
            np.kron(np.kron(np.eye(1 << (5 - i)), np.array([[0, .5], [.5, 0]])),
                    np.eye(1 << i)) for i in range(6))
        assert np.max(np.abs(H - free)) < 1e-9

    def test_hermitian_real(self):
        model = VdWModel(L=8, omega=1.0, Rb=1.5)
        H = build_vdw_hamiltonian(model).toarray()
        assert np.max(np.abs(H - H.T.conj())) == 0.0
        assert np.max(np.abs(H.imag)) == 0.0

    def test_size_guard(self):
        with pytest.raises(ValueError):
            VdWModel(L=18, omega=1.0, Rb=1.5)

    def test_violation_diagonal(self):
        viol = blockade_violation_diagonal(4, "periodic")
        assert viol[0b0011] == 1.0
        assert viol[0b1001] == 1.0  # cyclic pair
        assert viol[0b0101] == 0.0


class TestSampledSchedule:
    def test_lobe_areas(self):
        sched = fig4_schedule()
        w = 0.046 * TAU
        sam = sample_schedule(sched, w=w, delta_mf=0.09, n_cycles=3, dt=w / 25)
        assert sam.lobe_quadrature_defect() < 1e-6

    def test_exact_integral_matches_total_weight(self):
        sched = fig4_schedule()
        w = 0.046 * TAU
        sam = sample_schedule(sched, w=w, delta_mf=0.0, n_cycles=4, dt=w / 25)
        # n_cycles full periods: per period -2pi (echo) + gamma + 2 eps
        eps, gamma, theta = pure_hopping_params(0.45)
        per_period = -2 * math.pi + gamma + 2 * eps
        total = sam.delta_integral(0.0, sam.t_end)
        assert total == pytest.approx(4 * per_period, abs=1e-9)

    def test_dt_guard(self):
        sched = fig4_schedule()
        with pytest.raises(ValueError):
            sample_schedule(sched, w=0.1, delta_mf=0.0, n_cycles=1, dt=0.02)

    def test_fig4_settings(self):
        sched = fig4_schedule()
        w = 0.046 * TAU
        sam = sample_schedule(sched, w=w, delta_mf=0.09, n_cycles=2, dt=w / 20)
        assert sam.w == pytest.approx(0.046 * TAU)
        assert sam.delta_mf == 0.09
        # echo lobes are negative pi
        echo_weights = [wt for wt in sam.weights if abs(abs(wt) - math.pi) < 1e-12]
        assert echo_weights and all(wt == -math.pi for wt in echo_weights)


class TestIntegrators:
    def test_no_drive_matches_exponential(self):
        L = 8
        model = VdWModel(L=L, omega=1.0, Rb=1.5)
        sched = fig4_schedule()
        sam = sample_schedule(sched, w=0.046 * TAU, delta_mf=0.0, n_cycles=1,
                              dt=0.046 * TAU / 30)
        object.__setattr__(sam, "weights", np.zeros_like(sam.weights))
        H = build_vdw_hamiltonian(model).toarray()
        rng = np.random.default_rng(5)
        psi0 = rng.normal(size=1 << L) + 1j * rng.normal(size=1 << L)
        psi0 /= np.linalg.norm(psi0)
        stepper = SplitStepIntegrator(L, 1.0, interaction_diagonal(model),
                                      full_number_diagonal(L), sam, order=4)
        out, _ = stepper.run(psi0, 0.0, sam.t_end, sam.dt)
        exact = sla.expm(-1j * sam.t_end * H) @ psi0
        assert np.linalg.norm(out - exact) < 1e-5

    def test_constant_detuning_matches_exponential(self):
        L = 6
        model = VdWModel(L=L, omega=1.0, Rb=1.5)
        sched = fig4_schedule()
        sam = sample_schedule(sched, w=0.046 * TAU, delta_mf=0.13, n_cycles=1,
                              dt=0.046 * TAU / 30)
        object.__setattr__(sam, "weights", np.zeros_like(sam.weights))
        H = build_vdw_hamiltonian(model).toarray() \
            - 0.13 * np.diag(full_number_diagonal(L))
        psi0 = np.zeros(1 << L, dtype=complex)
        psi0[1] = 1.0
        stepper = SplitStepIntegrator(L, 1.0, interaction_diagonal(model),
                                      full_number_diagonal(L), sam, order=4)
        out, _ = stepper.run(psi0, 0.0, sam.t_end, sam.dt)
        exact = sla.expm(-1j * sam.t_end * H) @ psi0
        assert np.linalg.norm(out - exact) < 1e-5

    def test_unitarity(self):
        L = 10
        model = VdWModel(L=L, omega=1.0, Rb=1.5)
        sched = fig4_schedule()
        w = 0.046 * TAU
        sam = sample_schedule(sched, w=w, delta_mf=0.09, n_cycles=2, dt=w / 30)
        stepper = SplitStepIntegrator(L, 1.0, interaction_diagonal(model),
                                      full_number_diagonal(L), sam, order=4)
        psi0 = np.zeros(1 << L, dtype=complex)
        psi0[1] = 1.0
        out, _ = stepper.run(psi0, 0.0, sam.t_end, sam.dt)
        assert abs(np.linalg.norm(out) - 1.0) < 1e-10

    def test_split_vs_midpoint_krylov(self):
        # two independent steppers agree at the midpoint rule's accuracy
        L = 8
        model = VdWModel(L=L, omega=1.0, Rb=1.5)
        sched = fig4_schedule()
        w = 0.046 * TAU
        sam = sample_schedule(sched, w=w, delta_mf=0.09, n_cycles=1, dt=w / 50)
        psi0 = np.zeros(1 << L, dtype=complex)
        psi0[1] = 1.0
        split = SplitStepIntegrator(L, 1.0, interaction_diagonal(model),
                                    full_number_diagonal(L), sam, order=4)
        a, _ = split.run(psi0, 0.0, sam.t_end, sam.dt)
        mid = MidpointKrylovIntegrator(build_vdw_hamiltonian(model),
                                       full_number_diagonal(L), sam)
        b, _ = mid.run(psi0, 0.0, sam.t_end, sam.dt)
        assert np.linalg.norm(a - b) < 5e-3

    def test_fourth_order_convergence(self):
        L = 8
        model = VdWModel(L=L, omega=1.0, Rb=1.5)
        sched = fig4_schedule()
        w = 0.046 * TAU
        sam = sample_schedule(sched, w=w, delta_mf=0.09, n_cycles=1, dt=w / 20)
        psi0 = np.zeros(1 << L, dtype=complex)
        psi0[1] = 1.0
        stepper = SplitStepIntegrator(L, 1.0, interaction_diagonal(model),
                                      full_number_diagonal(L), sam, order=4)
        outs = {}
        for frac in (10, 20, 40):
            outs[frac], _ = stepper.run(psi0, 0.0, sam.t_end, w / frac)
        d1 = np.linalg.norm(outs[10] - outs[20])
        d2 = np.linalg.norm(outs[20] - outs[40])
        assert d1 / d2 > 8.0  # fourth order: factor 16 up to noise


class TestDeltaLimit:
    def test_w_to_zero_recovers_delta_pulses(self, basis10, rng):
        # constrained-space check: Gaussian realization converges to the
        # delta protocol (boundary kicks split across the window edges);
        # the distance shrinks monotonically, first order in w
        from driven_pxp.drive import Propagator, propagate_cycle

        sched = build_perturbed_schedule(1.0, TAU, *pure_hopping_params(0.45))
        n_cyc = 2
        basis = basis10
        h_static = 0.5 * build_pxp(basis).toarray()
        n_diag = number_diagonal(basis)
        psi0 = random_state(basis, rng)

        # delta reference with the boundary kick split in half
        gamma_theta = sched.perturbation_pulses()[0].weight
        prop = Propagator(basis, 1.0)
        ref = np.exp(1j * 0.5 * gamma_theta * n_diag) * psi0
        inner = build_perturbed_schedule(1.0, TAU, *pure_hopping_params(0.45))
        for n in range(n_cyc):
            if n:
                ref = np.exp(1j * gamma_theta * n_diag) * ref
            t = 0.0
            for p in inner.pulses:
                if p.time == 0.0:
                    continue
                if p.time > t:
                    ref = prop.free(ref, p.time - t)
                    t = p.time
                ref = prop.kick(ref, p.weight)
            ref = prop.free(ref, inner.tau - t)
        ref = np.exp(1j * 0.5 * gamma_theta * n_diag) * ref

        dists = []
        for wfrac in (0.02, 0.01, 0.005):
            w = wfrac * TAU
            sam = sample_schedule(sched, w=w, delta_mf=0.0, n_cycles=n_cyc,
                                  dt=w / 40, echo_sign=+1.0)
            integ = DenseStaticIntegrator(h_static, n_diag, sam)
            out, _ = integ.run(psi0, 0.0, sam.t_end, sam.dt)
            dists.append(np.linalg.norm(out - ref))
        assert dists[0] > dists[1] > dists[2]
        assert dists[0] / dists[2] == pytest.approx(4.0, rel=0.4)
