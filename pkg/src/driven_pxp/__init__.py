"""Floquet engineering of blockade-constrained Rydberg chains.

Exact state-vector toolkit for the pulsed-detuning drive of the PXP model:
echo and perturbed schedules, effective-Hamiltonian construction, the full
observable set (correlations, GHZ fidelity, quantum Fisher information,
domain-wall statistics), the Bethe-ansatz phase diagram of the integrable
point, the two-domain-wall analytics, a full-space van-der-Waals hardware
benchmark, and a coherence-time parameter sweep.
"""

__version__ = "0.1.0"
