"""Blockade-constrained Hilbert space for a 1D Rydberg chain.

Site convention: bit i of a configuration bitmask is site i, with bit 0 the
leftmost site. Bit value 1 means the site is in the Rydberg state, 0 means
ground. The nearest-neighbor blockade forbids two adjacent Rydberg sites;
adjacency is cyclic for periodic boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PERIODIC = "periodic"
OPEN = "open"

L_MAX = 28  # dense/Krylov desk-scale guard; dim(28, periodic) ~ 7.1e5


def _check_bc(bc: str) -> str:
    if bc not in (PERIODIC, OPEN):
        raise ValueError(f"boundary condition must be 'periodic' or 'open', got {bc!r}")
    return bc


def is_legal(bits: int, L: int, bc: str = PERIODIC) -> bool:
    """True iff no two adjacent sites (cyclic when periodic) are both Rydberg."""
    if L < 2:
        raise ValueError(f"chain length must be >= 2, got {L}")
    _check_bc(bc)
    if not 0 <= bits < (1 << L):
        raise ValueError(f"bitmask {bits:#x} out of range for L={L}")
    if bits & (bits >> 1):
        return False
    if bc == PERIODIC and (bits & 1) and (bits >> (L - 1)) & 1:
        return False
    return True


def lucas_number(n: int) -> int:
    """Lucas numbers: 2, 1, 3, 4, 7, 11, ..."""
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def fibonacci_number(n: int) -> int:
    """Fibonacci numbers: 0, 1, 1, 2, 3, 5, ..."""
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


@dataclass(frozen=True)
class ConstrainedBasis:
    """Ordered enumeration of blockade-legal configurations.

    states is sorted ascending by bitmask value; index maps a bitmask back to
    its ordinal. Immutable after construction and safe to share.
    """

    L: int
    bc: str
    states: np.ndarray  # int64, sorted ascending
    index: dict[int, int] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def tag(self) -> str:
        return f"constrained:L={self.L}:{self.bc}"

    def index_of(self, bits: int) -> int:
        """Ordinal of a legal configuration; KeyError if absent/illegal."""
        try:
            return self.index[int(bits)]
        except KeyError:
            raise KeyError(
                f"configuration {bits:#0{self.L + 2}b} is not in the "
                f"L={self.L} {self.bc} constrained basis"
            ) from None

    def occupations(self) -> np.ndarray:
        """(dim, L) array of site occupations n_i per basis state."""
        sites = np.arange(self.L)
        return (self.states[:, None] >> sites[None, :]) & 1


def enumerate_basis(L: int, bc: str = PERIODIC) -> ConstrainedBasis:
    """Enumerate all blockade-legal configurations, sorted by bitmask.

    dim equals Lucas(L) for periodic chains and Fibonacci(L+2) for open ones.
    """
    if not 2 <= L <= L_MAX:
        raise ValueError(f"chain length must satisfy 2 <= L <= {L_MAX}, got {L}")
    _check_bc(bc)
    states = [bits for bits in range(1 << L) if _fast_legal(bits, L, bc)]
    arr = np.asarray(states, dtype=np.int64)
    expected = lucas_number(L) if bc == PERIODIC else fibonacci_number(L + 2)
    assert len(arr) == expected, f"enumeration bug: {len(arr)} != {expected}"
    return ConstrainedBasis(L=L, bc=bc, states=arr, index={s: i for i, s in enumerate(states)})


def _fast_legal(bits: int, L: int, bc: str) -> bool:
    if bits & (bits >> 1):
        return False
    return not (bc == PERIODIC and (bits & 1) and (bits >> (L - 1)) & 1)


def neel_masks(L: int) -> tuple[int, int]:
    """Bitmasks of the two Néel states for even L.

    Z2 has the Rydberg excitation on site 0 (and all even sites); Z2' is its
    one-site translate. Staggered magnetization of Z2 is -1 under the
    (-1)^j sigma_j^z convention with j the bit index.
    """
    if L % 2:
        raise ValueError(f"Néel states need even L, got {L}")
    z2 = sum(1 << i for i in range(0, L, 2))
    z2p = sum(1 << i for i in range(1, L, 2))
    return z2, z2p


def basis_state(basis: ConstrainedBasis, bits: int) -> np.ndarray:
    """Unit state vector for a single configuration."""
    psi = np.zeros(basis.dim, dtype=complex)
    psi[basis.index_of(bits)] = 1.0
    return psi


def random_state(basis: ConstrainedBasis, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random normalized state over the constrained basis."""
    psi = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    return psi / np.linalg.norm(psi)
