"""Sparse Hamiltonian terms of the driven blockaded chain.

All builders act in a ConstrainedBasis. Conventions (fixed once, used
everywhere): sigma^z = +1 on ground, -1 on Rydberg, so P = (1+sigma^z)/2 and
n = (1-sigma^z)/2; sigma^x = |g><r| + |r><g|; sigma^y = -i|g><r| + i|r><g|.
This is the standard Pauli triple with the ground state as the +1 eigenstate
of sigma^z; it makes the short-time expansion of the conjugated number
operator carry a minus sign on the single-flip term (see effective.py).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .basis import ConstrainedBasis

HERMITICITY_TOL = 1e-12


@dataclass
class SparseOperator:
    """Hermitian operator in coordinate form with a CSR view for matvec."""

    dim: int
    matrix: sp.csr_matrix
    hermitian: bool
    basis_tag: str
    _dense: np.ndarray | None = field(default=None, repr=False)

    def matvec(self, psi: np.ndarray) -> np.ndarray:
        return self.matrix @ psi

    def __matmul__(self, psi: np.ndarray) -> np.ndarray:
        return self.matrix @ psi

    def toarray(self) -> np.ndarray:
        if self._dense is None:
            self._dense = self.matrix.toarray()
        return self._dense

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    def entries(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Coordinate triplets (row, col, value), duplicates merged."""
        coo = self.matrix.tocoo()
        return coo.row, coo.col, coo.data

    def dump_triplets(self, path) -> None:
        """Debug dump as JSON rows of (row, col, re, im)."""
        rows, cols, vals = self.entries()
        payload = {
            "dim": self.dim,
            "basis": self.basis_tag,
            "hermitian": self.hermitian,
            "entries": [
                [int(r), int(c), float(v.real), float(v.imag)]
                for r, c, v in zip(rows, cols, vals)
            ],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)

    def check_hermitian(self, tol: float = HERMITICITY_TOL) -> float:
        diff = (self.matrix - self.matrix.getH()).tocoo()
        return 0.0 if diff.nnz == 0 else float(np.abs(diff.data).max())


def _operator(rows, cols, vals, basis: ConstrainedBasis, dtype=float) -> SparseOperator:
    mat = sp.coo_matrix(
        (np.asarray(vals, dtype=dtype), (rows, cols)),
        shape=(basis.dim, basis.dim),
    ).tocsr()
    mat.sum_duplicates()
    op = SparseOperator(dim=basis.dim, matrix=mat, hermitian=True, basis_tag=basis.tag)
    err = op.check_hermitian()
    if err > HERMITICITY_TOL:
        raise AssertionError(f"builder produced non-Hermitian matrix, max dev {err:.2e}")
    return op


def _diagonal(diag: np.ndarray, basis: ConstrainedBasis) -> SparseOperator:
    return _operator(
        np.arange(basis.dim), np.arange(basis.dim), diag, basis,
        dtype=complex if np.iscomplexobj(diag) else float,
    )


def _neighbors_empty(bits: int, i: int, L: int, bc: str) -> bool:
    # Missing neighbor on an open edge counts as empty (projector -> identity).
    left, right = i - 1, i + 1
    if bc == "periodic":
        left %= L
        right %= L
        return not ((bits >> left) & 1 or (bits >> right) & 1)
    ok = True
    if left >= 0:
        ok &= not (bits >> left) & 1
    if right < L:
        ok &= not (bits >> right) & 1
    return ok


def build_pxp(basis: ConstrainedBasis) -> SparseOperator:
    """Blockaded transverse field: sum_i P_{i-1} sigma_i^x P_{i+1}.

    Real symmetric; connects configurations differing by one flip at a site
    whose neighbors are both ground.
    """
    L, bc = basis.L, basis.bc
    rows, cols, vals = [], [], []
    for a, bits in enumerate(basis.states):
        bits = int(bits)
        for i in range(L):
            if _neighbors_empty(bits, i, L, bc):
                b = basis.index[bits ^ (1 << i)]
                rows.append(b)
                cols.append(a)
                vals.append(1.0)
    return _operator(rows, cols, vals, basis)


def build_pyp(basis: ConstrainedBasis) -> SparseOperator:
    """Blockaded sigma^y flip: sum_i P_{i-1} sigma_i^y P_{i+1}.

    <r|sigma^y|g> = +i, <g|sigma^y|r> = -i; imaginary antisymmetric in the
    configuration basis, Hermitian overall.
    """
    L, bc = basis.L, basis.bc
    rows, cols, vals = [], [], []
    for a, bits in enumerate(basis.states):
        bits = int(bits)
        for i in range(L):
            if _neighbors_empty(bits, i, L, bc):
                occupied = (bits >> i) & 1
                b = basis.index[bits ^ (1 << i)]
                rows.append(b)
                cols.append(a)
                # flipping g->r picks up +i, r->g picks up -i
                vals.append(-1j if occupied else 1j)
    return _operator(rows, cols, vals, basis, dtype=complex)


def build_pxyp(basis: ConstrainedBasis) -> SparseOperator:
    """Blockaded exchange: (1/2) sum_i P_{i-1}(X_i X_{i+1} + Y_i Y_{i+1}) P_{i+2}.

    Hops one excitation between adjacent sites when the outer neighbors are
    empty; the two Pauli products contribute 1/2 each so the hop amplitude
    is 1. Conserves total Rydberg number.
    """
    L, bc = basis.L, basis.bc
    rows, cols, vals = [], [], []
    for a, bits in enumerate(basis.states):
        bits = int(bits)
        for i in range(L):
            j = i + 1
            if bc == "periodic":
                j %= L
            elif j >= L:
                continue
            ni, nj = (bits >> i) & 1, (bits >> j) & 1
            if ni == nj:
                continue  # exchange only moves a single excitation
            left, right = i - 1, j + 1
            if bc == "periodic":
                left %= L
                right %= L
                if (bits >> left) & 1 or (bits >> right) & 1:
                    continue
            else:
                if left >= 0 and (bits >> left) & 1:
                    continue
                if right < L and (bits >> right) & 1:
                    continue
            b = basis.index[bits ^ (1 << i) ^ (1 << j)]
            rows.append(b)
            cols.append(a)
            vals.append(1.0)
    return _operator(rows, cols, vals, basis)


def build_number(basis: ConstrainedBasis) -> SparseOperator:
    """Total Rydberg number N = sum_i n_i (diagonal popcount)."""
    diag = np.array([bin(int(b)).count("1") for b in basis.states], dtype=float)
    return _diagonal(diag, basis)


def number_diagonal(basis: ConstrainedBasis) -> np.ndarray:
    """Diagonal of N as a plain vector (propagation fast path)."""
    return np.array([bin(int(b)).count("1") for b in basis.states], dtype=float)


def build_local_n(basis: ConstrainedBasis, i: int) -> SparseOperator:
    """Local occupation n_i."""
    _check_site(basis, i)
    diag = ((basis.states >> i) & 1).astype(float)
    return _diagonal(diag, basis)


def build_sigma_z(basis: ConstrainedBasis, i: int) -> SparseOperator:
    """sigma_i^z with +1 on ground, -1 on Rydberg."""
    _check_site(basis, i)
    diag = 1.0 - 2.0 * ((basis.states >> i) & 1).astype(float)
    return _diagonal(diag, basis)


def build_pzp(basis: ConstrainedBasis) -> SparseOperator:
    """Diagonal term sum_i P_{i-1} sigma_i^z P_{i+1}."""
    L, bc = basis.L, basis.bc
    diag = np.zeros(basis.dim)
    for a, bits in enumerate(basis.states):
        bits = int(bits)
        total = 0.0
        for i in range(L):
            if _neighbors_empty(bits, i, L, bc):
                total += 1.0 - 2.0 * ((bits >> i) & 1)
        diag[a] = total
    return _diagonal(diag, basis)


def build_ziz(basis: ConstrainedBasis) -> SparseOperator:
    """Next-nearest-neighbor sum_i sigma_i^z sigma_{i+2}^z (diagonal)."""
    L, bc = basis.L, basis.bc
    diag = np.zeros(basis.dim)
    for a, bits in enumerate(basis.states):
        bits = int(bits)
        total = 0.0
        for i in range(L):
            j = i + 2
            if bc == "periodic":
                j %= L
            elif j >= L:
                continue
            zi = 1.0 - 2.0 * ((bits >> i) & 1)
            zj = 1.0 - 2.0 * ((bits >> j) & 1)
            total += zi * zj
        diag[a] = total
    return _diagonal(diag, basis)


def parity_diagonal(basis: ConstrainedBasis) -> np.ndarray:
    """Diagonal of exp(i pi N) = prod_i sigma_i^z: (-1)^N per configuration."""
    n = number_diagonal(basis)
    return np.where(n % 2 == 0, 1.0, -1.0)


def _check_site(basis: ConstrainedBasis, i: int) -> None:
    if not 0 <= i < basis.L:
        raise ValueError(f"site index {i} out of range for L={basis.L}")


# ---------------------------------------------------------------------------
# Full 2^L-space constructions. Used as the construct-then-project oracle in
# tests and as the arena for the van-der-Waals hardware benchmark.
# ---------------------------------------------------------------------------

_ID2 = sp.identity(2, format="csr")
_SX = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
_SY = sp.csr_matrix(np.array([[0.0, -1j], [1j, 0.0]]))
_SZ = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))
_PROJ_G = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, 0.0]]))
_NUM = sp.csr_matrix(np.array([[0.0, 0.0], [0.0, 1.0]]))


def site_operator(op: sp.spmatrix, i: int, L: int) -> sp.csr_matrix:
    """Single-site operator embedded in the full 2^L space.

    Bit i of the configuration index addresses site i, so site 0 is the
    fastest-varying tensor factor.
    """
    out = sp.identity(1, format="csr")
    for site in range(L):
        factor = op if site == i else _ID2
        out = sp.kron(factor, out, format="csr")  # site 0 fastest
    return out


def full_space_operator(name: str, L: int, bc: str) -> sp.csr_matrix:
    """Named term assembled in the full 2^L space by literal products."""
    def P(i):
        return site_operator(_PROJ_G, i % L, L)

    def X(i):
        return site_operator(_SX, i % L, L)

    def Y(i):
        return site_operator(_SY, i % L, L)

    def Z(i):
        return site_operator(_SZ, i % L, L)

    def n(i):
        return site_operator(_NUM, i % L, L)

    dim = 1 << L
    H = sp.csr_matrix((dim, dim), dtype=complex)
    periodic = bc == "periodic"

    def proj_or_id(i):
        if periodic:
            return P(i)
        if 0 <= i < L:
            return P(i)
        return sp.identity(dim, format="csr")

    if name == "pxp":
        for i in range(L):
            H = H + proj_or_id(i - 1) @ X(i) @ proj_or_id(i + 1)
    elif name == "pyp":
        for i in range(L):
            H = H + proj_or_id(i - 1) @ Y(i) @ proj_or_id(i + 1)
    elif name == "pzp":
        for i in range(L):
            H = H + proj_or_id(i - 1) @ Z(i) @ proj_or_id(i + 1)
    elif name == "pxyp":
        for i in range(L):
            j = i + 1
            if not periodic and j >= L:
                continue
            term = X(i) @ X(j) + Y(i) @ Y(j)
            H = H + 0.5 * proj_or_id(i - 1) @ term @ proj_or_id(j + 1)
    elif name == "ziz":
        for i in range(L):
            j = i + 2
            if not periodic and j >= L:
                continue
            H = H + Z(i) @ Z(j)
    elif name == "number":
        for i in range(L):
            H = H + n(i)
    else:
        raise ValueError(f"unknown operator name {name!r}")
    return H.tocsr()


def project_to_basis(full: sp.spmatrix, basis: ConstrainedBasis) -> np.ndarray:
    """Restrict a full-space operator to the constrained subspace (dense)."""
    idx = np.asarray(basis.states, dtype=np.int64)
    return full.tocsr()[np.ix_(idx, idx)].toarray()
