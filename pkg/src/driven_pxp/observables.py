"""Diagnostics over constrained-basis state vectors.

States are plain complex numpy vectors over a ConstrainedBasis (norm 1 within
1e-8). All functions here are read-only and safe to evaluate concurrently.

Sign conventions (documented once, used everywhere): sigma^z = +1 on ground;
the staggered weight is (-1)^j with j the bit/site index; |Z2> has its
Rydberg excitation on site 0, so its staggered magnetization is -1.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .basis import ConstrainedBasis, neel_masks

NORM_TOL = 1e-8


def check_normalized(psi: np.ndarray, tol: float = NORM_TOL) -> None:
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"state is not normalized: ||psi|| = {nrm!r}")


def _probabilities(psi: np.ndarray) -> np.ndarray:
    return np.abs(psi) ** 2


def site_densities(psi: np.ndarray, basis: ConstrainedBasis) -> np.ndarray:
    """<n_j> for every site."""
    return _probabilities(psi) @ basis.occupations()


def rydberg_density(psi: np.ndarray, basis: ConstrainedBasis) -> float:
    """(1/L) sum_j <n_j>."""
    return float(site_densities(psi, basis).mean())


def staggered_magnetization(psi: np.ndarray, basis: ConstrainedBasis) -> float:
    """(1/L) sum_j (-1)^j <sigma_j^z>."""
    z = 1.0 - 2.0 * site_densities(psi, basis)
    signs = np.where(np.arange(basis.L) % 2 == 0, 1.0, -1.0)
    return float((signs * z).mean())


def connected_zz(psi: np.ndarray, basis: ConstrainedBasis) -> np.ndarray:
    """Full L x L connected correlation matrix <z_i z_j> - <z_i><z_j>."""
    p = _probabilities(psi)
    Z = 1.0 - 2.0 * basis.occupations().astype(float)
    zbar = p @ Z
    zz = Z.T @ (p[:, None] * Z)
    return zz - np.outer(zbar, zbar)


def staggered_z_diagonal(basis: ConstrainedBasis) -> np.ndarray:
    """Diagonal of the QFI generator sum_j (-1)^j sigma_j^z."""
    Z = 1.0 - 2.0 * basis.occupations().astype(float)
    signs = np.where(np.arange(basis.L) % 2 == 0, 1.0, -1.0)
    return Z @ signs


def qfi_density(psi: np.ndarray, basis: ConstrainedBasis) -> float:
    """Variance of the staggered-z generator divided by L.

    Normalized so the L-site GHZ state gives exactly L; any eigenstate of the
    generator gives 0.
    """
    p = _probabilities(psi)
    o = staggered_z_diagonal(basis)
    mean = float(p @ o)
    var = float(p @ o**2) - mean**2
    return var / basis.L


def z2_indices(basis: ConstrainedBasis) -> tuple[int, int]:
    z2, z2p = neel_masks(basis.L)
    return basis.index_of(z2), basis.index_of(z2p)


def ghz_fidelity(psi: np.ndarray, basis: ConstrainedBasis) -> tuple[float, float]:
    """max_phi |<GHZ(phi)|psi>|^2 with GHZ = (|Z2> + e^{i phi}|Z2'>)/sqrt(2).

    Closed form: with a = <Z2|psi>, b = <Z2'|psi>, the maximum is
    (|a|^2+|b|^2)/2 + |a||b| at phi* = arg(b) - arg(a).
    """
    i2, i2p = z2_indices(basis)
    a, b = psi[i2], psi[i2p]
    fid = (abs(a) ** 2 + abs(b) ** 2) / 2 + abs(a) * abs(b)
    phi_star = float(np.angle(b) - np.angle(a))
    return float(fid), phi_star


def z2_populations(psi: np.ndarray, basis: ConstrainedBasis) -> tuple[float, float]:
    i2, i2p = z2_indices(basis)
    return float(abs(psi[i2]) ** 2), float(abs(psi[i2p]) ** 2)


# ---------------------------------------------------------------------------
# Domain-wall distance distribution (periodic, even L)
# ---------------------------------------------------------------------------

_pair_cache: dict[str, list[list[int]]] = {}


def _config_pair_distances(bits: int, L: int) -> list[int]:
    """Clockwise distances from each Z2->Z2' wall to the next Z2'->Z2 wall.

    A bond d hosts a wall iff n_d == n_{d+1} (cyclic). With the excitation of
    Z2 on site 0, Z2->Z2' walls sit on odd bonds and Z2'->Z2 walls on even
    bonds; wall types alternate around the ring.
    """
    occ = [(bits >> i) & 1 for i in range(L)]
    walls = [d for d in range(L) if occ[d] == occ[(d + 1) % L]]
    enters = [d for d in walls if d % 2 == 1]   # Z2 -> Z2'
    exits = [d for d in walls if d % 2 == 0]    # Z2' -> Z2
    out = []
    for d in enters:
        gaps = [(e - d) % L for e in exits]
        out.append(min(g for g in gaps if g > 0))
    return out


def _pair_table(basis: ConstrainedBasis) -> list[list[int]]:
    if basis.bc != "periodic" or basis.L % 2:
        raise ValueError("domain-wall distances need an even periodic chain")
    if basis.tag not in _pair_cache:
        _pair_cache[basis.tag] = [
            _config_pair_distances(int(b), basis.L) for b in basis.states
        ]
    return _pair_cache[basis.tag]


def domainwall_distance_distribution(psi: np.ndarray, basis: ConstrainedBasis
                                     ) -> tuple[np.ndarray, float]:
    """P(l) for l = 1..L-1, conditioned on at least one wall pair.

    Configurations holding several pairs split their weight evenly over the
    pairs, which keeps sum_l P(l) = 1 exactly whenever the distribution is
    nonempty. Returns (P, conditioning_weight); P is all zeros when no
    configuration with a pair is populated.
    """
    p = _probabilities(psi)
    table = _pair_table(basis)
    hist = np.zeros(basis.L - 1)
    weight = 0.0
    for prob, pairs in zip(p, table):
        if not pairs or prob == 0.0:
            continue
        weight += prob
        share = prob / len(pairs)
        for l in pairs:
            hist[l - 1] += share
    if weight > 0:
        hist /= weight
    return hist, float(weight)


# ---------------------------------------------------------------------------
# Observable registry and time series container
# ---------------------------------------------------------------------------

def standard_observables(basis: ConstrainedBasis,
                         site_resolved: bool = False,
                         ghz: bool | None = None) -> dict[str, Callable]:
    """Named observable callables for run loops. GHZ/QFI need even L."""
    if ghz is None:
        ghz = basis.L % 2 == 0
    obs: dict[str, Callable] = {
        "density": lambda s: rydberg_density(s, basis),
        "staggered": lambda s: staggered_magnetization(s, basis),
    }
    if ghz:
        obs["qfi_density"] = lambda s: qfi_density(s, basis)
        obs["ghz_fidelity"] = lambda s: ghz_fidelity(s, basis)[0]
        obs["p_z2"] = lambda s: z2_populations(s, basis)[0]
        obs["p_z2p"] = lambda s: z2_populations(s, basis)[1]
    if site_resolved:
        obs["n_site"] = lambda s: site_densities(s, basis)
    return obs


def _format(x: float) -> str:
    return f"{x:.17g}"


@dataclass
class ObservableSeries:
    """Columnar time series of named real observables plus run metadata."""

    times: list[float] = field(default_factory=list)
    records: dict[str, list] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    snapshots: dict[int, np.ndarray] = field(default_factory=dict, repr=False)

    @staticmethod
    def empty(observable_set: dict[str, Callable], metadata: dict | None = None
              ) -> "ObservableSeries":
        return ObservableSeries(records={name: [] for name in observable_set},
                                metadata=metadata or {})

    def append(self, t: float, psi: np.ndarray,
               observable_set: dict[str, Callable]) -> None:
        if self.times and t <= self.times[-1]:
            raise ValueError("times must be strictly increasing")
        self.times.append(float(t))
        for name, fn in observable_set.items():
            value = fn(psi)
            col = self.records.setdefault(name, [])
            if len(col) != len(self.times) - 1:
                raise ValueError(f"column {name!r} out of step with times")
            col.append(
                np.asarray(value, dtype=float) if np.ndim(value) else float(value))

    def column(self, name: str) -> np.ndarray:
        return np.asarray(self.records[name])

    def _flat_header_rows(self) -> tuple[list[str], list[list[str]]]:
        header = ["time"]
        expanders = []
        for name, col in self.records.items():
            if col and np.ndim(col[0]):
                width = len(col[0])
                header.extend(f"{name}_{i}" for i in range(width))
                expanders.append((col, width))
            else:
                header.append(name)
                expanders.append((col, 0))
        rows = []
        for i, t in enumerate(self.times):
            row = [_format(t)]
            for col, width in expanders:
                if width:
                    row.extend(_format(v) for v in col[i])
                else:
                    row.append(_format(col[i]))
            rows.append(row)
        return header, rows

    def to_csv(self, path) -> None:
        header, rows = self._flat_header_rows()
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)

    def to_json(self, path) -> None:
        payload = {
            "metadata": self.metadata,
            "times": self.times,
            "records": {
                name: [v.tolist() if np.ndim(v) else v for v in col]
                for name, col in self.records.items()
            },
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")


def write_correlation_csv(path, times, matrices) -> None:
    """Long-format (t, i, j, value) dump of correlation matrices."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["time", "i", "j", "value"])
        for t, mat in zip(times, matrices):
            mat = np.asarray(mat)
            for i in range(mat.shape[0]):
                for j in range(mat.shape[1]):
                    writer.writerow([_format(t), i, j, _format(mat[i, j])])
