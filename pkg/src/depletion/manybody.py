"""
Ground-state observables of a filled Fermi sea: correlation matrix,
site densities and block entanglement entropies (in nats).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .eigen import Spectrum, eigvalsh_dense
from .errors import DomainError

CLAMP = 1e-12


@dataclass(frozen=True, eq=False)
class OccupiedState:
    """Slater determinant filling the ``m`` lowest modes of ``spectrum``."""

    spectrum: Spectrum
    m: int

    def __post_init__(self):
        if int(self.m) != self.m or not 0 <= self.m <= self.spectrum.N:
            raise DomainError(f"particle count must be an integer in [0, {self.spectrum.N}]")
        object.__setattr__(self, "m", int(self.m))

    @property
    def N(self):
        return self.spectrum.N

    @property
    def nu(self):
        return self.m / self.N

    @property
    def occupied(self):
        return self.spectrum.modes[: self.m]


def fill(spectrum: Spectrum, nu) -> OccupiedState:
    """State at filling fraction ``nu``; ``nu * N`` must be an integer."""
    m = nu * spectrum.N
    if abs(m - round(m)) > 1e-9:
        raise DomainError(f"nu*N = {m} is not an integer")
    return OccupiedState(spectrum, int(round(m)))


def correlation_matrix(state: OccupiedState) -> np.ndarray:
    """``C_ij = <c_i^dag c_j> = sum_{k<=m} U_ki U_kj``."""
    V = state.occupied
    return V.T @ V


def density(state: OccupiedState) -> np.ndarray:
    V = state.occupied
    return np.einsum("ki,ki->i", V, V)


def _entropy_from_eigenvalues(lam):
    lam = np.clip(lam, CLAMP, 1.0 - CLAMP)
    return float(-np.sum(lam * np.log(lam) + (1.0 - lam) * np.log1p(-lam)))


def block_entropy(C, ell) -> float:
    """Entanglement entropy of the block of the first ``ell`` sites."""
    C = np.asarray(C, dtype=float)
    N = C.shape[0]
    if int(ell) != ell or not 1 <= ell <= N - 1:
        raise DomainError(f"block length must be in [1, {N - 1}], got {ell}")
    ell = int(ell)
    return _entropy_from_eigenvalues(eigvalsh_dense(C[:ell, :ell]))


def entropy_profile(state: OccupiedState) -> np.ndarray:
    """``S(ell)`` for ``ell = 1..N-1``."""
    C = correlation_matrix(state)
    return np.array([block_entropy(C, ell) for ell in range(1, state.N)])


def write_density_csv(path, x, columns: dict):
    """CSV with ``site, x`` followed by named (dimensionless) density columns."""
    names = list(columns)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["site", "x"] + names)
        for i, xi in enumerate(x):
            w.writerow([i + 1, repr(float(xi))] + [repr(float(columns[c][i])) for c in names])


def write_entropy_csv(path, columns: dict):
    """CSV with ``ell`` followed by named entropy columns (nats)."""
    names = list(columns)
    n = len(next(iter(columns.values())))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ell"] + [f"{c}_nats" for c in names])
        for i in range(n):
            w.writerow([i + 1] + [repr(float(columns[c][i])) for c in names])
