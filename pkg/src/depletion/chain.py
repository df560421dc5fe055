"""
Finite open chains: hoppings ``J_i`` on links and on-site potentials ``mu_i``.

The single-particle matrix assembled from a :class:`ChainSpec` has
off-diagonal entries ``-J_i`` and diagonal entries ``+mu_i``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ChainSpec:
    hoppings: np.ndarray
    potentials: np.ndarray

    @property
    def N(self) -> int:
        return self.potentials.size

    def matrix(self):
        """Dense single-particle Hamiltonian (for tests and small chains)."""
        H = np.diag(self.potentials.copy())
        i = np.arange(self.N - 1)
        H[i, i + 1] = H[i + 1, i] = -self.hoppings
        return H


def build_chain(hoppings, potentials=None) -> ChainSpec:
    J = np.asarray(hoppings, dtype=float)
    if J.ndim != 1 or J.size < 1:
        raise ValidationError("hoppings must be a non-empty 1D sequence")
    if not np.all(np.isfinite(J)) or np.any(J <= 0):
        raise ValidationError("hoppings must be finite and strictly positive")
    if potentials is None:
        mu = np.zeros(J.size + 1)
    else:
        mu = np.asarray(potentials, dtype=float)
        if mu.shape != (J.size + 1,):
            raise ValidationError(
                f"expected {J.size + 1} potentials for {J.size} hoppings, got {mu.size}"
            )
        if not np.all(np.isfinite(mu)):
            raise ValidationError("potentials must be finite")
    return ChainSpec(_frozen(J), _frozen(mu))


def site_hoppings(hoppings) -> np.ndarray:
    """Hopping assigned to each site: the mean of its two links, or the lone link at an edge."""
    J = np.asarray(hoppings, dtype=float)
    out = np.empty(J.size + 1)
    out[0], out[-1] = J[0], J[-1]
    out[1:-1] = 0.5 * (J[:-1] + J[1:])
    return out


def _check_filling(nu):
    if not 0.0 < nu < 1.0:
        raise DomainError(f"filling fraction must lie in (0, 1), got {nu}")


def compensating_potential(hoppings, nu) -> np.ndarray:
    """On-site potential ``2 cos(pi nu) J_site`` that flattens the density at filling ``nu``."""
    _check_filling(nu)
    return 2.0 * np.cos(np.pi * nu) * site_hoppings(hoppings)


def mimicking_chain(original_hoppings, nu, mu0="auto") -> ChainSpec:
    """Homogeneous chain whose potential ``mu0 / J_site`` mimics the original density.

    With ``mu0="auto"`` the scale is ``|eps_F|``, the magnitude of the
    ``nu N``-th ascending single-particle energy of the original chain.
    """
    _check_filling(nu)
    original = build_chain(original_hoppings)
    if isinstance(mu0, str):
        if mu0 != "auto":
            raise DomainError(f"mu0 must be a number or 'auto', got {mu0!r}")
        mu0 = fermi_energy_magnitude(original, nu)
    Js = site_hoppings(original.hoppings)
    return build_chain(np.ones(original.N - 1), float(mu0) / Js)


def fermi_energy_magnitude(chain: ChainSpec, nu) -> float:
    from .eigen import diagonalize

    m = int(round(nu * chain.N))
    if m < 1:
        raise DomainError(f"filling {nu} leaves no occupied mode on N={chain.N}")
    return abs(float(diagonalize(chain).energies[m - 1]))


def write_chain_csv(chain: ChainSpec, path):
    """Audit dump: one row per site (``site, i, mu``) then one per link (``link, i, J``)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["kind", "index", "value"])
        for i, mu in enumerate(chain.potentials, start=1):
            w.writerow(["site", i, repr(float(mu))])
        for i, J in enumerate(chain.hoppings, start=1):
            w.writerow(["link", i, repr(float(J))])
