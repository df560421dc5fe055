"""
Strong-disorder (Dasgupta-Ma) renormalization of an open hopping chain.

The strongest active link is frozen into a bond, its two sites leave the
chain, and their outer neighbours are joined by the second-order coupling

    J_eff = -J_left * J_right / J_selected.

Couplings are tracked with their sign; selection uses magnitudes.
"""

from __future__ import annotations

import csv
import heapq
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError

# Relative gap below which two couplings count as tied.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class Bond:
    left: int
    right: int
    strength: float
    sign: int
    rank: int


@dataclass(frozen=True)
class BondSet:
    N: int
    bonds: tuple

    def __iter__(self):
        return iter(self.bonds)

    def __len__(self):
        return len(self.bonds)

    @property
    def pairs(self):
        return [(b.left, b.right) for b in self.bonds]


def run_sdrg(hoppings) -> BondSet:
    """Decimate the chain completely and return its ``N/2`` bonds in selection order.

    Ties (within ``TIE_RTOL``) go to a renormalized link over an original
    one, then to the leftmost link. The first rule keeps exactly
    self-similar profiles such as the sampled rainbow fully nested.
    """
    J = np.asarray(hoppings, dtype=float)
    if J.ndim != 1 or not np.all(np.isfinite(J)) or np.any(J <= 0):
        raise ValidationError("SDRG needs finite, strictly positive hoppings")
    N = J.size + 1
    if N % 2:
        raise DomainError(f"SDRG needs an even number of sites, got {N}")

    # link keyed by its left site s, joining s and nxt[s]
    nxt = list(range(1, N)) + [-1]
    prv = [-1] + list(range(N - 1))
    coupling = [float(v) for v in J] + [0.0]
    effective = [False] * N
    version = [0] * N
    alive = [True] * N

    heap = [(-abs(coupling[s]), s, 0) for s in range(N - 1)]
    heapq.heapify(heap)

    def valid(entry):
        _, s, ver = entry
        return alive[s] and nxt[s] >= 0 and version[s] == ver

    bonds = []
    while len(bonds) < N // 2:
        while not valid(heap[0]):
            heapq.heappop(heap)
        top = heapq.heappop(heap)
        tied = [top]
        cutoff = -top[0] * (1.0 - TIE_RTOL)
        while heap and -heap[0][0] >= cutoff:
            entry = heapq.heappop(heap)
            if valid(entry):
                tied.append(entry)
        best = min(tied, key=lambda e: (not effective[e[1]], e[1]))
        for entry in tied:
            if entry is not best:
                heapq.heappush(heap, entry)

        s = best[1]
        t = nxt[s]
        Jsel = coupling[s]
        bonds.append(Bond(s + 1, t + 1, abs(Jsel), 1 if Jsel > 0 else -1, len(bonds) + 1))
        alive[s] = alive[t] = False
        L, R = prv[s], nxt[t]
        if L >= 0 and R >= 0:
            coupling[L] = -coupling[L] * coupling[t] / Jsel
            effective[L] = True
            nxt[L], prv[R] = R, L
            version[L] += 1
            heapq.heappush(heap, (-abs(coupling[L]), L, version[L]))
        elif L >= 0:
            nxt[L] = -1
            version[L] += 1
        elif R >= 0:
            prv[R] = -1
    return BondSet(N, tuple(bonds))


def sdrg_density(bonds: BondSet, m, N=None) -> np.ndarray:
    """Site occupations predicted by filling bonds in rank order.

    Below half filling the ``m`` strongest bonds hold one delocalized
    particle each (1/2 per site). Above it every bond is singly occupied
    and the ``m - N/2`` weakest bonds become doubly occupied.
    """
    N = bonds.N if N is None else N
    if N != bonds.N:
        raise DomainError(f"bond set describes N={bonds.N}, not {N}")
    if int(m) != m or not 0 <= m <= N:
        raise DomainError(f"particle count must be in [0, {N}], got {m}")
    ordered = sorted(bonds, key=lambda b: b.rank)
    n = np.zeros(N)
    half = N // 2
    if m <= half:
        for b in ordered[: int(m)]:
            n[b.left - 1] = n[b.right - 1] = 0.5
    else:
        n[:] = 0.5
        for b in ordered[::-1][: int(m) - half]:
            n[b.left - 1] = n[b.right - 1] = 1.0
    return n


def write_bonds_csv(bonds: BondSet, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "left", "right", "strength", "sign"])
        for b in bonds:
            w.writerow([b.rank, b.left, b.right, repr(b.strength), b.sign])
