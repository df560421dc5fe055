"""
Symmetric tridiagonal eigensolver.

The kernel is the implicit QL iteration with origin shifts (the EISPACK
``tql2`` scheme), compiled with numba. Eigenvectors are accumulated as
*rows* of the mode matrix so every plane rotation touches two contiguous
rows. Dense symmetric input (block correlation matrices) is first reduced
to tridiagonal form by Householder reflections and then handed to the same
kernel without vector accumulation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numba
import numpy as np

from .chain import ChainSpec
from .errors import ConvergenceError

MAX_SWEEPS = 30
_EPS = 2.0**-52


@numba.njit(cache=True)
def _hypot(a, b):
    return np.hypot(a, b)


@numba.njit(cache=True)
def _tql2(d, e, Z, vectors):
    """In-place QL on diagonal ``d`` and couplings ``e`` (``e[i]`` joins i, i+1).

    On exit ``d`` holds the (unsorted) eigenvalues and, if ``vectors``,
    row ``i`` of ``Z`` the eigenvector belonging to ``d[i]``. Returns -1 on
    success or the index whose iteration budget ran out.
    """
    n = d.size
    f = 0.0
    tst1 = 0.0
    for l in range(n):
        tst1 = max(tst1, abs(d[l]) + abs(e[l]))
        m = l
        while m < n:
            if abs(e[m]) <= _EPS * tst1:
                break
            m += 1
        if m > l:
            it = 0
            while True:
                it += 1
                if it > MAX_SWEEPS:
                    return l
                g = d[l]
                p = (d[l + 1] - g) / (2.0 * e[l])
                r = _hypot(p, 1.0)
                if p < 0:
                    r = -r
                d[l] = e[l] / (p + r)
                d[l + 1] = e[l] * (p + r)
                dl1 = d[l + 1]
                h = g - d[l]
                for i in range(l + 2, n):
                    d[i] -= h
                f += h

                p = d[m]
                c = 1.0
                c2 = c
                c3 = c
                el1 = e[l + 1]
                s = 0.0
                s2 = 0.0
                for i in range(m - 1, l - 1, -1):
                    c3 = c2
                    c2 = c
                    s2 = s
                    g = c * e[i]
                    h = c * p
                    r = _hypot(p, e[i])
                    e[i + 1] = s * r
                    s = e[i] / r
                    c = p / r
                    p = c * d[i] - s * g
                    d[i + 1] = h + s * (c * g + s * d[i])
                    if vectors:
                        for k in range(n):
                            zk = Z[i + 1, k]
                            Z[i + 1, k] = s * Z[i, k] + c * zk
                            Z[i, k] = c * Z[i, k] - s * zk
                p = -s * s2 * c3 * el1 * e[l] / dl1
                e[l] = s * p
                d[l] = c * p
                if abs(e[l]) <= _EPS * tst1:
                    break
        d[l] = d[l] + f
        e[l] = 0.0
    return -1


@numba.njit(cache=True)
def _householder(A, d, e):
    """Reduce symmetric ``A`` (overwritten) to tridiagonal ``d``, ``e``."""
    n = A.shape[0]
    v = np.empty(n)
    p = np.empty(n)
    for k in range(n - 2):
        m = n - k - 1
        norm2 = 0.0
        for i in range(m):
            v[i] = A[k + 1 + i, k]
            norm2 += v[i] * v[i]
        d[k] = A[k, k]
        if norm2 == 0.0:
            e[k] = 0.0
            continue
        alpha = -np.sqrt(norm2) if v[0] >= 0 else np.sqrt(norm2)
        v[0] -= alpha
        vnorm2 = norm2 - 2.0 * alpha * (v[0] + alpha) + alpha * alpha
        e[k] = alpha
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        vp = 0.0
        for i in range(m):
            acc = 0.0
            row = k + 1 + i
            for j in range(m):
                acc += A[row, k + 1 + j] * v[j]
            p[i] = beta * acc
            vp += v[i] * p[i]
        K = vp / vnorm2
        for i in range(m):
            p[i] -= K * v[i]
        for i in range(m):
            row = k + 1 + i
            vi = v[i]
            pi = p[i]
            for j in range(m):
                A[row, k + 1 + j] -= vi * p[j] + pi * v[j]
    if n >= 2:
        d[n - 2] = A[n - 2, n - 2]
        e[n - 2] = A[n - 1, n - 2]
    d[n - 1] = A[n - 1, n - 1]


def _run_ql(diag, offdiag, vectors):
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.zeros(n)
    e[: n - 1] = offdiag
    Z = np.eye(n) if vectors else np.empty((0, 0))
    bad = _tql2(d, e, Z, vectors)
    if bad >= 0:
        raise ConvergenceError(
            f"QL iteration did not converge for eigenvalue index {bad} "
            f"after {MAX_SWEEPS} sweeps",
            index=int(bad),
        )
    order = np.argsort(d, kind="stable")
    return d[order], (Z[order] if vectors else None)


def _fix_gauge(U):
    """Flip rows so that the first non-negligible component is positive."""
    mags = np.abs(U)
    tol = 1e-12 * mags.max(axis=1, keepdims=True)
    first = np.argmax(mags > tol, axis=1)
    signs = np.sign(U[np.arange(U.shape[0]), first])
    signs[signs == 0] = 1.0
    return U * signs[:, None]


def tridiagonal_eigh(diag, offdiag):
    """All eigenpairs of the symmetric tridiagonal matrix (``offdiag`` = matrix entries).

    Returns ascending energies and a matrix whose row ``k`` is the
    eigenvector of energy ``k``, sign-fixed so its first non-negligible
    component is positive.
    """
    energies, U = _run_ql(diag, offdiag, True)
    return energies, _fix_gauge(U)


def tridiagonal_eigvalsh(diag, offdiag):
    return _run_ql(diag, offdiag, False)[0]


def eigvalsh_dense(A):
    """Ascending eigenvalues of a dense real symmetric matrix."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if n == 0:
        return np.empty(0)
    if n == 1:
        return A[0].copy()
    d = np.empty(n)
    e = np.empty(n)
    _householder(A, d, e)
    return _run_ql(d, e[: n - 1], False)[0]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending energies and the mode matrix (row ``k`` = mode ``k``)."""

    energies: np.ndarray
    modes: np.ndarray

    @property
    def N(self):
        return self.energies.size


def diagonalize(chain: ChainSpec) -> Spectrum:
    energies, U = tridiagonal_eigh(chain.potentials, -chain.hoppings)
    energies.setflags(write=False)
    U.setflags(write=False)
    return Spectrum(energies, U)


@dataclass(frozen=True)
class SpectrumReport:
    max_residual: float
    max_orthogonality_defect: float
    ascending: bool
    scale: float

    def ok(self, tol=1e-10):
        """Residual within ``tol * max|eps|``, orthogonality within ``tol``, strictly ascending."""
        return (
            self.ascending
            and self.max_residual <= tol * (self.scale if self.scale > 0 else 1.0)
            and self.max_orthogonality_defect <= tol
        )


def apply_hamiltonian(chain: ChainSpec, vectors):
    """``H v`` for every row ``v`` of ``vectors``."""
    V = np.asarray(vectors, dtype=float)
    out = V * chain.potentials
    out[:, :-1] -= V[:, 1:] * chain.hoppings
    out[:, 1:] -= V[:, :-1] * chain.hoppings
    return out


def verify_spectrum(spectrum: Spectrum, chain: ChainSpec) -> SpectrumReport:
    """Measure the residual, orthogonality defect and ordering of a spectrum."""
    U = spectrum.modes
    eps = spectrum.energies
    R = apply_hamiltonian(chain, U) - eps[:, None] * U
    residual = float(np.abs(R).max()) if R.size else 0.0
    defect = float(np.abs(U @ U.T - np.eye(U.shape[0])).max())
    ascending = bool(np.all(np.diff(eps) > 0))
    scale = float(np.abs(eps).max()) if eps.size else 0.0
    return SpectrumReport(residual, defect, ascending, scale)


def write_spectrum_csv(spectrum: Spectrum, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "energy"])
        for k, en in enumerate(spectrum.energies, start=1):
            w.writerow([k, repr(float(en))])
