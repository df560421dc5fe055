"""
Semiclassical description away from half filling.

Expanding the lattice equations of motion to second order in the spacing
``a = 1/N`` and changing coordinates by ``dxt/dx = J(x)**-0.5`` gives a
Schrodinger problem in ``xt`` with mass ``M = 2/cos(kFa)`` and, to zeroth
order in ``a``, potential ``V = -(1 + cos^2 kFa)/cos kFa * J``. Classically
forbidden regions of that potential are the depleted regions of the chain.

Energy convention
-----------------
Lattice energies below half filling are negative. Every function here
takes ``E = |eps|``, a magnitude, and writes the classical kinetic term as
``(1 + cos^2 kFa)/cos kFa * J - E``. Allowed regions are therefore those
with *large* hopping, and the density prediction reads
``rho a = A sqrt(2 - E/J)``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .chain import build_chain
from .eigen import Spectrum, diagonalize
from .errors import DomainError
from .profiles import HoppingProfile, eval_derivatives, eval_profile, sample_chain

MASSLESS_GAP = 1e-3
REFINE = 10
SCAN_POINTS = 10_000
BISECT_TOL = 1e-8


def _check_kfa(kFa):
    if not 0.0 < kFa < np.pi / 2 + MASSLESS_GAP:
        raise DomainError(f"kFa must lie in (0, pi/2), got {kFa}")
    if abs(kFa - np.pi / 2) < MASSLESS_GAP:
        raise DomainError("massless limit; Schrodinger approximation invalid")


def potential_prefactor(kFa):
    """``(1 + cos^2 kFa) / cos kFa``, the coefficient of ``-J`` in the potential."""
    c = np.cos(kFa)
    return (1.0 + c * c) / c


def mass(kFa):
    return 2.0 / np.cos(kFa)


# -- coordinate transform ---------------------------------------------------


def transform_coordinate(profile: HoppingProfile, grid, refine=REFINE):
    """``xt(x) = int_0^x J(s)^(-1/2) ds`` on an ascending grid in [0, 1].

    Profiles vanishing linearly at ``x = 0`` (Rindler with no offset) are
    integrated in ``u = sqrt(s)``, where the integrand is smooth.
    Each grid interval is split into ``refine`` trapezoid panels, and
    profile kinks are inserted as extra nodes.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise DomainError("grid must be a non-empty 1D array")
    if np.any(np.diff(grid) <= 0) or grid[0] < 0 or grid[-1] > 1:
        raise DomainError("grid must be strictly ascending inside [0, 1]")

    nodes = np.concatenate([[0.0], grid]) if grid[0] > 0 else grid
    singular = float(eval_profile(profile, 0.0)) == 0.0
    # substitute u = sqrt(s) only when J vanishes at the origin
    warp = np.sqrt if singular else (lambda v: v)
    w_nodes = warp(nodes)
    fine = [w_nodes[:1]]
    for w0, w1 in zip(w_nodes[:-1], w_nodes[1:]):
        pts = np.linspace(w0, w1, refine + 1)[1:]
        for k in profile.kinks:
            wk = warp(k)
            if w0 < wk < w1:
                pts = np.sort(np.append(pts, wk))
        fine.append(pts)
    w = np.concatenate(fine)
    s = w * w if singular else w
    J = np.asarray(eval_profile(profile, s), dtype=float)
    if np.any(J[1:] <= 0) or J[0] < 0:
        raise DomainError("profile must be positive on the integration range")

    if singular:
        integrand = np.empty_like(w)
        integrand[1:] = 2.0 * w[1:] / np.sqrt(J[1:])
        # J ~ J'(0) s near the origin, so 2u / sqrt(J(u^2)) -> 2 / sqrt(J'(0))
        delta = 1e-12
        integrand[0] = 2.0 * np.sqrt(delta / eval_profile(profile, delta))
    else:
        integrand = 1.0 / np.sqrt(J)

    cum = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(w) * (integrand[1:] + integrand[:-1]))])
    return np.interp(warp(grid), w, cum)


def inverse_transform(grid, xt, xt_query):
    """Invert a tabulated, strictly increasing ``xt(x)``."""
    return np.interp(xt_query, xt, grid)


# -- effective potential and turning points ---------------------------------


def _second_order_terms(profile, x, a, kFa):
    J, dJ, d2J = eval_derivatives(profile, x)
    c, s = np.cos(kFa), np.sin(kFa)
    # derivatives in the transformed coordinate: dx/dxt = J^(1/2)
    dJt = dJ * np.sqrt(J)
    d2Jt = d2J * J + 0.5 * dJ * dJ
    first = a / c * dJt / np.sqrt(J)
    ratio2 = (dJt / J) ** 2
    second = -(a * a / 4.0) * (s * s / c * ratio2 - c / 4.0 * ratio2 + c * d2Jt / J)
    return first + second


def effective_potential(profile: HoppingProfile, x, kFa, order=0, a=None):
    """Effective Schrodinger potential at ``x``.

    ``order=0`` keeps ``-(1 + cos^2 kFa)/cos kFa * J``. ``order=2`` adds the
    ``O(a)`` gradient term ``+ a J_t'/(cos kFa J^(1/2))`` and the ``O(a^2)``
    curvature terms, where ``J_t`` is the profile as a function of the
    transformed coordinate. ``a`` (the lattice spacing) is required then.
    """
    _check_kfa(kFa)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or np.any(x >= 1):
        raise DomainError("effective potential is defined on the open interval (0, 1)")
    V = -potential_prefactor(kFa) * np.asarray(eval_profile(profile, x), dtype=float)
    if order == 0:
        return V if V.ndim else float(V)
    if order != 2:
        raise DomainError(f"order must be 0 or 2, got {order}")
    if a is None:
        raise DomainError("order-2 potential needs the lattice spacing a")
    corr = np.vectorize(lambda xi: _second_order_terms(profile, xi, a, kFa))(x)
    out = V + corr
    return out if out.ndim else float(out)


def turning_threshold(EF, kFa):
    """Hopping value ``J*`` at which the zeroth-order potential meets ``-|EF|``."""
    return abs(EF) / potential_prefactor(kFa)


def turning_points(profile: HoppingProfile, EF, kFa, samples=SCAN_POINTS, tol=BISECT_TOL):
    """Roots in (0, 1) of ``J(x) = |EF| cos kFa / (1 + cos^2 kFa)``, ascending."""
    _check_kfa(kFa)
    threshold = turning_threshold(EF, kFa)
    xs = np.linspace(0.0, 1.0, samples + 1)
    f = np.asarray(eval_profile(profile, xs)) - threshold
    roots = []
    for i in range(samples):
        lo, hi = xs[i], xs[i + 1]
        flo, fhi = f[i], f[i + 1]
        if flo == 0.0:
            if 0.0 < lo < 1.0:
                roots.append(float(lo))
            continue
        if flo * fhi >= 0:
            continue
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            fm = eval_profile(profile, mid) - threshold
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
        roots.append(float(0.5 * (lo + hi)))
    return roots


# -- WKB envelopes ----------------------------------------------------------


class WKBEnvelope(NamedTuple):
    x: np.ndarray
    envelope: np.ndarray
    allowed: np.ndarray
    mask: np.ndarray
    turning_points: list


def mode_kfa(k, N):
    """Fermi phase attributed to mode ``k``; upper-band modes use their particle-hole partner."""
    k = min(k, N + 1 - k)
    return np.pi * k / N


def wkb_envelope(profile: HoppingProfile, E_mode, kFa, grid, mask_fraction=0.02):
    """Semiclassical magnitude ``|Psi(x)| ~ p^(-1/2) J^(-1/4)`` of a single mode.

    ``p^2 = ((1 + cos^2)/cos * J - |E_mode|) / cos^2``. The envelope is zero
    in the forbidden region. ``mask`` marks allowed points farther than
    ``mask_fraction`` of the grid span from every turning point; the
    envelope is normalized so its square integrates to one over ``mask``.
    """
    _check_kfa(kFa)
    grid = np.asarray(grid, dtype=float)
    E = abs(E_mode)
    c = np.cos(kFa)
    J = np.asarray(eval_profile(profile, grid), dtype=float)
    p2 = (potential_prefactor(kFa) * J - E) / (c * c)
    allowed = p2 > 0
    if not allowed.any():
        raise DomainError("the whole domain is classically forbidden for this mode")
    env = np.zeros_like(grid)
    env[allowed] = p2[allowed] ** -0.25 * J[allowed] ** -0.25

    tps = turning_points(profile, E, kFa)
    width = mask_fraction * (grid[-1] - grid[0])
    mask = allowed.copy()
    for t in tps:
        mask &= np.abs(grid - t) > width
    if not mask.any():
        raise DomainError("no allowed points survive the turning-point mask")
    weights = np.gradient(grid) if grid.size > 1 else np.ones(1)
    env /= np.sqrt(np.sum(env[mask] ** 2 * weights[mask]))
    return WKBEnvelope(grid, env, allowed, mask, tps)


def upper_envelope(values):
    """Linear interpolation through the local maxima of ``|values|``."""
    v = np.abs(np.asarray(values, dtype=float))
    n = v.size
    left = np.concatenate([[-np.inf], v[:-1]])
    right = np.concatenate([v[1:], [-np.inf]])
    peaks = np.flatnonzero((v >= left) & (v >= right))
    return np.interp(np.arange(n), peaks, v[peaks])


# -- densities --------------------------------------------------------------


def window_mean(values, width):
    """Centred sliding mean over ``width`` sites, truncated at the chain ends."""
    v = np.asarray(values, dtype=float)
    n = v.size
    width = max(int(width), 1)
    start = np.arange(n) - width // 2
    lo = np.clip(start, 0, n)
    hi = np.clip(start + width, 0, n)
    csum = np.concatenate([[0.0], np.cumsum(v)])
    return (csum[hi] - csum[lo]) / (hi - lo)


def friedel_window(N):
    """Smoothing width used to wash out Friedel oscillations: ``N/40`` sites."""
    return max(N // 40, 1)


def semiclassical_density(profile: HoppingProfile, E, grid, m):
    """Local occupation ``rho a = A sqrt(max(2 - E/J, 0))`` normalized to ``m`` particles."""
    if E <= 0:
        raise DomainError("E is a magnitude and must be positive")
    J = np.asarray(eval_profile(profile, np.asarray(grid, dtype=float)), dtype=float)
    with np.errstate(divide="ignore"):
        g = np.sqrt(np.maximum(2.0 - E / J, 0.0))
    total = g.sum()
    if total == 0:
        raise DomainError("E >= 2 max J: no classically allowed site")
    return g * (m / total)


class DensityFit(NamedTuple):
    A: float
    B: float
    rmse: float


def _fit_shape(u, B):
    return np.sqrt(np.maximum(B - u, 0.0))


def _fit_at(obs, u, B):
    g = _fit_shape(u, B)
    gg = g @ g
    if gg == 0:
        return np.inf, 0.0
    A = (g @ obs) / gg
    r = A * g - obs
    return float(np.sqrt(np.mean(r * r))), float(A)


def _golden(f, a, b, tol=1e-13, maxiter=200):
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if abs(b - a) <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def fit_density(observed, J, scan=400):
    """Least-squares fit of ``rho a = A sqrt(max(B - 1/J, 0))``.

    ``B`` is scanned on a log grid of ``B - min(1/J)`` spanning ten decades,
    then refined by golden-section search around the best scan point.
    ``A`` is solved in closed form for every trial ``B``. Large ``B``
    reproduces a flat profile.
    """
    obs = np.asarray(observed, dtype=float)
    u = 1.0 / np.asarray(J, dtype=float)
    if obs.shape != u.shape:
        raise DomainError("observed density and J samples must share a grid")
    if not np.any(obs > 0):
        raise DomainError("observed density is identically zero")
    umin, umax = u.min(), u.max()
    span = umax - umin
    if span <= 1e-14 * umax:
        B = 2.0 * umax
        rmse, A = _fit_at(obs, u, B)
        return DensityFit(A, B, rmse)

    ts = np.linspace(np.log(1e-6 * span), np.log(1e4 * span), scan)
    scores = np.array([_fit_at(obs, u, umin + np.exp(t))[0] for t in ts])
    i = int(np.argmin(scores))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, scan - 1)]
    t = _golden(lambda t: _fit_at(obs, u, umin + np.exp(t))[0], lo, hi)
    B = umin + np.exp(t)
    rmse, A = _fit_at(obs, u, B)
    if scores[i] < rmse:
        B = umin + np.exp(ts[i])
        rmse, A = _fit_at(obs, u, B)
    return DensityFit(A, float(B), rmse)


# -- bundled model ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ContinuumModel:
    kFa: float
    a: float
    grid: np.ndarray
    xt: np.ndarray
    M: float
    EF: float

    def potential(self, profile, order=0):
        inner = self.grid[(self.grid > 0) & (self.grid < 1)]
        return inner, effective_potential(profile, inner, self.kFa, order, self.a)


def continuum_model(profile: HoppingProfile, N, m, spectrum: Spectrum | None = None):
    """Continuum data for ``m`` particles on the ``N``-site sampling of ``profile``."""
    if not 0 < m < N:
        raise DomainError(f"need 0 < m < N, got m={m}, N={N}")
    kFa = np.pi * m / N
    _check_kfa(kFa)
    if spectrum is None:
        spectrum = diagonalize(build_chain(sample_chain(profile, N)))
    grid = np.arange(N + 1) / N
    return ContinuumModel(
        kFa=kFa,
        a=1.0 / N,
        grid=grid,
        xt=transform_coordinate(profile, grid),
        M=mass(kFa),
        EF=float(spectrum.energies[m - 1]),
    )


def write_columns_csv(path, columns: dict):
    """Generic column CSV used for continuum predictions."""
    names = list(columns)
    n = len(next(iter(columns.values())))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for i in range(n):
            w.writerow([repr(float(columns[c][i])) for c in names])
