"""
Depletion from the semiclassical density
========================================

Below half filling the local density follows A sqrt(2 - E/J(x)) with E the
magnitude of the Fermi energy. It vanishes at the turning point J = E/2,
which marks the edge of the depleted region. A free two-parameter form
A sqrt(B - 1/J) fits all four reference profiles.
"""

import math

import numpy as np

from depletion import profiles as prof
from depletion.chain import build_chain
from depletion.continuum import fit_density, friedel_window, semiclassical_density, turning_points, window_mean
from depletion.eigen import diagonalize
from depletion.manybody import density, fill

N = 400
x = np.arange(1, N + 1) / N
w = friedel_window(N)

p = prof.rindler(0.0)
spec = diagonalize(build_chain(prof.sample_chain(p, N)))
for nu in (1 / 4, 1 / 8, 1 / 16):
    m = int(nu * N)
    EF = spec.energies[m - 1]
    smooth = window_mean(density(fill(spec, nu)), w)
    pred = semiclassical_density(p, abs(EF), x, m)
    (x_star,) = turning_points(p, EF, math.pi * nu)
    rmse = np.sqrt(np.mean((pred - smooth) ** 2))
    print(f"nu={nu:<6g} turning point {x_star:.3f}  RMSE {rmse:.4f}")

# Two-parameter fit on each profile
for p in (prof.minkowski(), prof.rindler(0.0), prof.rainbow(0.01), prof.sine(1.0, 0.5)):
    spec = diagonalize(build_chain(prof.sample_chain(p, N)))
    smooth = window_mean(density(fill(spec, 1 / 8)), w)
    fit = fit_density(smooth, prof.eval_profile(p, x))
    print(f"{p.label:14s} A={fit.A:.4f} B={fit.B:.4f} RMSE {fit.rmse:.4f}")
