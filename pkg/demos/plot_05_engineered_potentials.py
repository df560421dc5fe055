"""
Compensating and mimicking potentials
=====================================

A site potential 2 cos(pi nu) J_i undoes the depletion of an inhomogeneous
chain. Conversely a homogeneous chain with potential mu0 / J_i reproduces
the depleted profile of the inhomogeneous one.
"""

import numpy as np

from depletion import profiles as prof
from depletion.chain import build_chain, compensating_potential, mimicking_chain
from depletion.continuum import friedel_window, window_mean
from depletion.eigen import diagonalize
from depletion.manybody import density, fill

N = 400
w = friedel_window(N)
inner = slice(w, N - w)

for p in (prof.rindler(0.0), prof.rainbow(4.0)):
    J = prof.sample_chain(p, N)
    for nu in (1 / 4, 1 / 8):
        orig = density(fill(diagonalize(build_chain(J)), nu))
        comp = density(fill(diagonalize(build_chain(J, compensating_potential(J, nu))), nu))
        mim = density(fill(diagonalize(mimicking_chain(J, nu)), nu))
        flat = np.max(np.abs(window_mean(comp, w) - nu)[inner])
        match = np.max(np.abs(window_mean(mim, w) - window_mean(orig, w)))
        print(f"{p.label:10s} nu={nu:<6g} compensated flatness {flat:.4f}  mimic mismatch {match:.4f}")
