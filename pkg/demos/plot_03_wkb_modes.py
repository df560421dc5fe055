"""
Single-particle modes and their WKB envelopes
=============================================

Each mode k behaves like a Schrodinger particle with its own Fermi phase
pi k / N. Where (1 + cos^2)/cos * J exceeds the mode energy magnitude the
mode oscillates under the envelope p^(-1/2) J^(-1/4); elsewhere it decays.
"""

import numpy as np

from depletion import profiles as prof
from depletion.chain import build_chain
from depletion.continuum import mode_kfa, upper_envelope, wkb_envelope
from depletion.eigen import diagonalize

N = 400
x = np.arange(1, N + 1) / N

for p, modes in ((prof.rindler(0.25), (50, 100, 175)), (prof.rainbow(4.0), (40, 150))):
    spec = diagonalize(build_chain(prof.sample_chain(p, N)))
    for k in modes:
        env = wkb_envelope(p, spec.energies[k - 1], mode_kfa(k, N), x)
        ue = upper_envelope(spec.modes[k - 1])
        r = np.corrcoef(env.envelope[env.mask], ue[env.mask])[0, 1]
        tps = ", ".join(f"{t:.3f}" for t in env.turning_points) or "none"
        print(f"{p.label:12s} mode {k:3d}: turning points [{tps}], Pearson {r:.4f}")
