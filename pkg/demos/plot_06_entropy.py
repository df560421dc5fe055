"""
Same density, different state
=============================

The mimicking ground state copies the density of the rainbow chain but not
its entanglement. Block entropies of the rainbow state stay above those of
the mimicking state, which resemble a homogeneous chain.
"""

import numpy as np

from depletion import profiles as prof
from depletion.chain import build_chain, mimicking_chain
from depletion.eigen import diagonalize
from depletion.manybody import entropy_profile, fill

N = 400
J = prof.sample_chain(prof.rainbow(4.0), N)

for nu in (1 / 4, 1 / 2):
    S_orig = entropy_profile(fill(diagonalize(build_chain(J)), nu))
    S_mim = entropy_profile(fill(diagonalize(mimicking_chain(J, nu)), nu))
    ells = np.array([50, 100, 200, 300])
    print(f"nu={nu:g}")
    for ell in ells:
        print(f"  ell={ell:3d}  S_orig={S_orig[ell - 1]:.4f}  S_mimic={S_mim[ell - 1]:.4f} nats")
