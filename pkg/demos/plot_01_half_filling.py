"""
Homogeneous occupation at half filling
======================================

Any bipartite hopping chain without on-site terms has a spectrum symmetric
under E -> -E. Filling exactly half the modes then puts one half particle
on every site, whatever the hoppings look like.
"""

import numpy as np

from depletion import profiles as prof
from depletion.chain import build_chain
from depletion.eigen import diagonalize
from depletion.manybody import density, fill

N = 400

# Four very different hopping profiles
chains = {
    "minkowski": prof.minkowski(),
    "rindler": prof.rindler(0.0),
    "sine": prof.sine(1.0, 0.5),
    "rainbow h=4": prof.rainbow(4.0),
}

for name, p in chains.items():
    spec = diagonalize(build_chain(prof.sample_chain(p, N)))
    n = density(fill(spec, 0.5))
    print(f"{name:12s} max |n - 1/2| = {np.max(np.abs(n - 0.5)):.1e}")

# Away from half filling the same chains deplete where J is small
spec = diagonalize(build_chain(prof.sample_chain(prof.rindler(0.0), N)))
n = density(fill(spec, 1 / 8))
print("rindler nu=1/8, density on the first, middle and last 50 sites:")
print(np.round([n[:50].mean(), n[175:225].mean(), n[-50:].mean()], 4))
