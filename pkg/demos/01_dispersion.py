"""
Band structure of a long-range chain
====================================

Hopping that decays as 1/n^mu produces a band whose top edge flattens
as mu approaches 1. The closed form through the polylogarithm matches
the brute-force sum over sites.
"""

import numpy as np

from excitonsearch.lattice import PowerLawChain, band_edge_energy, dispersion_closed, dispersion_direct, zone
from excitonsearch.units import Quantity

J = Quantity(1.0, "cm^-1")

# compare the two evaluations across a range of exponents
for mu in (1.1, 1.5, 3.0):
    chain = PowerLawChain(256, J, mu)
    k = zone(chain)
    direct = dispersion_direct(chain, k).value_in("cm^-1")
    closed = dispersion_closed(chain, k).value_in("cm^-1")
    print(f"mu={mu:<4} band edge {band_edge_energy(chain).value_in('cm^-1'):8.4f} cm^-1, "
          f"max |closed - direct| = {np.abs(closed - direct).max():.2e} cm^-1")

# the edge keeps growing with N when mu is close to 1
chain = PowerLawChain(64, J, 1.1)
for N in (64, 1024, 16384, 262144):
    print(f"N={N:>7}  E(K=0) = {band_edge_energy(chain.with_size(N)).value_in('cm^-1'):.5f} cm^-1")
