"""
Rings with one long-range link per site
=======================================

Each site couples to its neighbours and to the site m steps away.
Survival of the uniform state with an absorbing site gives a half-life
for each m; the closed form gives Tp and TN in terms of p = N/m.
"""

from excitonsearch.errors import DegenerateP
from excitonsearch.greens import PhononModel, SearchProblem, lric_search_time
from excitonsearch.lattice import LricRing
from excitonsearch.oracle import build_hamiltonian, half_life, uniform_state
from excitonsearch.units import Quantity

N, J = 64, Quantity(1.0, "cm^-1")
phonons = PhononModel(Quantity(90, "cm^-1"), Quantity(1e4, "cm/s"), Quantity(0.004, "eV"))

for m in (2, 4, 8, 16, 32):
    ring = LricRing(N, J, m)
    life = half_life(build_hamiltonian(ring), uniform_state(N), (J, 0))
    try:
        t = lric_search_time(SearchProblem(ring, phonons, Quantity(50, "cm^-1")))
        closed = f"Tp={t.Tp.si:.3e} s" + (" (divergent)" if t.divergent else "")
    except DegenerateP as exc:
        closed = f"closed form undefined: {exc}"
    print(f"m={m:>2}  half-life {life * 1e12:8.2f} ps  {closed}")
