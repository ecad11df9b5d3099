"""
How long does the exciton take to find a trap?
==============================================

The trapping rate has a size-independent part 1/T0 and a part 1/TN that
shrinks with the chain length. Fermi's golden rule over a Debye bath
reproduces the closed-form combination.
"""

from excitonsearch.config import load_preset
from excitonsearch.greens import closed_form_times, golden_rule_convergence, numeric_scaling
from excitonsearch.units import WAVENUMBER

cfg = load_preset("naphthalene")
problem = cfg.problem()

t = closed_form_times(problem, A_prime=cfg.A_prime)
print(f"T0 = {t.T0.si:.3e} s, TN = {t.TN.si:.3e} s, Ts = {t.Ts.si:.3e} s ({t.regime})")

# shrink the broadening until the numeric rate settles
conv = golden_rule_convergence(problem)
for b, r in zip(conv.broadenings, conv.rates):
    print(f"broadening {b / WAVENUMBER:5.3f} cm^-1 -> 1/Ts = {r:.4e} 1/s")
print(f"numeric / closed form = {conv.rate.si * t.Ts.si:.4f}")

# TN grows as N^2 for short-range hopping
fit = numeric_scaling(problem, [64, 256, 1024, 4096])
print(f"TN ~ N^{fit.slope:.3f}")
